#ifndef GSCSP_IO_HPP
#define GSCSP_IO_HPP

#include <string>
#include <string_view>

#include "gscsp/core.hpp"

namespace gscsp {

class ParseError : public GscspError {
public:
    ParseError(int line, const std::string& what)
        : GscspError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A row or interval bound names a value missing from its domain.
class UnknownValueError : public ParseError {
public:
    using ParseError::ParseError;
};

/// A second constraint on an unordered pair that already has one.
class DuplicateConstraintError : public ParseError {
public:
    DuplicateConstraintError(int line, VarId i, VarId j)
        : ParseError(line, "pair (" + std::to_string(std::min(i, j)) + "," +
                               std::to_string(std::max(i, j)) + ") already has a constraint"),
          first_(std::min(i, j)), second_(std::max(i, j)) {}
    VarId first() const { return first_; }
    VarId second() const { return second_; }

private:
    VarId first_;
    VarId second_;
};

/// Instance file grammar (UTF-8, `#` comments, whitespace-separated):
///
///     gscsp 1
///     vars <n>
///     domain <varId> <v1> <v2> ... <vk>        # strictly increasing
///     constraint <i> <j> intervals             # explicit rows
///       row <valueInDi> <loValueInDj> <hiValueInDj>
///     end
///     constraint <i> <j> diff <lo> <hi>        # lo <= Xi - Xj <= hi
///
/// Omitted rows mean an empty image; `diff` is compiled to interval
/// rows while parsing.
CspInstance parseInstance(std::string_view text);

CspInstance loadInstanceFile(const std::string& path);

/// Canonical form: domains in variable order, constraints sorted by
/// unordered pair, explicit interval rows only. parse(serialize(x)) is
/// x for every instance, and serialize(parse(f)) is f for canonical f.
std::string serializeInstance(const CspInstance& instance);

void saveInstanceFile(const CspInstance& instance, const std::string& path);

} // namespace gscsp

#endif
