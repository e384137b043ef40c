#ifndef GSCSP_CORE_HPP
#define GSCSP_CORE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gscsp {

using Value = std::int64_t;
using VarId = int;

class GscspError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A row of the constraint matrix has ones separated by a zero.
class NotRowConvexError : public GscspError {
public:
    explicit NotRowConvexError(int row)
        : GscspError("row " + std::to_string(row) + " is not row convex"), row_(row) {}
    int row() const { return row_; }

private:
    int row_;
};

class DomainMismatchError : public GscspError {
public:
    using GscspError::GscspError;
};

class MixedClassError : public GscspError {
public:
    using GscspError::GscspError;
};

/// Input is neither a down staircase nor an up staircase constraint.
class NotStaircaseError : public GscspError {
public:
    using GscspError::GscspError;
};

class NotDownStaircaseError : public GscspError {
public:
    using GscspError::GscspError;
};

class ClassMismatchError : public GscspError {
public:
    using GscspError::GscspError;
};

class NotApplicableError : public GscspError {
public:
    using GscspError::GscspError;
};

class TooLargeError : public GscspError {
public:
    using GscspError::GscspError;
};

class InvalidSpecError : public GscspError {
public:
    using GscspError::GscspError;
};

/// Sorted set of candidate values for one variable. Immutable after
/// construction; algorithms never shrink a Domain, they track surviving
/// values in their own views.
class Domain {
public:
    /// Values must be strictly increasing and non-empty.
    explicit Domain(std::vector<Value> values);

    int size() const { return static_cast<int>(values_.size()); }
    Value at(int idx) const { return values_[static_cast<std::size_t>(idx)]; }
    const std::vector<Value>& values() const { return values_; }

    /// Index of v, or nullopt if v is not a member.
    std::optional<int> indexOf(Value v) const;

    bool operator==(const Domain&) const = default;

private:
    std::vector<Value> values_;
};

/// Inclusive index range [lo, hi] into a column domain.
struct SupportInterval {
    int lo = 0;
    int hi = 0;

    bool contains(int idx) const { return lo <= idx && idx <= hi; }
    bool operator==(const SupportInterval&) const = default;
};

/// 0/1 membership grid, row-major. Used at I/O boundaries and by the
/// oracle implementations; the solvers work on interval rows only.
struct DenseRelation {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> bits;

    DenseRelation() = default;
    DenseRelation(int r, int c) : rows(r), cols(c), bits(static_cast<std::size_t>(r) * c, 0) {}

    bool at(int r, int c) const { return bits[static_cast<std::size_t>(r) * cols + c] != 0; }
    void set(int r, int c, bool v) { bits[static_cast<std::size_t>(r) * cols + c] = v ? 1 : 0; }

    bool operator==(const DenseRelation&) const = default;
};

/// Binary constraint in interval form: one optional support interval per
/// row value. Row r relates to column c exactly when r's interval
/// contains c; an absent interval is an empty row.
class RowConvexConstraint {
public:
    RowConvexConstraint(VarId rowVar, VarId colVar, int colCount,
                        std::vector<std::optional<SupportInterval>> rows);

    VarId rowVar() const { return rowVar_; }
    VarId colVar() const { return colVar_; }
    int rowCount() const { return static_cast<int>(rows_.size()); }
    int colCount() const { return colCount_; }

    const std::optional<SupportInterval>& image(int row) const {
        return rows_[static_cast<std::size_t>(row)];
    }
    const std::vector<std::optional<SupportInterval>>& rows() const { return rows_; }

    bool contains(int row, int col) const {
        const auto& iv = rows_[static_cast<std::size_t>(row)];
        return iv && iv->contains(col);
    }

    bool operator==(const RowConvexConstraint&) const = default;

private:
    VarId rowVar_;
    VarId colVar_;
    int colCount_;
    std::vector<std::optional<SupportInterval>> rows_;
};

/// Interval encoding of a dense grid. Throws NotRowConvexError if some
/// row's ones are not contiguous. Empty rows map to absent intervals.
RowConvexConstraint fromDense(VarId rowVar, VarId colVar, const DenseRelation& grid);

DenseRelation toDense(const RowConvexConstraint& c);

/// Compiles lo <= Xi - Xj <= hi over the given domains into interval rows.
RowConvexConstraint makeDifferenceConstraint(VarId i, VarId j, const Domain& di,
                                             const Domain& dj, Value lo, Value hi);

/// Variables, their domains, and at most one constraint per unordered
/// pair of distinct variables.
class CspInstance {
public:
    explicit CspInstance(std::vector<Domain> domains);

    /// Rejects constraints on invalid variables, self pairs, pairs that
    /// already carry a constraint, and shape mismatches with the domains.
    void addConstraint(RowConvexConstraint c);

    int varCount() const { return static_cast<int>(domains_.size()); }
    const Domain& domain(VarId v) const { return domains_[static_cast<std::size_t>(v)]; }
    const std::vector<Domain>& domains() const { return domains_; }

    const std::vector<RowConvexConstraint>& constraints() const { return constraints_; }

    /// The stored constraint touching {i, j} in either orientation, or null.
    const RowConvexConstraint* constraintOn(VarId i, VarId j) const;

    /// All ordered pairs (i, j) such that {i, j} carries a constraint.
    std::vector<std::pair<VarId, VarId>> arcs() const;

    bool operator==(const CspInstance&) const = default;

private:
    std::vector<Domain> domains_;
    std::vector<RowConvexConstraint> constraints_;
};

/// One value per variable.
struct Assignment {
    std::vector<Value> values;

    bool operator==(const Assignment&) const = default;
};

/// Direct evaluation: every value belongs to its domain and every
/// constraint holds for the assigned pair.
bool satisfies(const CspInstance& instance, const Assignment& a);

} // namespace gscsp

#endif
