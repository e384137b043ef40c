#include "gscsp/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gscsp {

namespace {

struct TokenLine {
    int number = 0;
    std::vector<std::string_view> tokens;
};

std::vector<TokenLine> tokenize(std::string_view text) {
    std::vector<TokenLine> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        ++number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        TokenLine out;
        out.number = number;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
                ++i;
            }
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
                ++i;
            }
            if (i > start) {
                out.tokens.push_back(line.substr(start, i - start));
            }
        }
        if (!out.tokens.empty()) {
            lines.push_back(std::move(out));
        }
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
    return lines;
}

std::int64_t parseInt(std::string_view tok, int line) {
    std::int64_t value = 0;
    const auto* begin = tok.data();
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
    }
    return value;
}

int parseVarId(std::string_view tok, int line, int n) {
    const std::int64_t v = parseInt(tok, line);
    if (v < 0 || v >= n) {
        throw ParseError(line, "variable id " + std::to_string(v) + " out of range");
    }
    return static_cast<int>(v);
}

} // namespace

CspInstance parseInstance(std::string_view text) {
    const auto lines = tokenize(text);
    std::size_t at = 0;

    auto expect = [&](const char* what) -> const TokenLine& {
        if (at >= lines.size()) {
            throw ParseError(lines.empty() ? 1 : lines.back().number + 1,
                             std::string("unexpected end of file, expected ") + what);
        }
        return lines[at];
    };

    {
        const auto& head = expect("'gscsp 1'");
        if (head.tokens.size() != 2 || head.tokens[0] != "gscsp" || head.tokens[1] != "1") {
            throw ParseError(head.number, "expected header 'gscsp 1'");
        }
        ++at;
    }

    int n = 0;
    {
        const auto& varsLine = expect("'vars <n>'");
        if (varsLine.tokens.size() != 2 || varsLine.tokens[0] != "vars") {
            throw ParseError(varsLine.number, "expected 'vars <n>'");
        }
        const std::int64_t declared = parseInt(varsLine.tokens[1], varsLine.number);
        if (declared < 1 || declared > 1'000'000) {
            throw ParseError(varsLine.number, "variable count out of range");
        }
        n = static_cast<int>(declared);
        ++at;
    }

    std::vector<std::optional<Domain>> domains(static_cast<std::size_t>(n));
    int domainsSeen = 0;
    while (at < lines.size() && lines[at].tokens[0] == "domain") {
        const auto& l = lines[at];
        if (l.tokens.size() < 3) {
            throw ParseError(l.number, "'domain' needs a variable id and at least one value");
        }
        const int id = parseVarId(l.tokens[1], l.number, n);
        if (domains[static_cast<std::size_t>(id)]) {
            throw ParseError(l.number, "domain of variable " + std::to_string(id) + " given twice");
        }
        std::vector<Value> values;
        values.reserve(l.tokens.size() - 2);
        for (std::size_t k = 2; k < l.tokens.size(); ++k) {
            values.push_back(parseInt(l.tokens[k], l.number));
        }
        for (std::size_t k = 1; k < values.size(); ++k) {
            if (values[k - 1] >= values[k]) {
                throw ParseError(l.number, "domain values must be strictly increasing");
            }
        }
        domains[static_cast<std::size_t>(id)] = Domain(std::move(values));
        ++domainsSeen;
        ++at;
    }
    if (domainsSeen != n) {
        const int where = at < lines.size() ? lines[at].number
                                            : (lines.empty() ? 1 : lines.back().number + 1);
        throw ParseError(where, "every variable needs a domain before the constraints");
    }

    std::vector<Domain> plain;
    plain.reserve(static_cast<std::size_t>(n));
    for (auto& d : domains) {
        plain.push_back(std::move(*d));
    }
    CspInstance inst(std::move(plain));

    while (at < lines.size()) {
        const auto& l = lines[at];
        if (l.tokens[0] != "constraint") {
            throw ParseError(l.number, "expected 'constraint', got '" + std::string(l.tokens[0]) + "'");
        }
        if (l.tokens.size() < 4) {
            throw ParseError(l.number, "'constraint' needs two variable ids and a form");
        }
        const int i = parseVarId(l.tokens[1], l.number, n);
        const int j = parseVarId(l.tokens[2], l.number, n);
        if (i == j) {
            throw ParseError(l.number, "a constraint must relate two distinct variables");
        }
        if (inst.constraintOn(i, j) != nullptr) {
            throw DuplicateConstraintError(l.number, i, j);
        }
        const auto& di = inst.domain(i);
        const auto& dj = inst.domain(j);

        if (l.tokens[3] == "diff") {
            if (l.tokens.size() != 6) {
                throw ParseError(l.number, "'diff' needs exactly two bounds");
            }
            const Value lo = parseInt(l.tokens[4], l.number);
            const Value hi = parseInt(l.tokens[5], l.number);
            if (lo > hi) {
                throw ParseError(l.number, "empty difference window");
            }
            inst.addConstraint(makeDifferenceConstraint(i, j, di, dj, lo, hi));
            ++at;
            continue;
        }

        if (l.tokens[3] != "intervals" || l.tokens.size() != 4) {
            throw ParseError(l.number, "constraint form must be 'intervals' or 'diff <lo> <hi>'");
        }
        ++at;
        std::vector<std::optional<SupportInterval>> rows(static_cast<std::size_t>(di.size()));
        bool closed = false;
        while (at < lines.size()) {
            const auto& rl = lines[at];
            if (rl.tokens[0] == "end") {
                if (rl.tokens.size() != 1) {
                    throw ParseError(rl.number, "'end' takes no arguments");
                }
                closed = true;
                ++at;
                break;
            }
            if (rl.tokens[0] != "row" || rl.tokens.size() != 4) {
                throw ParseError(rl.number, "expected 'row <value> <lo> <hi>' or 'end'");
            }
            const Value rowValue = parseInt(rl.tokens[1], rl.number);
            const Value loValue = parseInt(rl.tokens[2], rl.number);
            const Value hiValue = parseInt(rl.tokens[3], rl.number);
            const auto rowIdx = di.indexOf(rowValue);
            if (!rowIdx) {
                throw UnknownValueError(rl.number, "value " + std::to_string(rowValue) +
                                                       " is not in the domain of variable " +
                                                       std::to_string(i));
            }
            const auto loIdx = dj.indexOf(loValue);
            const auto hiIdx = dj.indexOf(hiValue);
            if (!loIdx || !hiIdx) {
                throw UnknownValueError(rl.number,
                                        "value " + std::to_string(loIdx ? hiValue : loValue) +
                                            " is not in the domain of variable " + std::to_string(j));
            }
            if (*loIdx > *hiIdx) {
                throw ParseError(rl.number, "interval bounds out of order");
            }
            if (rows[static_cast<std::size_t>(*rowIdx)]) {
                throw ParseError(rl.number, "row " + std::to_string(rowValue) + " given twice");
            }
            rows[static_cast<std::size_t>(*rowIdx)] = SupportInterval{*loIdx, *hiIdx};
            ++at;
        }
        if (!closed) {
            throw ParseError(lines.back().number + 1, "constraint block not closed with 'end'");
        }
        inst.addConstraint(RowConvexConstraint(i, j, dj.size(), std::move(rows)));
    }

    return inst;
}

CspInstance loadInstanceFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw GscspError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseInstance(buf.str());
}

std::string serializeInstance(const CspInstance& instance) {
    std::ostringstream out;
    out << "gscsp 1\n";
    out << "vars " << instance.varCount() << "\n";
    for (int v = 0; v < instance.varCount(); ++v) {
        out << "domain " << v;
        for (Value x : instance.domain(v).values()) {
            out << " " << x;
        }
        out << "\n";
    }
    for (const auto& c : instance.constraints()) {
        const auto& di = instance.domain(c.rowVar());
        const auto& dj = instance.domain(c.colVar());
        out << "constraint " << c.rowVar() << " " << c.colVar() << " intervals\n";
        for (int r = 0; r < c.rowCount(); ++r) {
            if (const auto& iv = c.image(r)) {
                out << "  row " << di.at(r) << " " << dj.at(iv->lo) << " " << dj.at(iv->hi) << "\n";
            }
        }
        out << "end\n";
    }
    return out.str();
}

void saveInstanceFile(const CspInstance& instance, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw GscspError("cannot open '" + path + "' for writing");
    }
    out << serializeInstance(instance);
}

} // namespace gscsp
