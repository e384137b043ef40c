#include "gscsp/core.hpp"

#include <algorithm>
#include <limits>

namespace gscsp {

Domain::Domain(std::vector<Value> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw InvalidSpecError("domain must not be empty");
    }
    for (std::size_t k = 1; k < values_.size(); ++k) {
        if (values_[k - 1] >= values_[k]) {
            throw InvalidSpecError("domain values must be strictly increasing");
        }
    }
}

std::optional<int> Domain::indexOf(Value v) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), v);
    if (it == values_.end() || *it != v) {
        return std::nullopt;
    }
    return static_cast<int>(it - values_.begin());
}

RowConvexConstraint::RowConvexConstraint(VarId rowVar, VarId colVar, int colCount,
                                         std::vector<std::optional<SupportInterval>> rows)
    : rowVar_(rowVar), colVar_(colVar), colCount_(colCount), rows_(std::move(rows)) {
    if (colCount_ <= 0 || rows_.empty()) {
        throw InvalidSpecError("constraint needs at least one row and one column");
    }
    for (const auto& iv : rows_) {
        if (!iv) {
            continue;
        }
        if (iv->lo > iv->hi || iv->lo < 0 || iv->hi >= colCount_) {
            throw InvalidSpecError("support interval out of column range");
        }
    }
}

RowConvexConstraint fromDense(VarId rowVar, VarId colVar, const DenseRelation& grid) {
    std::vector<std::optional<SupportInterval>> rows;
    rows.reserve(static_cast<std::size_t>(grid.rows));
    for (int r = 0; r < grid.rows; ++r) {
        int lo = -1;
        int hi = -1;
        for (int c = 0; c < grid.cols; ++c) {
            if (!grid.at(r, c)) {
                continue;
            }
            if (lo < 0) {
                lo = c;
            } else if (c != hi + 1) {
                throw NotRowConvexError(r);
            }
            hi = c;
        }
        if (lo < 0) {
            rows.emplace_back(std::nullopt);
        } else {
            rows.emplace_back(SupportInterval{lo, hi});
        }
    }
    return RowConvexConstraint(rowVar, colVar, grid.cols, std::move(rows));
}

DenseRelation toDense(const RowConvexConstraint& c) {
    DenseRelation grid(c.rowCount(), c.colCount());
    for (int r = 0; r < c.rowCount(); ++r) {
        const auto& iv = c.image(r);
        if (!iv) {
            continue;
        }
        for (int col = iv->lo; col <= iv->hi; ++col) {
            grid.set(r, col, true);
        }
    }
    return grid;
}

namespace {

// Saturating addition keeps timestamp-scale windows safe near the
// int64 boundaries.
Value addSat(Value a, Value b) {
    if (b > 0 && a > std::numeric_limits<Value>::max() - b) {
        return std::numeric_limits<Value>::max();
    }
    if (b < 0 && a < std::numeric_limits<Value>::min() - b) {
        return std::numeric_limits<Value>::min();
    }
    return a + b;
}

} // namespace

RowConvexConstraint makeDifferenceConstraint(VarId i, VarId j, const Domain& di,
                                             const Domain& dj, Value lo, Value hi) {
    if (lo > hi) {
        throw InvalidSpecError("difference window is empty");
    }
    std::vector<std::optional<SupportInterval>> rows;
    rows.reserve(static_cast<std::size_t>(di.size()));
    const auto& colValues = dj.values();
    for (int r = 0; r < di.size(); ++r) {
        // lo <= v - w <= hi  <=>  v - hi <= w <= v - lo
        Value wLo = addSat(di.at(r), -hi);
        Value wHi = addSat(di.at(r), -lo);
        auto first = std::lower_bound(colValues.begin(), colValues.end(), wLo);
        auto last = std::upper_bound(colValues.begin(), colValues.end(), wHi);
        if (first == last) {
            rows.emplace_back(std::nullopt);
        } else {
            rows.emplace_back(SupportInterval{static_cast<int>(first - colValues.begin()),
                                              static_cast<int>(last - colValues.begin()) - 1});
        }
    }
    return RowConvexConstraint(i, j, dj.size(), std::move(rows));
}

CspInstance::CspInstance(std::vector<Domain> domains) : domains_(std::move(domains)) {
    if (domains_.empty()) {
        throw InvalidSpecError("instance needs at least one variable");
    }
}

void CspInstance::addConstraint(RowConvexConstraint c) {
    const VarId i = c.rowVar();
    const VarId j = c.colVar();
    if (i < 0 || i >= varCount() || j < 0 || j >= varCount()) {
        throw InvalidSpecError("constraint references an unknown variable");
    }
    if (i == j) {
        throw InvalidSpecError("constraint must relate two distinct variables");
    }
    if (c.rowCount() != domain(i).size() || c.colCount() != domain(j).size()) {
        throw InvalidSpecError("constraint shape does not match the domains");
    }
    if (constraintOn(i, j) != nullptr) {
        throw InvalidSpecError("pair (" + std::to_string(std::min(i, j)) + "," +
                               std::to_string(std::max(i, j)) + ") already has a constraint");
    }
    // Kept sorted by unordered pair: serialized files and run traces
    // come out canonical regardless of insertion order.
    auto key = [](const RowConvexConstraint& x) {
        return std::make_pair(std::min(x.rowVar(), x.colVar()), std::max(x.rowVar(), x.colVar()));
    };
    auto it = std::lower_bound(
        constraints_.begin(), constraints_.end(), c,
        [&](const RowConvexConstraint& a, const RowConvexConstraint& b) { return key(a) < key(b); });
    constraints_.insert(it, std::move(c));
}

const RowConvexConstraint* CspInstance::constraintOn(VarId i, VarId j) const {
    for (const auto& c : constraints_) {
        if ((c.rowVar() == i && c.colVar() == j) || (c.rowVar() == j && c.colVar() == i)) {
            return &c;
        }
    }
    return nullptr;
}

std::vector<std::pair<VarId, VarId>> CspInstance::arcs() const {
    std::vector<std::pair<VarId, VarId>> out;
    out.reserve(constraints_.size() * 2);
    for (const auto& c : constraints_) {
        out.emplace_back(c.rowVar(), c.colVar());
        out.emplace_back(c.colVar(), c.rowVar());
    }
    return out;
}

bool satisfies(const CspInstance& instance, const Assignment& a) {
    if (static_cast<int>(a.values.size()) != instance.varCount()) {
        return false;
    }
    std::vector<int> idx(a.values.size());
    for (std::size_t v = 0; v < a.values.size(); ++v) {
        auto k = instance.domain(static_cast<VarId>(v)).indexOf(a.values[v]);
        if (!k) {
            return false;
        }
        idx[v] = *k;
    }
    for (const auto& c : instance.constraints()) {
        if (!c.contains(idx[static_cast<std::size_t>(c.rowVar())],
                        idx[static_cast<std::size_t>(c.colVar())])) {
            return false;
        }
    }
    return true;
}

} // namespace gscsp
