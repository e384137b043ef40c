#include "gscsp/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>

#include "gscsp/classify.hpp"

namespace gscsp {

std::int64_t DetRng::uniformInt(std::int64_t lo, std::int64_t hi) {
    assert(lo <= hi);
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 0) { // full 64-bit span
        return static_cast<std::int64_t>(word());
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x = word();
    while (x >= limit) {
        x = word();
    }
    return lo + static_cast<std::int64_t>(x % range);
}

bool DetRng::chance(double p) {
    if (p <= 0.0) {
        return false;
    }
    if (p >= 1.0) {
        return true;
    }
    // 53-bit mantissa draw
    return (static_cast<double>(word() >> 11) / 9007199254740992.0) < p;
}

Domain randomDomain(DetRng& rng, int size, Value lo, Value hi) {
    if (size <= 0 || hi - lo + 1 < size) {
        throw InvalidSpecError("domain span too small for the requested size");
    }
    std::set<Value> picked;
    while (static_cast<int>(picked.size()) < size) {
        picked.insert(rng.uniformInt(lo, hi));
    }
    return Domain(std::vector<Value>(picked.begin(), picked.end()));
}

namespace {

std::vector<int> sortedSample(DetRng& rng, int count, int lo, int hi) {
    std::vector<int> v(static_cast<std::size_t>(count));
    for (auto& x : v) {
        x = static_cast<int>(rng.uniformInt(lo, hi));
    }
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<std::optional<SupportInterval>> randomDsRows(DetRng& rng, int rows, int cols,
                                                         const RandomConstraintOptions& opts) {
    auto los = sortedSample(rng, rows, 0, cols - 1);
    const int maxWidth = std::max(0, static_cast<int>(opts.density * (cols - 1) + 0.5));
    auto widths = sortedSample(rng, rows, 0, maxWidth);

    std::vector<int> his(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        his[static_cast<std::size_t>(r)] =
            std::min(cols - 1, los[static_cast<std::size_t>(r)] + widths[static_cast<std::size_t>(r)]);
    }
    if (opts.fullSupport) {
        los[0] = 0;
        his[static_cast<std::size_t>(rows) - 1] = cols - 1;
        for (int r = 1; r < rows; ++r) {
            // keep consecutive images overlapping or adjacent
            los[static_cast<std::size_t>(r)] =
                std::min(los[static_cast<std::size_t>(r)], his[static_cast<std::size_t>(r) - 1] + 1);
        }
    }

    std::vector<std::optional<SupportInterval>> out(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        if (!opts.fullSupport && rng.chance(opts.emptyRowProb)) {
            continue;
        }
        out[static_cast<std::size_t>(r)] =
            SupportInterval{los[static_cast<std::size_t>(r)], his[static_cast<std::size_t>(r)]};
    }
    return out;
}

} // namespace

RowConvexConstraint randomDsConstraint(DetRng& rng, VarId rowVar, VarId colVar, int rows,
                                       int cols, const RandomConstraintOptions& opts) {
    RowConvexConstraint c(rowVar, colVar, cols, randomDsRows(rng, rows, cols, opts));
    assert(isDownStaircase(c));
    return c;
}

RowConvexConstraint randomUsConstraint(DetRng& rng, VarId rowVar, VarId colVar, int rows,
                                       int cols, const RandomConstraintOptions& opts) {
    auto rowsVec = randomDsRows(rng, rows, cols, opts);
    std::reverse(rowsVec.begin(), rowsVec.end());
    RowConvexConstraint c(rowVar, colVar, cols, std::move(rowsVec));
    assert(isUpStaircase(c));
    return c;
}

namespace {

std::vector<std::pair<VarId, VarId>> topologyPairs(DetRng& rng, const GenSpec& spec) {
    std::vector<std::pair<VarId, VarId>> pairs;
    switch (spec.topology) {
    case Topology::Chain:
        for (VarId v = 0; v + 1 < spec.n; ++v) {
            pairs.emplace_back(v, v + 1);
        }
        break;
    case Topology::Cycle:
        if (spec.n < 3) {
            throw InvalidSpecError("a cycle needs at least three variables");
        }
        for (VarId v = 0; v + 1 < spec.n; ++v) {
            pairs.emplace_back(v, v + 1);
        }
        pairs.emplace_back(spec.n - 1, 0);
        break;
    case Topology::Random: {
        std::vector<std::pair<VarId, VarId>> all;
        for (VarId i = 0; i < spec.n; ++i) {
            for (VarId j = i + 1; j < spec.n; ++j) {
                all.emplace_back(i, j);
            }
        }
        if (spec.constraintCount < 0 || spec.constraintCount > static_cast<int>(all.size())) {
            throw InvalidSpecError("constraint count out of range for this variable count");
        }
        // partial Fisher-Yates
        for (int k = 0; k < spec.constraintCount; ++k) {
            const int pick = k + static_cast<int>(rng.uniformInt(0, static_cast<int>(all.size()) - 1 - k));
            std::swap(all[static_cast<std::size_t>(k)], all[static_cast<std::size_t>(pick)]);
            pairs.push_back(all[static_cast<std::size_t>(k)]);
        }
        break;
    }
    }
    return pairs;
}

} // namespace

CspInstance generate(const GenSpec& spec) {
    if (spec.n < 1 || spec.d < 1 || spec.density < 0.0 || spec.density > 1.0) {
        throw InvalidSpecError("generator spec out of range");
    }
    DetRng rng(spec.seed);

    std::vector<Domain> domains;
    domains.reserve(static_cast<std::size_t>(spec.n));
    for (int v = 0; v < spec.n; ++v) {
        domains.push_back(randomDomain(rng, spec.d, 0, 4 * static_cast<Value>(spec.d)));
    }
    CspInstance inst(std::move(domains));

    for (const auto& [i, j] : topologyPairs(rng, spec)) {
        switch (spec.kind) {
        case GenKind::BoundedDiff: {
            const Value center = rng.uniformInt(-spec.d, spec.d);
            const Value halfWidth = rng.uniformInt(0, spec.d);
            inst.addConstraint(makeDifferenceConstraint(i, j, inst.domain(i), inst.domain(j),
                                                        center - halfWidth, center + halfWidth));
            break;
        }
        case GenKind::RandomDs:
            inst.addConstraint(randomDsConstraint(rng, i, j, inst.domain(i).size(),
                                                  inst.domain(j).size(), {spec.density}));
            break;
        case GenKind::RandomUs:
            inst.addConstraint(randomUsConstraint(rng, i, j, inst.domain(i).size(),
                                                  inst.domain(j).size(), {spec.density}));
            break;
        }
    }
    return inst;
}

std::vector<Assignment> bruteForceSolutions(const CspInstance& instance, std::size_t limit) {
    double product = 1.0;
    for (const auto& d : instance.domains()) {
        product *= static_cast<double>(d.size());
    }
    if (product > 1e7) {
        throw TooLargeError("domain product exceeds the brute-force guard");
    }

    const int n = instance.varCount();
    // constraints looked up once per (deeper var, earlier var) pair
    std::vector<std::vector<std::pair<int, const RowConvexConstraint*>>> checks(
        static_cast<std::size_t>(n));
    for (const auto& c : instance.constraints()) {
        const VarId hiVar = std::max(c.rowVar(), c.colVar());
        checks[static_cast<std::size_t>(hiVar)].emplace_back(std::min(c.rowVar(), c.colVar()), &c);
    }

    std::vector<Assignment> found;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);

    auto consistentAt = [&](int depth) {
        for (const auto& [other, c] : checks[static_cast<std::size_t>(depth)]) {
            const int rowIdx = c->rowVar() == depth ? idx[static_cast<std::size_t>(depth)]
                                                    : idx[static_cast<std::size_t>(other)];
            const int colIdx = c->rowVar() == depth ? idx[static_cast<std::size_t>(other)]
                                                    : idx[static_cast<std::size_t>(depth)];
            if (!c->contains(rowIdx, colIdx)) {
                return false;
            }
        }
        return true;
    };

    // iterative lexicographic backtracking
    int depth = 0;
    while (depth >= 0) {
        if (idx[static_cast<std::size_t>(depth)] >= instance.domain(depth).size()) {
            idx[static_cast<std::size_t>(depth)] = 0;
            --depth;
            if (depth >= 0) {
                ++idx[static_cast<std::size_t>(depth)];
            }
            continue;
        }
        if (!consistentAt(depth)) {
            ++idx[static_cast<std::size_t>(depth)];
            continue;
        }
        if (depth + 1 == n) {
            Assignment a;
            for (int v = 0; v < n; ++v) {
                a.values.push_back(instance.domain(v).at(idx[static_cast<std::size_t>(v)]));
            }
            found.push_back(std::move(a));
            if (found.size() >= limit) {
                return found;
            }
            ++idx[static_cast<std::size_t>(depth)];
        } else {
            ++depth;
        }
    }
    return found;
}

AcResult ac3Reference(const CspInstance& instance) {
    const int n = instance.varCount();
    std::vector<std::vector<std::uint8_t>> live(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        live[static_cast<std::size_t>(v)].assign(
            static_cast<std::size_t>(instance.domain(v).size()), 1);
    }

    struct DirArc {
        VarId from;
        VarId to;
        DenseRelation grid; // rows over `from`
    };
    std::vector<DirArc> arcs;
    for (const auto& c : instance.constraints()) {
        DenseRelation fwd = toDense(c);
        DenseRelation rev(fwd.cols, fwd.rows);
        for (int r = 0; r < fwd.rows; ++r) {
            for (int col = 0; col < fwd.cols; ++col) {
                rev.set(col, r, fwd.at(r, col));
            }
        }
        arcs.push_back({c.rowVar(), c.colVar(), std::move(fwd)});
        arcs.push_back({c.colVar(), c.rowVar(), std::move(rev)});
    }

    std::uint64_t ops = 0;
    std::deque<int> work;
    for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
        work.push_back(a);
    }

    AcResult result;
    while (!work.empty()) {
        const int id = work.front();
        work.pop_front();
        const DirArc& arc = arcs[static_cast<std::size_t>(id)];
        bool changed = false;
        for (int r = 0; r < arc.grid.rows; ++r) {
            if (!live[static_cast<std::size_t>(arc.from)][static_cast<std::size_t>(r)]) {
                continue;
            }
            bool supported = false;
            for (int col = 0; col < arc.grid.cols; ++col) {
                ++ops;
                if (arc.grid.at(r, col) &&
                    live[static_cast<std::size_t>(arc.to)][static_cast<std::size_t>(col)]) {
                    supported = true;
                    break;
                }
            }
            if (!supported) {
                live[static_cast<std::size_t>(arc.from)][static_cast<std::size_t>(r)] = 0;
                changed = true;
            }
        }
        if (changed) {
            const auto& row = live[static_cast<std::size_t>(arc.from)];
            if (std::find(row.begin(), row.end(), std::uint8_t{1}) == row.end()) {
                result.status = AcStatus::EmptyDomain;
                result.emptyVar = arc.from;
                result.opCount = ops;
                return result;
            }
            for (int b = 0; b < static_cast<int>(arcs.size()); ++b) {
                if (arcs[static_cast<std::size_t>(b)].to == arc.from &&
                    arcs[static_cast<std::size_t>(b)].from != arc.to) {
                    work.push_back(b);
                }
            }
        }
    }

    result.status = AcStatus::Consistent;
    result.survivors.assign(static_cast<std::size_t>(n), {});
    for (int v = 0; v < n; ++v) {
        for (int k = 0; k < instance.domain(v).size(); ++k) {
            if (live[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)]) {
                result.survivors[static_cast<std::size_t>(v)].push_back(instance.domain(v).at(k));
            }
        }
    }
    result.opCount = ops;
    return result;
}

CspInstance diffChainInstance(int n, int d, std::uint64_t seed) {
    if (n < 2 || d < 2) {
        throw InvalidSpecError("chain family needs n >= 2 and d >= 2");
    }
    (void)seed; // the family is fully determined by n and d
    std::vector<Domain> domains;
    for (int v = 0; v + 1 < n; ++v) {
        std::vector<Value> vals(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            vals[static_cast<std::size_t>(k)] = k;
        }
        domains.emplace_back(std::move(vals));
    }
    // Trimmed tail domain: a pruning wave has to travel the whole chain.
    std::vector<Value> tail(static_cast<std::size_t>(d / 2 + 1));
    for (int k = 0; k <= d / 2; ++k) {
        tail[static_cast<std::size_t>(k)] = k;
    }
    domains.emplace_back(std::move(tail));

    CspInstance inst(std::move(domains));
    for (VarId v = 0; v + 1 < n; ++v) {
        inst.addConstraint(
            makeDifferenceConstraint(v, v + 1, inst.domain(v), inst.domain(v + 1), 0, 1));
    }
    return inst;
}

CspInstance plantedChainInstance(int n, int d, int maxSolIndex, std::uint64_t seed) {
    if (n < 2 || d < 2 || maxSolIndex < 0 || maxSolIndex >= d) {
        throw InvalidSpecError("planted chain parameters out of range");
    }
    DetRng rng(seed);
    std::vector<Value> planted(static_cast<std::size_t>(n));
    for (auto& p : planted) {
        p = rng.uniformInt(0, maxSolIndex);
    }

    std::vector<Domain> domains;
    for (int v = 0; v < n; ++v) {
        std::vector<Value> vals(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            vals[static_cast<std::size_t>(k)] = k;
        }
        domains.emplace_back(std::move(vals));
    }
    CspInstance inst(std::move(domains));
    for (VarId v = 0; v + 1 < n; ++v) {
        const Value delta = planted[static_cast<std::size_t>(v)] - planted[static_cast<std::size_t>(v) + 1];
        inst.addConstraint(
            makeDifferenceConstraint(v, v + 1, inst.domain(v), inst.domain(v + 1), delta, delta));
    }
    return inst;
}

CspInstance infeasibleChainInstance(int n, int d, std::uint64_t seed) {
    if (n < 2 || d < 2) {
        throw InvalidSpecError("chain family needs n >= 2 and d >= 2");
    }
    (void)seed;
    std::vector<Domain> domains;
    for (int v = 0; v < n; ++v) {
        std::vector<Value> vals(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            vals[static_cast<std::size_t>(k)] = k;
        }
        domains.emplace_back(std::move(vals));
    }
    CspInstance inst(std::move(domains));
    for (VarId v = 0; v + 2 < n; ++v) {
        inst.addConstraint(
            makeDifferenceConstraint(v, v + 1, inst.domain(v), inst.domain(v + 1), 0, 0));
    }
    // Last edge demands a difference no value pair can reach.
    inst.addConstraint(makeDifferenceConstraint(n - 2, n - 1, inst.domain(n - 2),
                                                inst.domain(n - 1), d, 2 * static_cast<Value>(d)));
    return inst;
}

} // namespace gscsp
