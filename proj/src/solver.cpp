#include "gscsp/solver.hpp"

#include <cassert>
#include <deque>
#include <string>
#include <vector>

#include "gscsp/algebra.hpp"
#include "gscsp/classify.hpp"

namespace gscsp {

namespace {

std::vector<int> rowMins(const RowConvexConstraint& c) {
    std::vector<int> v(static_cast<std::size_t>(c.rowCount()), -1);
    for (int r = 0; r < c.rowCount(); ++r) {
        if (const auto& iv = c.image(r)) {
            v[static_cast<std::size_t>(r)] = iv->lo;
        }
    }
    return v;
}

// One constraint as seen from one of its endpoints. mine[r] is the
// smallest supporting index of the neighbour's domain (-1: row r has no
// support); theirs is the same table from the neighbour's side.
struct Edge {
    VarId other = -1;
    const std::vector<int>* mine = nullptr;
    const std::vector<int>* theirs = nullptr;
};

} // namespace

SolveResult solveDscsp(const CspInstance& instance) {
    for (const auto& c : instance.constraints()) {
        if (!isDownStaircase(c)) {
            throw NotDownStaircaseError("constraint (" + std::to_string(c.rowVar()) + "," +
                                        std::to_string(c.colVar()) + ") is not down staircase");
        }
    }

    const int n = instance.varCount();
    const std::size_t pairs = instance.constraints().size();

    // Setup: both orientations of every constraint as min-support rows.
    std::vector<std::vector<int>> fwd(pairs);
    std::vector<std::vector<int>> rev(pairs);
    std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < pairs; ++p) {
        const auto& c = instance.constraints()[p];
        fwd[p] = rowMins(c);
        rev[p] = rowMins(transpose(c));
        edges[static_cast<std::size_t>(c.rowVar())].push_back({c.colVar(), &fwd[p], &rev[p]});
        edges[static_cast<std::size_t>(c.colVar())].push_back({c.rowVar(), &rev[p], &fwd[p]});
    }

    std::vector<int> scan(static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> flag(static_cast<std::size_t>(n), 0);
    std::deque<VarId> queue;
    int sum = 0;
    std::uint64_t ops = 0;

    SolveResult result;
    for (VarId v = 0; v < n; ++v) {
        queue.push_back(v);
        ++ops;
    }

    auto atEnd = [&](VarId v) { return scan[static_cast<std::size_t>(v)] >= instance.domain(v).size(); };

    while (sum < n) {
        if (queue.empty()) {
            throw GscspError("internal: work queue drained with unchecked variables left");
        }
        const VarId j = queue.front();
        queue.pop_front();
        ++ops;
        assert(flag[static_cast<std::size_t>(j)] == 0);

    restart:
        for (const Edge& e : edges[static_cast<std::size_t>(j)]) {
            ++ops;
            const VarId k = e.other;

            // Skip rows of scan_j without any support under this constraint.
            bool movedJ = false;
            while (!atEnd(j) && (*e.mine)[static_cast<std::size_t>(scan[static_cast<std::size_t>(j)])] < 0) {
                ++scan[static_cast<std::size_t>(j)];
                ++ops;
                movedJ = true;
            }
            if (atEnd(j)) {
                result.opCount = ops;
                return result;
            }
            if (movedJ) {
                goto restart; // earlier constraints saw the old value
            }

            // Same for the neighbour; its flag is necessarily 0 here,
            // since a raised flag certifies a supported cursor.
            while (!atEnd(k) && (*e.theirs)[static_cast<std::size_t>(scan[static_cast<std::size_t>(k)])] < 0) {
                assert(flag[static_cast<std::size_t>(k)] == 0);
                ++scan[static_cast<std::size_t>(k)];
                ++ops;
            }
            if (atEnd(k)) {
                result.opCount = ops;
                return result;
            }

            const int needJ = (*e.theirs)[static_cast<std::size_t>(scan[static_cast<std::size_t>(k)])];
            if (scan[static_cast<std::size_t>(j)] < needJ) {
                assert(needJ > scan[static_cast<std::size_t>(j)]); // cursors never move back
                scan[static_cast<std::size_t>(j)] = needJ;
                ++ops;
                goto restart;
            }
            const int needK = (*e.mine)[static_cast<std::size_t>(scan[static_cast<std::size_t>(j)])];
            if (scan[static_cast<std::size_t>(k)] < needK) {
                assert(needK > scan[static_cast<std::size_t>(k)]);
                scan[static_cast<std::size_t>(k)] = needK;
                ++ops;
                if (flag[static_cast<std::size_t>(k)] == 1) {
                    flag[static_cast<std::size_t>(k)] = 0;
                    --sum;
                    queue.push_back(k);
                    ++ops;
                }
            }
        }

        flag[static_cast<std::size_t>(j)] = 1;
        ++sum;
    }

    result.status = SolveStatus::Solution;
    for (VarId v = 0; v < n; ++v) {
        result.assignment.values.push_back(instance.domain(v).at(scan[static_cast<std::size_t>(v)]));
    }
    result.opCount = ops;
    return result;
}

} // namespace gscsp
