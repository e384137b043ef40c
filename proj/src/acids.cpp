#include "gscsp/acids.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <string>

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

std::vector<int> rowMaxs(const RowConvexConstraint& c) {
    std::vector<int> v(static_cast<std::size_t>(c.rowCount()), -1);
    for (int r = 0; r < c.rowCount(); ++r) {
        if (const auto& iv = c.image(r)) {
            v[static_cast<std::size_t>(r)] = iv->hi;
        }
    }
    return v;
}

} // namespace

AcidsEngine::AcidsEngine(const CspInstance& instance, AcOptions options)
    : inst_(instance), opts_(options), down_(options.direction == Direction::Down) {
    for (const auto& c : inst_.constraints()) {
        const bool ok = down_ ? isDownStaircase(c) : isUpStaircase(c);
        if (!ok) {
            throw ClassMismatchError("constraint (" + std::to_string(c.rowVar()) + "," +
                                     std::to_string(c.colVar()) + ") does not match the requested direction");
        }
    }
    buildArcs();
    initializeMin();
}

void AcidsEngine::buildArcs() {
    const int n = inst_.varCount();
    arcsFrom_.assign(static_cast<std::size_t>(n), {});
    arcsTo_.assign(static_cast<std::size_t>(n), {});
    alive_.resize(static_cast<std::size_t>(n));
    aliveCount_.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        alive_[static_cast<std::size_t>(v)].assign(
            static_cast<std::size_t>(inst_.domain(v).size()), 1);
        aliveCount_[static_cast<std::size_t>(v)] = inst_.domain(v).size();
    }

    auto addArc = [&](const RowConvexConstraint& c) {
        Arc a;
        a.from = c.rowVar();
        a.to = c.colVar();
        a.minIdx = rowMins(c);
        a.maxIdx = rowMaxs(c);
        const int rows = c.rowCount();
        a.next.assign(static_cast<std::size_t>(rows), -1);
        a.prev.assign(static_cast<std::size_t>(rows), -1);
        int last = -1;
        for (int r = 0; r < rows; ++r) {
            if (a.minIdx[static_cast<std::size_t>(r)] < 0) {
                continue; // unsupported rows never enter the view
            }
            a.prev[static_cast<std::size_t>(r)] = last;
            if (last >= 0) {
                a.next[static_cast<std::size_t>(last)] = r;
            }
            last = r;
        }
        a.minLo.assign(static_cast<std::size_t>(c.colCount()), -1);
        a.minHi.assign(static_cast<std::size_t>(c.colCount()), -1);
        a.enqueued.assign(static_cast<std::size_t>(c.colCount()), 0);
        const int id = static_cast<int>(arcs_.size());
        arcsFrom_[static_cast<std::size_t>(a.from)].push_back(id);
        arcsTo_[static_cast<std::size_t>(a.to)].push_back(id);
        arcs_.push_back(std::move(a));
    };

    for (const auto& c : inst_.constraints()) {
        addArc(c);
        addArc(transpose(c));
        const int fwd = static_cast<int>(arcs_.size()) - 2;
        arcs_[static_cast<std::size_t>(fwd)].paired = fwd + 1;
        arcs_[static_cast<std::size_t>(fwd) + 1].paired = fwd;
    }
}

void AcidsEngine::initializeMin() {
    // One simultaneous sweep of rows and columns per arc: supported rows
    // are grouped by their smallest support, which is monotone in the
    // scan direction, so every group is one contiguous run.
    for (auto& a : arcs_) {
        const int rows = static_cast<int>(a.minIdx.size());
        int runCol = -1;
        int runLo = -1;
        int runHi = -1;
        auto flush = [&]() {
            if (runCol >= 0) {
                a.minLo[static_cast<std::size_t>(runCol)] = runLo;
                a.minHi[static_cast<std::size_t>(runCol)] = runHi;
            }
        };
        const int begin = down_ ? 0 : rows - 1;
        const int step = down_ ? 1 : -1;
        for (int r = begin; r >= 0 && r < rows; r += step) {
            ++ops_;
            const int m = a.minIdx[static_cast<std::size_t>(r)];
            if (m < 0) {
                continue;
            }
            if (m != runCol) {
                flush();
                runCol = m;
                runLo = r;
                runHi = r;
            } else {
                runLo = std::min(runLo, r);
                runHi = std::max(runHi, r);
            }
        }
        flush();
    }
}

int AcidsEngine::arcId(VarId from, VarId to) const {
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        if (arcs_[i].from == from && arcs_[i].to == to) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

std::optional<std::pair<int, int>> AcidsEngine::minInterval(int arc, int colIdx) const {
    const Arc& a = arcs_[static_cast<std::size_t>(arc)];
    const int lo = a.minLo[static_cast<std::size_t>(colIdx)];
    if (lo < 0) {
        return std::nullopt;
    }
    return std::make_pair(lo, a.minHi[static_cast<std::size_t>(colIdx)]);
}

int AcidsEngine::succInView(int arc, int rowIdx) const {
    return arcs_[static_cast<std::size_t>(arc)].next[static_cast<std::size_t>(rowIdx)];
}

int AcidsEngine::predInView(int arc, int rowIdx) const {
    return arcs_[static_cast<std::size_t>(arc)].prev[static_cast<std::size_t>(rowIdx)];
}

int AcidsEngine::nextAliveInView(int arc, int rowIdx) {
    // Links of removed rows are stale but always point at rows removed
    // later, so the walk moves strictly forward and terminates. The
    // walked stale links are then rewritten to the hit, keeping repeat
    // walks over the same removed stretch short.
    Arc& a = arcs_[static_cast<std::size_t>(arc)];
    int r = a.next[static_cast<std::size_t>(rowIdx)];
    while (r >= 0 && !alive(a.from, r)) {
        ++ops_;
        r = a.next[static_cast<std::size_t>(r)];
    }
    int w = rowIdx;
    while (w >= 0 && a.next[static_cast<std::size_t>(w)] != r) {
        const int n = a.next[static_cast<std::size_t>(w)];
        a.next[static_cast<std::size_t>(w)] = r;
        w = n;
    }
    return r;
}

int AcidsEngine::prevAliveInView(int arc, int rowIdx) {
    Arc& a = arcs_[static_cast<std::size_t>(arc)];
    int r = a.prev[static_cast<std::size_t>(rowIdx)];
    while (r >= 0 && !alive(a.from, r)) {
        ++ops_;
        r = a.prev[static_cast<std::size_t>(r)];
    }
    int w = rowIdx;
    while (w >= 0 && a.prev[static_cast<std::size_t>(w)] != r) {
        const int p = a.prev[static_cast<std::size_t>(w)];
        a.prev[static_cast<std::size_t>(w)] = r;
        w = p;
    }
    return r;
}

std::vector<int> AcidsEngine::arcCons(int arc) {
    const Arc& a = arcs_[static_cast<std::size_t>(arc)];
    std::vector<int> delta;
    for (int r = 0; r < static_cast<int>(a.minIdx.size()); ++r) {
        ++ops_;
        if (a.minIdx[static_cast<std::size_t>(r)] < 0 && alive(a.from, r)) {
            delta.push_back(r);
        }
    }
    return delta;
}

void AcidsEngine::mergeMin(Arc& a, int colIdx, int lo, int hi) {
    ++ops_;
    int& storedLo = a.minLo[static_cast<std::size_t>(colIdx)];
    int& storedHi = a.minHi[static_cast<std::size_t>(colIdx)];
    if (storedLo < 0) {
        storedLo = lo;
        storedHi = hi;
    } else {
        // Hull of two runs of the same column. With several removals of
        // the same column domain pending, incoming intervals may lie on
        // either side of (or inside) the stored one.
        storedLo = std::min(storedLo, lo);
        storedHi = std::max(storedHi, hi);
    }
}

std::vector<int> AcidsEngine::localArcCons(int arc, int removedColIdx) {
    // Next remaining column value right now; the propagation loop
    // instead passes the successor it captured when queueing.
    return localArcCons(arc, removedColIdx,
                        nextAliveInView(arcs_[static_cast<std::size_t>(arc)].paired, removedColIdx));
}

std::vector<int> AcidsEngine::localArcCons(int arc, int removedColIdx, int succAtEnqueue) {
    Arc& a = arcs_[static_cast<std::size_t>(arc)];
    assert(!alive(a.to, removedColIdx));

    std::vector<int> delta;
    int lo = a.minLo[static_cast<std::size_t>(removedColIdx)];
    if (lo < 0) {
        return delta; // nobody's smallest support; nothing to update
    }
    const int hi = a.minHi[static_cast<std::size_t>(removedColIdx)];
    a.minLo[static_cast<std::size_t>(removedColIdx)] = -1;
    a.minHi[static_cast<std::size_t>(removedColIdx)] = -1;

    const int succJ = succAtEnqueue;

    if (down_) {
        // Rows in the interval carry nondecreasing largest supports, so
        // the doomed ones form a prefix; stop at the first survivor.
        int scan = alive(a.from, lo) ? lo : nextAliveInView(arc, lo);
        while (scan >= 0 && scan <= hi) {
            ++ops_;
            if (succJ >= 0 && a.maxIdx[static_cast<std::size_t>(scan)] >= succJ) {
                break;
            }
            delta.push_back(scan);
            scan = a.next[static_cast<std::size_t>(scan)];
        }
        if (scan >= 0 && scan <= hi) {
            mergeMin(a, succJ, scan, hi);
        }
    } else {
        // Up staircase: largest supports shrink down the rows, so the
        // doomed rows form a suffix; scan from the high end.
        int scan = alive(a.from, hi) ? hi : prevAliveInView(arc, hi);
        while (scan >= 0 && scan >= lo) {
            ++ops_;
            if (succJ >= 0 && a.maxIdx[static_cast<std::size_t>(scan)] >= succJ) {
                break;
            }
            delta.push_back(scan);
            scan = a.prev[static_cast<std::size_t>(scan)];
        }
        if (scan >= 0 && scan >= lo) {
            mergeMin(a, succJ, lo, scan);
        }
        // ascending, like every removal batch: queue entries must keep
        // value order so a captured successor is never processed first
        std::reverse(delta.begin(), delta.end());
    }
    return delta;
}

void AcidsEngine::remove(VarId var, int valueIdx) {
    assert(alive(var, valueIdx) && "value removed twice");
    for (int arcIdx : arcsFrom_[static_cast<std::size_t>(var)]) {
        Arc& a = arcs_[static_cast<std::size_t>(arcIdx)];
        if (a.minIdx[static_cast<std::size_t>(valueIdx)] < 0) {
            continue; // never in this view
        }
        ++ops_;
        const int p = a.prev[static_cast<std::size_t>(valueIdx)];
        const int n = a.next[static_cast<std::size_t>(valueIdx)];
        if (p >= 0) {
            a.next[static_cast<std::size_t>(p)] = n;
        }
        if (n >= 0) {
            a.prev[static_cast<std::size_t>(n)] = p;
        }
        // valueIdx keeps its own links: pending scans step across it.
    }
    alive_[static_cast<std::size_t>(var)][static_cast<std::size_t>(valueIdx)] = 0;
    --aliveCount_[static_cast<std::size_t>(var)];
}

void AcidsEngine::enqueueRemovals(VarId var, const std::vector<int>& removed) {
    // Runs before the batch is unlinked: the successor captured here is
    // exact at this instant. It may be removed itself before the entry
    // is processed, but only by a later batch, so its own entries (and
    // the interval handover they perform) are always still ahead in the
    // queue.
    for (int v : removed) {
        for (int arcIdx : arcsTo_[static_cast<std::size_t>(var)]) {
            Arc& a = arcs_[static_cast<std::size_t>(arcIdx)];
            if (opts_.checkInvariants) {
                if (a.enqueued[static_cast<std::size_t>(v)]) {
                    throw InvariantViolationError("value enqueued twice for one arc");
                }
                a.enqueued[static_cast<std::size_t>(v)] = 1;
            }
            ++ops_;
            const int succ = arcs_[static_cast<std::size_t>(a.paired)].next[static_cast<std::size_t>(v)];
            queue_.push_back({arcIdx, v, succ});
        }
    }
}

bool AcidsEngine::removeBatch(VarId var, const std::vector<int>& removed) {
    for (int v : removed) {
        remove(var, v);
    }
    return aliveCount_[static_cast<std::size_t>(var)] > 0;
}

AcResult AcidsEngine::run() {
    assert(!ran_ && "an engine drives a single run");
    ran_ = true;

    AcResult result;
    result.direction = opts_.direction;

    auto finish = [&](AcStatus status, VarId emptyVar) {
        result.status = status;
        result.emptyVar = emptyVar;
        result.opCount = ops_;
        result.survivors.assign(static_cast<std::size_t>(inst_.varCount()), {});
        if (status == AcStatus::Consistent) {
            for (int v = 0; v < inst_.varCount(); ++v) {
                const auto& dom = inst_.domain(v);
                for (int k = 0; k < dom.size(); ++k) {
                    if (alive(v, k)) {
                        result.survivors[static_cast<std::size_t>(v)].push_back(dom.at(k));
                    }
                }
            }
        }
        return result;
    };

    for (int arc = 0; arc < arcCount(); ++arc) {
        const VarId from = arcs_[static_cast<std::size_t>(arc)].from;
        auto delta = arcCons(arc);
        enqueueRemovals(from, delta);
        if (!removeBatch(from, delta)) {
            return finish(AcStatus::EmptyDomain, from);
        }
    }

    while (!queue_.empty()) {
        const QueueEntry entry = queue_.front();
        queue_.pop_front();
        ++ops_;
        const VarId from = arcs_[static_cast<std::size_t>(entry.arc)].from;
        auto delta = localArcCons(entry.arc, entry.col, entry.succ);
        enqueueRemovals(from, delta);
        const bool ok = removeBatch(from, delta);
        if (opts_.checkInvariants) {
            verifyInvariants(false);
        }
        if (!ok) {
            return finish(AcStatus::EmptyDomain, from);
        }
    }

    if (opts_.checkInvariants) {
        verifyInvariants(true);
    }
    return finish(AcStatus::Consistent, -1);
}

void AcidsEngine::verifyInvariants(bool quiescent) const {
    auto fail = [](const std::string& what) { throw InvariantViolationError(what); };

    // Pending removals, per arc: their columns keep their stored
    // interval until the queue entry is processed.
    std::vector<std::set<int>> pending(arcs_.size());
    for (const auto& entry : queue_) {
        pending[static_cast<std::size_t>(entry.arc)].insert(entry.col);
    }

    for (std::size_t ai = 0; ai < arcs_.size(); ++ai) {
        const Arc& a = arcs_[ai];
        const int cols = static_cast<int>(a.minLo.size());
        const int rows = static_cast<int>(a.minIdx.size());

        // Stored intervals may only belong to live or pending columns.
        for (int c = 0; c < cols; ++c) {
            if (a.minLo[static_cast<std::size_t>(c)] >= 0 && !alive(a.to, c) &&
                pending[ai].count(c) == 0) {
                fail("MIN interval left behind by a processed column");
            }
        }

        // Ownership per live supported row. The owner is the smallest
        // live-or-pending column whose interval covers the row: rows
        // parked at a dead column stay with it until its queue entry
        // runs, everyone else must be filed under their smallest live
        // support.
        for (int r = 0; r < rows; ++r) {
            const int lo = a.minIdx[static_cast<std::size_t>(r)];
            if (lo < 0 || !alive(a.from, r)) {
                continue;
            }
            const int hi = a.maxIdx[static_cast<std::size_t>(r)];

            int owner = -1;
            int ownerCount = 0;
            for (int c = 0; c < cols; ++c) {
                if (a.minLo[static_cast<std::size_t>(c)] < 0 ||
                    r < a.minLo[static_cast<std::size_t>(c)] ||
                    r > a.minHi[static_cast<std::size_t>(c)]) {
                    continue;
                }
                if (!alive(a.to, c) && pending[ai].count(c) == 0) {
                    continue;
                }
                ++ownerCount;
                if (owner < 0) {
                    owner = c;
                }
            }
            if (owner < 0) {
                fail("live row not covered by any MIN interval");
            }
            if (owner < lo || owner > hi) {
                fail("owning column outside the row's support range");
            }

            int smallestLive = -1;
            for (int c = lo; c <= hi; ++c) {
                if (alive(a.to, c)) {
                    smallestLive = c;
                    break;
                }
            }
            if (alive(a.to, owner)) {
                if (owner != smallestLive) {
                    fail("live owner is not the row's smallest live support");
                }
            } else if (smallestLive >= 0 && smallestLive <= owner) {
                fail("live support at or before a dead owning column");
            }
            if (quiescent && (ownerCount != 1 || !alive(a.to, owner) || owner != smallestLive)) {
                fail("ownership not exact at the fixpoint");
            }
        }

        // Live columns' intervals: their live members must be pairwise
        // disjoint and ordered (reversed for the up direction).
        int lastEdge = -1; // largest live member seen so far, in scan order
        for (int step = 0; step < cols; ++step) {
            const int c = down_ ? step : cols - 1 - step;
            if (!alive(a.to, c) || a.minLo[static_cast<std::size_t>(c)] < 0) {
                continue;
            }
            int first = -1;
            int last = -1;
            for (int r = a.minLo[static_cast<std::size_t>(c)];
                 r <= a.minHi[static_cast<std::size_t>(c)]; ++r) {
                if (alive(a.from, r)) {
                    if (first < 0) {
                        first = r;
                    }
                    last = r;
                }
            }
            if (first < 0) {
                continue;
            }
            if (first <= lastEdge) {
                fail("MIN intervals of live columns overlap or are out of order");
            }
            lastEdge = last;
        }
    }
}

AcResult runAcids(const CspInstance& instance, const AcOptions& options) {
    AcidsEngine engine(instance, options);
    return engine.run();
}

std::pair<Assignment, Assignment> extractBoundSolutions(const CspInstance& instance,
                                                        const AcResult& result) {
    if (result.direction != Direction::Down) {
        throw NotApplicableError(
            "bound solutions are only certified for down-staircase networks");
    }
    if (result.status != AcStatus::Consistent) {
        throw InvalidSpecError("bound solutions require a consistent result");
    }
    Assignment first;
    Assignment last;
    for (int v = 0; v < instance.varCount(); ++v) {
        const auto& surv = result.survivors[static_cast<std::size_t>(v)];
        if (surv.empty()) {
            throw InvalidSpecError("consistent result with an empty survivor set");
        }
        first.values.push_back(surv.front());
        last.values.push_back(surv.back());
    }
    return {first, last};
}

} // namespace gscsp
