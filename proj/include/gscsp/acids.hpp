#ifndef GSCSP_ACIDS_HPP
#define GSCSP_ACIDS_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "gscsp/core.hpp"

namespace gscsp {

/// Staircase orientation of a whole instance: every constraint (and its
/// transpose) must classify as down staircase or as up staircase.
enum class Direction { Down, Up };

enum class AcStatus { Consistent, EmptyDomain };

struct AcResult {
    AcStatus status = AcStatus::Consistent;
    VarId emptyVar = -1;
    Direction direction = Direction::Down;
    /// Per variable, the surviving values in increasing order. Unspecified
    /// past the failing variable when status is EmptyDomain.
    std::vector<std::vector<Value>> survivors;
    std::uint64_t opCount = 0;
};

struct AcOptions {
    Direction direction = Direction::Down;
    /// Re-verify the smallest-support map and its interval structure
    /// after every propagation step. Slow; for tests and debugging.
    bool checkInvariants = false;
};

/// A structural check failed while checkInvariants was active.
class InvariantViolationError : public GscspError {
public:
    using GscspError::GscspError;
};

/// Arc-consistency engine for staircase constraint networks.
///
/// Both orientations of every constraint are materialized up front. Each
/// oriented arc (i, j) keeps the rows of D_i that have support as a
/// doubly linked order, plus a map MIN from each value of D_j to the
/// interval of D_i rows whose smallest remaining support it is. Removing
/// a value v_j only touches the rows recorded in MIN(v_j): the rows whose
/// largest support precedes the next remaining value of D_j are pruned,
/// and the rest migrate to MIN(succ(v_j)) as one interval merge.
///
/// opCount totals queue pushes/pops, scan-cursor advances, interval
/// merges and removal splices; it is the measure the complexity tests
/// track. A run owns its state; one engine drives one run.
class AcidsEngine {
public:
    AcidsEngine(const CspInstance& instance, AcOptions options = {});

    /// Executes initial pruning plus propagation to the fixpoint (or the
    /// first domain wipeout). Call once, on a freshly built engine.
    AcResult run();

    // Stepwise surface, used by the unit tests to drive single
    // operations against hand-built states.
    int arcCount() const { return static_cast<int>(arcs_.size()); }
    int arcId(VarId from, VarId to) const;
    VarId arcFrom(int arc) const { return arcs_[static_cast<std::size_t>(arc)].from; }
    VarId arcTo(int arc) const { return arcs_[static_cast<std::size_t>(arc)].to; }

    /// Rows of the arc's source domain that have no support at all.
    std::vector<int> arcCons(int arc);

    /// Reaction to the removal of removedColIdx from the arc's column
    /// domain: returns the rows that lost their last support and shifts
    /// the survivors' interval to the next column value. The value must
    /// already be removed.
    std::vector<int> localArcCons(int arc, int removedColIdx);

    /// Variant taking the successor the propagation loop captured when
    /// it queued the removal; the captured value may itself be removed
    /// by now, in which case survivors park at its interval until its
    /// own queue entry runs.
    std::vector<int> localArcCons(int arc, int removedColIdx, int succAtEnqueue);

    /// Unlinks the value from every view of var and clears its flag.
    void remove(VarId var, int valueIdx);

    std::optional<std::pair<int, int>> minInterval(int arc, int colIdx) const;
    bool alive(VarId var, int valueIdx) const {
        return alive_[static_cast<std::size_t>(var)][static_cast<std::size_t>(valueIdx)] != 0;
    }
    /// Next/previous linked row of the arc's view; -1 at the ends.
    int succInView(int arc, int rowIdx) const;
    int predInView(int arc, int rowIdx) const;

    std::uint64_t opCount() const { return ops_; }

private:
    struct Arc {
        VarId from = -1;
        VarId to = -1;
        int paired = -1;
        std::vector<int> minIdx; // per row; -1 marks an empty row
        std::vector<int> maxIdx;
        std::vector<int> next; // linked order over supported rows; stale once removed
        std::vector<int> prev;
        std::vector<int> minLo; // per column value; -1 marks an absent MIN interval
        std::vector<int> minHi;
        std::vector<std::uint8_t> enqueued; // per column value, debug double-enqueue guard
    };

    struct QueueEntry {
        int arc;
        int col;
        int succ; // next linked column value, captured before the removal
    };

    void buildArcs();
    void initializeMin();
    void enqueueRemovals(VarId var, const std::vector<int>& removed);
    bool removeBatch(VarId var, const std::vector<int>& removed); // false on wipeout
    int nextAliveInView(int arc, int rowIdx);                     // walks stale links
    int prevAliveInView(int arc, int rowIdx);
    void mergeMin(Arc& a, int colIdx, int lo, int hi);
    void verifyInvariants(bool quiescent) const;

    const CspInstance& inst_;
    AcOptions opts_;
    bool down_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> arcsFrom_;
    std::vector<std::vector<int>> arcsTo_;
    std::vector<std::vector<std::uint8_t>> alive_;
    std::vector<int> aliveCount_;
    std::deque<QueueEntry> queue_;
    mutable std::uint64_t ops_ = 0;
    bool ran_ = false;
};

AcResult runAcids(const CspInstance& instance, const AcOptions& options = {});

/// The assignments taking each variable's first (respectively last)
/// surviving value after a consistent down-staircase run. Both satisfy
/// every constraint. Up-staircase results are refused: arc consistency
/// is not known to pin a solution there.
std::pair<Assignment, Assignment> extractBoundSolutions(const CspInstance& instance,
                                                        const AcResult& result);

} // namespace gscsp

#endif
