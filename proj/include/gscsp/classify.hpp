#ifndef GSCSP_CLASSIFY_HPP
#define GSCSP_CLASSIFY_HPP

#include "gscsp/core.hpp"

namespace gscsp {

/// Component orderings of a staircase (monotone) constraint. The first
/// tag orders the row variable, the second the column variable:
/// membership of (v, w) implies membership of every (v', w') with
/// v' first-ordered v and w' second-ordered w.
enum class StairKind {
    LeGe, ///< rows <=, cols >=
    GeLe, ///< rows >=, cols <=
    LeLe, ///< rows <=, cols <=
    GeGe, ///< rows >=, cols >=
};

constexpr int kStairKindCount = 4;

const char* stairKindName(StairKind k);

/// Membership flags for one constraint across the classes this library
/// works with. Down/up staircase and connected-row-convex flags are
/// computed from the interval encoding; min/max closure and the four
/// staircase flags by exhaustive checks over the member tuples.
struct ClassReport {
    bool rowConvex = false;
    bool ds = false;
    bool us = false;
    bool crc = false;
    bool minClosed = false;
    bool maxClosed = false;
    bool staircase[kStairKindCount] = {false, false, false, false};

    bool stair(StairKind k) const { return staircase[static_cast<int>(k)]; }
    bool anyStaircase() const {
        return staircase[0] || staircase[1] || staircase[2] || staircase[3];
    }
};

ClassReport classify(const RowConvexConstraint& c);

/// Overload for arbitrary 0/1 relations. When the grid is not row
/// convex, ds/us/crc are false; closure and staircase flags are still
/// evaluated on the raw relation.
ClassReport classify(const DenseRelation& grid);

/// O(d) predicates used as engine preconditions: row endpoints
/// nondecreasing (down) or nonincreasing (up) across non-empty rows.
bool isDownStaircase(const RowConvexConstraint& c);
bool isUpStaircase(const RowConvexConstraint& c);

} // namespace gscsp

#endif
