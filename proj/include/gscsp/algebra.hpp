#ifndef GSCSP_ALGEBRA_HPP
#define GSCSP_ALGEBRA_HPP

#include <cstdint>

#include "gscsp/core.hpp"

namespace gscsp {

/// Swaps the roles of the two variables. Row u of the result spans from
/// the first to the last input row supporting u. Input must be a down
/// or up staircase constraint; the result stays in the same class.
RowConvexConstraint transpose(const RowConvexConstraint& c);

/// Per-row interval intersection. Operands need identical shapes and a
/// common staircase class; the result stays in that class.
RowConvexConstraint intersect(const RowConvexConstraint& a, const RowConvexConstraint& b);

/// Relational composition of a on (i, j) with b on (j, k). Both down or
/// both up staircase; the result is down staircase either way.
RowConvexConstraint compose(const RowConvexConstraint& a, const RowConvexConstraint& b);

/// Basic-step counter shared by the three operations, for complexity
/// checks in tests. Counts row visits and lookups; thread local.
std::uint64_t algebraSteps();
void resetAlgebraSteps();

} // namespace gscsp

#endif
