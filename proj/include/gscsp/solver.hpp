#ifndef GSCSP_SOLVER_HPP
#define GSCSP_SOLVER_HPP

#include <cstdint>

#include "gscsp/core.hpp"

namespace gscsp {

enum class SolveStatus { Solution, Infeasible };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    Assignment assignment; // empty unless status is Solution
    std::uint64_t opCount = 0;
};

/// Direct solver for down-staircase networks. Synchronized forward
/// scans: each variable's cursor only moves once its current value
/// provably belongs to no solution, so the result assigns every
/// variable the smallest value that occurs in any solution. Never
/// computes arc consistency.
///
/// opCount totals cursor advances, per-constraint checks and queue
/// operations; building the orientation tables is setup and not
/// counted. Throws NotDownStaircaseError when some constraint is not
/// down staircase.
SolveResult solveDscsp(const CspInstance& instance);

} // namespace gscsp

#endif
