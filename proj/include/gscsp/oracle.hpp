#ifndef GSCSP_ORACLE_HPP
#define GSCSP_ORACLE_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "gscsp/acids.hpp"
#include "gscsp/core.hpp"

namespace gscsp {

/// Seed-addressed random source with portable draws. The engine is the
/// standard 64-bit Mersenne twister; integer ranges are produced by
/// rejection sampling on raw 64-bit words, so identical seeds give
/// identical streams on every platform and standard library.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t word() { return eng_(); }

    /// Uniform draw from [lo, hi], both inclusive.
    std::int64_t uniformInt(std::int64_t lo, std::int64_t hi);

    bool chance(double p);

private:
    std::mt19937_64 eng_;
};

enum class GenKind { BoundedDiff, RandomDs, RandomUs };
enum class Topology { Chain, Cycle, Random };

struct GenSpec {
    GenKind kind = GenKind::BoundedDiff;
    int n = 2;
    int d = 4;
    double density = 0.5;
    std::uint64_t seed = 0;
    Topology topology = Topology::Chain;
    int constraintCount = 0; // only read for Topology::Random
};

/// Deterministic instance generator: identical specs give identical
/// instances. Bounded-difference constraints are down staircase by
/// construction; the random kinds emit monotone interval rows of the
/// advertised class.
CspInstance generate(const GenSpec& spec);

/// Building blocks, exposed for tests that need single constraints.
Domain randomDomain(DetRng& rng, int size, Value lo, Value hi);

struct RandomConstraintOptions {
    double density = 0.5;
    /// Force every row and every column to carry support, with
    /// consecutive images overlapping or adjacent.
    bool fullSupport = false;
    /// Independently blank rows with this probability.
    double emptyRowProb = 0.0;
};

RowConvexConstraint randomDsConstraint(DetRng& rng, VarId rowVar, VarId colVar, int rows,
                                       int cols, const RandomConstraintOptions& opts = {});
RowConvexConstraint randomUsConstraint(DetRng& rng, VarId rowVar, VarId colVar, int rows,
                                       int cols, const RandomConstraintOptions& opts = {});

/// All satisfying assignments in lexicographic order, up to limit.
/// Guarded: throws TooLargeError when the domain product exceeds 1e7.
std::vector<Assignment> bruteForceSolutions(const CspInstance& instance,
                                            std::size_t limit = static_cast<std::size_t>(-1));

/// Textbook AC-3 on dense membership grids. Works on any binary
/// network; reference semantics for the staircase engine.
AcResult ac3Reference(const CspInstance& instance);

// Benchmark families. All three are bounded-difference chains over
// {0..d-1}; identical seeds give identical instances.

/// Arc-consistent after pruning roughly half of every domain.
CspInstance diffChainInstance(int n, int d, std::uint64_t seed);

/// Satisfiable, with every variable's smallest solution value at index
/// maxSolIndex or below regardless of d.
CspInstance plantedChainInstance(int n, int d, int maxSolIndex, std::uint64_t seed);

/// Unsatisfiable; the last edge's window clears the value range, which
/// forces one cursor across a whole domain.
CspInstance infeasibleChainInstance(int n, int d, std::uint64_t seed);

} // namespace gscsp

#endif
