#include "doctest.h"

#include <algorithm>

#include "gscsp/acids.hpp"
#include "gscsp/oracle.hpp"
#include "test_support.hpp"

using namespace gscsp;
using namespace gscsp::test;

namespace {

CspInstance singlePairInstance(const RowConvexConstraint& c, int rowDomain, int colDomain) {
    std::vector<Domain> doms;
    std::vector<Value> a, b;
    for (int k = 0; k < rowDomain; ++k) {
        a.push_back(k + 1);
    }
    for (int k = 0; k < colDomain; ++k) {
        b.push_back(k + 1);
    }
    doms.emplace_back(std::move(a));
    doms.emplace_back(std::move(b));
    CspInstance inst(std::move(doms));
    inst.addConstraint(c);
    return inst;
}

bool sameSurvivors(const AcResult& lhs, const AcResult& rhs) {
    if (lhs.status != rhs.status) {
        return false;
    }
    if (lhs.status != AcStatus::Consistent) {
        return true; // wiped out either way; the failing variable may differ
    }
    return lhs.survivors == rhs.survivors;
}

} // namespace

TEST_CASE("initial smallest-support intervals on the five-step staircase") {
    auto inst = singlePairInstance(stairFixture5x5(), 5, 5);
    AcidsEngine eng(inst);
    const int arc = eng.arcId(0, 1);
    REQUIRE(arc >= 0);
    CHECK(eng.minInterval(arc, 0) == std::pair<int, int>{0, 1});
    CHECK(!eng.minInterval(arc, 1).has_value());
    CHECK(eng.minInterval(arc, 2) == std::pair<int, int>{2, 3});
    CHECK(!eng.minInterval(arc, 3).has_value());
    CHECK(eng.minInterval(arc, 4) == std::pair<int, int>{4, 4});
}

TEST_CASE("initial smallest-support intervals on the identity") {
    auto inst = singlePairInstance(fromDense(0, 1, grid({"100", "010", "001"})), 3, 3);
    AcidsEngine eng(inst);
    const int arc = eng.arcId(0, 1);
    for (int v = 0; v < 3; ++v) {
        CHECK(eng.minInterval(arc, v) == std::pair<int, int>{v, v});
    }
}

TEST_CASE("initial smallest-support intervals for an up staircase") {
    // rows [2,3], [1,2], [1,1] over values {1,2,3}
    RowConvexConstraint c(0, 1, 3,
                          {SupportInterval{1, 2}, SupportInterval{0, 1}, SupportInterval{0, 0}});
    auto inst = singlePairInstance(c, 3, 3);
    AcidsEngine eng(inst, {Direction::Up, false});
    const int arc = eng.arcId(0, 1);
    CHECK(eng.minInterval(arc, 0) == std::pair<int, int>{1, 2});
    CHECK(eng.minInterval(arc, 1) == std::pair<int, int>{0, 0});
    CHECK(!eng.minInterval(arc, 2).has_value());
}

TEST_CASE("arcCons lists the unsupported rows") {
    SUBCASE("no empty rows, no removals") {
        auto inst = singlePairInstance(stairFixture5x5(), 5, 5);
        AcidsEngine eng(inst);
        CHECK(eng.arcCons(eng.arcId(0, 1)).empty());
    }
    SUBCASE("sole value without partner") {
        std::vector<Domain> doms;
        doms.emplace_back(std::vector<Value>{1});
        doms.emplace_back(std::vector<Value>{6});
        CspInstance inst(std::move(doms));
        inst.addConstraint(makeDifferenceConstraint(0, 1, inst.domain(0), inst.domain(1), -3, 1));
        AcidsEngine eng(inst);
        CHECK(eng.arcCons(eng.arcId(0, 1)) == std::vector<int>{0});
    }
    SUBCASE("rows emptied in the middle") {
        RowConvexConstraint c(0, 1, 3,
                              {SupportInterval{0, 0}, std::nullopt, SupportInterval{1, 1},
                               std::nullopt, SupportInterval{2, 2}});
        auto inst = singlePairInstance(c, 5, 3);
        AcidsEngine eng(inst);
        CHECK(eng.arcCons(eng.arcId(0, 1)) == std::vector<int>{1, 3});
    }
}

TEST_CASE("localArcCons walks the staircase trace") {
    auto inst = singlePairInstance(stairFixture5x5(), 5, 5);
    AcidsEngine eng(inst);
    const int arc = eng.arcId(0, 1);

    // drop the first column value: both rows survive into column 1
    eng.remove(1, 0);
    auto delta = eng.localArcCons(arc, 0);
    CHECK(delta.empty());
    CHECK(eng.minInterval(arc, 1) == std::pair<int, int>{0, 1});
    CHECK(!eng.minInterval(arc, 0).has_value());

    // drop the second: row 0 ends at column 1 and dies; row 1 moves on
    eng.remove(1, 1);
    delta = eng.localArcCons(arc, 1);
    CHECK(delta == std::vector<int>{0});
    CHECK(eng.minInterval(arc, 2) == std::pair<int, int>{1, 3});
}

TEST_CASE("localArcCons with no successor prunes the whole interval") {
    auto inst = singlePairInstance(stairFixture5x5(), 5, 5);
    AcidsEngine eng(inst);
    const int arc = eng.arcId(0, 1);
    eng.remove(1, 4); // last column value; rows depending on it have no fallback
    auto delta = eng.localArcCons(arc, 4);
    CHECK(delta == std::vector<int>{4});
}

TEST_CASE("localArcCons returns immediately for columns owning no interval") {
    auto inst = singlePairInstance(stairFixture5x5(), 5, 5);
    AcidsEngine eng(inst);
    const int arc = eng.arcId(0, 1);
    const auto before = eng.opCount();
    eng.remove(1, 1);
    auto delta = eng.localArcCons(arc, 1);
    CHECK(delta.empty());
    for (int col = 0; col < 5; ++col) {
        if (col == 1) {
            continue;
        }
        bool present = eng.minInterval(arc, col).has_value();
        bool expected = col == 0 || col == 2 || col == 4;
        CHECK(present == expected);
    }
    CHECK(eng.opCount() - before <= 2); // the splice plus the early exit
}

TEST_CASE("remove splices every view of the variable") {
    // two constraints touching variable 0 so its removal shows up twice
    std::vector<Domain> doms;
    doms.emplace_back(std::vector<Value>{1, 2, 3});
    doms.emplace_back(std::vector<Value>{1, 2, 3});
    doms.emplace_back(std::vector<Value>{1, 2, 3});
    CspInstance inst(std::move(doms));
    auto full = [](VarId i, VarId j) {
        return RowConvexConstraint(
            i, j, 3, {SupportInterval{0, 2}, SupportInterval{0, 2}, SupportInterval{0, 2}});
    };
    inst.addConstraint(full(0, 1));
    inst.addConstraint(full(0, 2));
    AcidsEngine eng(inst);

    const int a01 = eng.arcId(0, 1);
    const int a02 = eng.arcId(0, 2);
    eng.remove(0, 1);
    CHECK(!eng.alive(0, 1));
    CHECK(eng.succInView(a01, 0) == 2);
    CHECK(eng.predInView(a01, 2) == 0);
    CHECK(eng.succInView(a02, 0) == 2);
    CHECK(eng.predInView(a02, 2) == 0);

    eng.remove(0, 0);
    eng.remove(0, 2);
    CHECK(eng.succInView(a01, 2) == -1);
    CHECK(eng.predInView(a01, 0) == -1);
}

TEST_CASE("runAcids on the weather fixture prunes exactly the outlier") {
    auto inst = weatherInstance(true);
    auto result = runAcids(inst, {Direction::Down, true});
    REQUIRE(result.status == AcStatus::Consistent);
    CHECK(result.survivors[0] == std::vector<Value>{1, 5, 9});
    CHECK(result.survivors[1] == std::vector<Value>{2, 6, 8});
    CHECK(result.survivors[2] == std::vector<Value>{3, 4, 10});

    auto reference = ac3Reference(inst);
    CHECK(sameSurvivors(result, reference));
}

TEST_CASE("runAcids reports the first wiped-out variable") {
    std::vector<Domain> doms;
    doms.emplace_back(std::vector<Value>{1});
    doms.emplace_back(std::vector<Value>{6});
    CspInstance inst(std::move(doms));
    inst.addConstraint(makeDifferenceConstraint(0, 1, inst.domain(0), inst.domain(1), -3, 1));
    auto result = runAcids(inst);
    CHECK(result.status == AcStatus::EmptyDomain);
    CHECK(result.emptyVar == 0);
}

TEST_CASE("an already consistent instance is a fixpoint") {
    std::vector<Domain> doms;
    doms.emplace_back(std::vector<Value>{1, 2, 3});
    doms.emplace_back(std::vector<Value>{1, 2, 3});
    CspInstance inst(std::move(doms));
    inst.addConstraint(makeDifferenceConstraint(0, 1, inst.domain(0), inst.domain(1), -2, 2));
    auto result = runAcids(inst, {Direction::Down, true});
    REQUIRE(result.status == AcStatus::Consistent);
    CHECK(result.survivors[0] == inst.domain(0).values());
    CHECK(result.survivors[1] == inst.domain(1).values());
}

TEST_CASE("direction mismatch is refused") {
    auto inst = weatherInstance(false);
    CHECK_THROWS_AS(runAcids(inst, {Direction::Up, false}), ClassMismatchError);
}

TEST_CASE("up-staircase propagation matches the reference") {
    DetRng rng(606);
    for (int iter = 0; iter < 120; ++iter) {
        const int n = static_cast<int>(rng.uniformInt(2, 5));
        GenSpec spec;
        spec.kind = GenKind::RandomUs;
        spec.n = n;
        spec.d = static_cast<int>(rng.uniformInt(1, 10));
        spec.density = 0.2 + 0.15 * (iter % 5);
        spec.seed = rng.word();
        spec.topology = n >= 3 && iter % 3 == 0 ? Topology::Cycle : Topology::Chain;
        auto inst = generate(spec);
        auto mine = runAcids(inst, {Direction::Up, true});
        auto ref = ac3Reference(inst);
        CHECK(sameSurvivors(mine, ref));
    }
}

TEST_CASE("down-staircase propagation matches the reference on varied networks") {
    DetRng rng(607);
    for (int iter = 0; iter < 200; ++iter) {
        const int n = static_cast<int>(rng.uniformInt(2, 6));
        GenSpec spec;
        spec.kind = iter % 2 == 0 ? GenKind::RandomDs : GenKind::BoundedDiff;
        spec.n = n;
        spec.d = static_cast<int>(rng.uniformInt(1, 10));
        spec.density = 0.2 + 0.15 * (iter % 5);
        spec.seed = rng.word();
        if (n >= 3 && iter % 3 == 0) {
            spec.topology = Topology::Cycle;
        } else if (n >= 2 && iter % 3 == 1) {
            spec.topology = Topology::Random;
            spec.constraintCount = static_cast<int>(rng.uniformInt(1, n * (n - 1) / 2));
        }
        auto inst = generate(spec);
        auto mine = runAcids(inst, {Direction::Down, true});
        auto ref = ac3Reference(inst);
        CHECK(sameSurvivors(mine, ref));
    }
}

TEST_CASE("propagation handles networks with unsupported rows inside constraints") {
    DetRng rng(608);
    for (int iter = 0; iter < 120; ++iter) {
        const int n = static_cast<int>(rng.uniformInt(2, 5));
        std::vector<Domain> doms;
        for (int v = 0; v < n; ++v) {
            doms.push_back(randomDomain(rng, static_cast<int>(rng.uniformInt(1, 8)), 0, 40));
        }
        CspInstance inst(std::move(doms));
        for (VarId v = 0; v + 1 < n; ++v) {
            RandomConstraintOptions opts;
            opts.density = 0.4;
            opts.emptyRowProb = 0.3;
            inst.addConstraint(randomDsConstraint(rng, v, v + 1, inst.domain(v).size(),
                                                  inst.domain(v + 1).size(), opts));
        }
        auto mine = runAcids(inst, {Direction::Down, true});
        auto ref = ac3Reference(inst);
        CHECK(sameSurvivors(mine, ref));
    }
    for (int iter = 0; iter < 120; ++iter) {
        const int n = static_cast<int>(rng.uniformInt(2, 5));
        std::vector<Domain> doms;
        for (int v = 0; v < n; ++v) {
            doms.push_back(randomDomain(rng, static_cast<int>(rng.uniformInt(1, 8)), 0, 40));
        }
        CspInstance inst(std::move(doms));
        for (VarId v = 0; v + 1 < n; ++v) {
            RandomConstraintOptions opts;
            opts.density = 0.4;
            opts.emptyRowProb = 0.3;
            inst.addConstraint(randomUsConstraint(rng, v, v + 1, inst.domain(v).size(),
                                                  inst.domain(v + 1).size(), opts));
        }
        auto mine = runAcids(inst, {Direction::Up, true});
        auto ref = ac3Reference(inst);
        CHECK(sameSurvivors(mine, ref));
    }
}

TEST_CASE("propagation survives deep cascades with checks enabled") {
    // larger domains so removal batches, parked intervals and stale
    // links actually pile up
    DetRng rng(909);
    for (int iter = 0; iter < 12; ++iter) {
        GenSpec spec;
        spec.kind = iter % 2 == 0 ? GenKind::BoundedDiff : GenKind::RandomDs;
        spec.n = 4;
        spec.d = 40 + 10 * (iter % 3);
        spec.density = 0.3;
        spec.seed = rng.word();
        spec.topology = iter % 3 == 0 ? Topology::Cycle : Topology::Chain;
        auto inst = generate(spec);
        auto mine = runAcids(inst, {Direction::Down, true});
        auto ref = ac3Reference(inst);
        CHECK(sameSurvivors(mine, ref));
    }
    for (int iter = 0; iter < 8; ++iter) {
        GenSpec spec;
        spec.kind = GenKind::RandomUs;
        spec.n = 4;
        spec.d = 40 + 10 * (iter % 3);
        spec.density = 0.25;
        spec.seed = rng.word();
        auto inst = generate(spec);
        auto mine = runAcids(inst, {Direction::Up, true});
        auto ref = ac3Reference(inst);
        CHECK(sameSurvivors(mine, ref));
    }
}

TEST_CASE("bound solutions of the weather fixture") {
    auto inst = weatherInstance(true);
    auto result = runAcids(inst);
    REQUIRE(result.status == AcStatus::Consistent);
    auto [first, last] = extractBoundSolutions(inst, result);
    CHECK(first.values == std::vector<Value>{1, 2, 3});
    CHECK(last.values == std::vector<Value>{9, 8, 10});
    CHECK(satisfies(inst, first));
    CHECK(satisfies(inst, last));

    // frozen from the exhaustive enumeration of the 27 assignments
    auto all = bruteForceSolutions(weatherInstance(false));
    REQUIRE(all.size() == 4);
    CHECK(all[0].values == std::vector<Value>{1, 2, 3});
    CHECK(all[1].values == std::vector<Value>{1, 2, 4});
    CHECK(all[2].values == std::vector<Value>{5, 6, 4});
    CHECK(all[3].values == std::vector<Value>{9, 8, 10});
}

TEST_CASE("bound solutions in degenerate shapes") {
    SUBCASE("one variable, no constraints") {
        CspInstance inst({Domain({4, 8, 15})});
        auto result = runAcids(inst);
        auto [first, last] = extractBoundSolutions(inst, result);
        CHECK(first.values == std::vector<Value>{4});
        CHECK(last.values == std::vector<Value>{15});
    }
    SUBCASE("all singleton domains") {
        std::vector<Domain> doms;
        doms.emplace_back(std::vector<Value>{2});
        doms.emplace_back(std::vector<Value>{3});
        CspInstance inst(std::move(doms));
        inst.addConstraint(makeDifferenceConstraint(0, 1, inst.domain(0), inst.domain(1), -1, 0));
        auto result = runAcids(inst);
        REQUIRE(result.status == AcStatus::Consistent);
        auto [first, last] = extractBoundSolutions(inst, result);
        CHECK(first == last);
    }
}

TEST_CASE("bound solutions are refused for the up direction") {
    RowConvexConstraint c(0, 1, 3,
                          {SupportInterval{1, 2}, SupportInterval{0, 1}, SupportInterval{0, 0}});
    auto inst = singlePairInstance(c, 3, 3);
    auto result = runAcids(inst, {Direction::Up, false});
    REQUIRE(result.status == AcStatus::Consistent);
    CHECK_THROWS_AS(extractBoundSolutions(inst, result), NotApplicableError);
}

TEST_CASE("first and last survivors satisfy every down-staircase network") {
    DetRng rng(6060);
    for (int iter = 0; iter < 150; ++iter) {
        GenSpec spec;
        spec.kind = iter % 2 == 0 ? GenKind::BoundedDiff : GenKind::RandomDs;
        spec.n = static_cast<int>(rng.uniformInt(1, 6));
        spec.d = static_cast<int>(rng.uniformInt(1, 10));
        spec.density = 0.5;
        spec.seed = rng.word();
        auto inst = generate(spec);
        auto result = runAcids(inst, {Direction::Down, true});
        if (result.status != AcStatus::Consistent) {
            continue;
        }
        auto [first, last] = extractBoundSolutions(inst, result);
        CHECK(satisfies(inst, first));
        CHECK(satisfies(inst, last));
    }
}
