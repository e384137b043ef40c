#include "doctest.h"

#include "gscsp/classify.hpp"
#include "gscsp/io.hpp"
#include "gscsp/oracle.hpp"
#include "test_support.hpp"

using namespace gscsp;
using namespace gscsp::test;

TEST_CASE("brute force enumerates the weather solutions in order") {
    auto all = bruteForceSolutions(weatherInstance(false));
    REQUIRE(all.size() == 4);
    CHECK(all[0].values == std::vector<Value>{1, 2, 3});
    CHECK(all[1].values == std::vector<Value>{1, 2, 4});
    CHECK(all[2].values == std::vector<Value>{5, 6, 4});
    CHECK(all[3].values == std::vector<Value>{9, 8, 10});

    auto limited = bruteForceSolutions(weatherInstance(false), 2);
    CHECK(limited.size() == 2);
}

TEST_CASE("brute force with no constraints is the cartesian product") {
    std::vector<Domain> doms;
    doms.emplace_back(std::vector<Value>{1, 2});
    doms.emplace_back(std::vector<Value>{5, 6});
    CspInstance inst(std::move(doms));
    auto all = bruteForceSolutions(inst);
    REQUIRE(all.size() == 4);
    CHECK(all[0].values == std::vector<Value>{1, 5});
    CHECK(all[3].values == std::vector<Value>{2, 6});
}

TEST_CASE("brute force on an infeasible pair is empty") {
    std::vector<Domain> doms;
    doms.emplace_back(std::vector<Value>{1});
    doms.emplace_back(std::vector<Value>{6});
    CspInstance inst(std::move(doms));
    inst.addConstraint(makeDifferenceConstraint(0, 1, inst.domain(0), inst.domain(1), -3, 1));
    CHECK(bruteForceSolutions(inst).empty());
}

TEST_CASE("brute force refuses oversized products") {
    std::vector<Value> big;
    for (int k = 0; k < 500; ++k) {
        big.push_back(k);
    }
    std::vector<Domain> doms(4, Domain(big));
    CspInstance inst(std::move(doms));
    CHECK_THROWS_AS(bruteForceSolutions(inst), TooLargeError);
}

TEST_CASE("reference arc consistency on the weather fixture") {
    auto pruned = ac3Reference(weatherInstance(true));
    REQUIRE(pruned.status == AcStatus::Consistent);
    CHECK(pruned.survivors[2] == std::vector<Value>{3, 4, 10});

    auto same = ac3Reference(weatherInstance(false));
    REQUIRE(same.status == AcStatus::Consistent);
    CHECK(same.survivors[0] == std::vector<Value>{1, 5, 9});
    CHECK(same.survivors[1] == std::vector<Value>{2, 6, 8});
    CHECK(same.survivors[2] == std::vector<Value>{3, 4, 10});
}

TEST_CASE("reference arc consistency detects wipeouts") {
    std::vector<Domain> doms;
    doms.emplace_back(std::vector<Value>{1});
    doms.emplace_back(std::vector<Value>{6});
    CspInstance inst(std::move(doms));
    inst.addConstraint(makeDifferenceConstraint(0, 1, inst.domain(0), inst.domain(1), -3, 1));
    CHECK(ac3Reference(inst).status == AcStatus::EmptyDomain);
}

TEST_CASE("difference compilation reproduces the weather fixture file") {
    // the fixture builds through makeDifferenceConstraint; the shipped
    // file must parse to the identical instance
    auto built = weatherInstance(true);
    auto text = serializeInstance(built);
    CHECK(parseInstance(text) == built);
}

TEST_CASE("generated difference constraints are always down staircase") {
    DetRng rng(31);
    for (int iter = 0; iter < 100; ++iter) {
        GenSpec spec;
        spec.kind = GenKind::BoundedDiff;
        spec.n = static_cast<int>(rng.uniformInt(2, 6));
        spec.d = static_cast<int>(rng.uniformInt(1, 12));
        spec.seed = rng.word();
        auto inst = generate(spec);
        for (const auto& c : inst.constraints()) {
            CHECK(isDownStaircase(c));
        }
    }
}

TEST_CASE("random generators deliver their advertised class") {
    DetRng rng(32);
    for (int iter = 0; iter < 100; ++iter) {
        GenSpec spec;
        spec.kind = iter % 2 == 0 ? GenKind::RandomDs : GenKind::RandomUs;
        spec.n = static_cast<int>(rng.uniformInt(2, 6));
        spec.d = static_cast<int>(rng.uniformInt(1, 12));
        spec.density = 0.1 + 0.8 * (iter % 7) / 6.0;
        spec.seed = rng.word();
        auto inst = generate(spec);
        for (const auto& c : inst.constraints()) {
            auto rep = classify(c);
            CHECK((iter % 2 == 0 ? rep.ds : rep.us));
        }
    }
}

TEST_CASE("identical specs give identical instances") {
    GenSpec spec;
    spec.kind = GenKind::BoundedDiff;
    spec.n = 5;
    spec.d = 7;
    spec.seed = 123456789;
    spec.topology = Topology::Random;
    spec.constraintCount = 6;
    auto a = generate(spec);
    auto b = generate(spec);
    CHECK(a == b);
    CHECK(serializeInstance(a) == serializeInstance(b));

    spec.seed += 1;
    auto c = generate(spec);
    CHECK(serializeInstance(c) != serializeInstance(a));
}

TEST_CASE("generator validates its parameters") {
    GenSpec bad;
    bad.n = 0;
    CHECK_THROWS_AS(generate(bad), InvalidSpecError);
    bad = {};
    bad.density = 1.5;
    CHECK_THROWS_AS(generate(bad), InvalidSpecError);
    bad = {};
    bad.n = 2;
    bad.topology = Topology::Cycle;
    CHECK_THROWS_AS(generate(bad), InvalidSpecError);
    bad = {};
    bad.n = 3;
    bad.topology = Topology::Random;
    bad.constraintCount = 10;
    CHECK_THROWS_AS(generate(bad), InvalidSpecError);
}

TEST_CASE("full-support option really covers every row and column") {
    DetRng rng(33);
    for (int iter = 0; iter < 60; ++iter) {
        const int rows = static_cast<int>(rng.uniformInt(1, 9));
        const int cols = static_cast<int>(rng.uniformInt(1, 9));
        RandomConstraintOptions opts;
        opts.density = 0.3;
        opts.fullSupport = true;
        auto c = iter % 2 == 0 ? randomDsConstraint(rng, 0, 1, rows, cols, opts)
                               : randomUsConstraint(rng, 0, 1, rows, cols, opts);
        auto g = toDense(c);
        for (int r = 0; r < rows; ++r) {
            bool any = false;
            for (int col = 0; col < cols; ++col) {
                any = any || g.at(r, col);
            }
            CHECK(any);
        }
        for (int col = 0; col < cols; ++col) {
            bool any = false;
            for (int r = 0; r < rows; ++r) {
                any = any || g.at(r, col);
            }
            CHECK(any);
        }
    }
}
