#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gscsp/acids.hpp"
#include "gscsp/algebra.hpp"
#include "gscsp/classify.hpp"
#include "gscsp/core.hpp"
#include "gscsp/io.hpp"
#include "gscsp/oracle.hpp"
#include "gscsp/solver.hpp"

using namespace gscsp;

namespace {

// 0 ok, 1 infeasible/empty (a result), 2 usage or input error,
// 3 class precondition violation.
constexpr int kExitOk = 0;
constexpr int kExitNoSolution = 1;
constexpr int kExitUsage = 2;
constexpr int kExitClass = 3;

std::string renderAssignment(const Assignment& a) {
    std::ostringstream out;
    for (std::size_t v = 0; v < a.values.size(); ++v) {
        out << (v ? " " : "") << "X" << v << "=" << a.values[v];
    }
    return out.str();
}

void emitInstance(const CspInstance& inst, const std::string& outPath) {
    if (outPath.empty()) {
        std::cout << serializeInstance(inst);
    } else {
        saveInstanceFile(inst, outPath);
    }
}

const char* yesNo(bool b) { return b ? "yes" : "no"; }

int cmdClassify(const std::string& file) {
    auto inst = loadInstanceFile(file);
    for (const auto& c : inst.constraints()) {
        auto rep = classify(c);
        std::cout << "constraint " << c.rowVar() << " " << c.colVar() << ":"
                  << " rowconvex=" << yesNo(rep.rowConvex) << " ds=" << yesNo(rep.ds)
                  << " us=" << yesNo(rep.us) << " crc=" << yesNo(rep.crc)
                  << " minclosed=" << yesNo(rep.minClosed) << " maxclosed=" << yesNo(rep.maxClosed)
                  << " staircase=";
        bool any = false;
        for (int k = 0; k < kStairKindCount; ++k) {
            if (rep.staircase[k]) {
                std::cout << (any ? "," : "") << stairKindName(static_cast<StairKind>(k));
                any = true;
            }
        }
        if (!any) {
            std::cout << "none";
        }
        std::cout << "\n";
    }
    return kExitOk;
}

int emitAcResult(const AcResult& result) {
    if (result.status == AcStatus::EmptyDomain) {
        std::cout << "status EMPTY_DOMAIN " << result.emptyVar << "\n";
        std::cout << "opcount " << result.opCount << "\n";
        return kExitNoSolution;
    }
    std::cout << "status CONSISTENT\n";
    for (std::size_t v = 0; v < result.survivors.size(); ++v) {
        std::cout << "domain " << v;
        for (Value x : result.survivors[v]) {
            std::cout << " " << x;
        }
        std::cout << "\n";
    }
    std::cout << "opcount " << result.opCount << "\n";
    return kExitOk;
}

int cmdAc(const std::string& file, const std::string& engine, const std::string& direction,
          bool checkInvariants) {
    auto inst = loadInstanceFile(file);
    if (engine == "ac3") {
        return emitAcResult(ac3Reference(inst));
    }
    AcOptions opts;
    opts.direction = direction == "us" ? Direction::Up : Direction::Down;
    opts.checkInvariants = checkInvariants;
    if (const char* env = std::getenv("GSCSP_CHECK_INVARIANTS")) {
        if (env[0] != '\0' && env[0] != '0') {
            opts.checkInvariants = true;
        }
    }
    return emitAcResult(runAcids(inst, opts));
}

int cmdSolve(const std::string& file, const std::string& engine) {
    auto inst = loadInstanceFile(file);
    if (engine == "dscsp") {
        auto result = solveDscsp(inst);
        if (result.status == SolveStatus::Infeasible) {
            std::cout << "INFEASIBLE\n";
            return kExitNoSolution;
        }
        std::cout << "SOLUTION " << renderAssignment(result.assignment) << "\n";
        return kExitOk;
    }
    if (engine == "brute") {
        auto found = bruteForceSolutions(inst, 1);
        if (found.empty()) {
            std::cout << "INFEASIBLE\n";
            return kExitNoSolution;
        }
        std::cout << "SOLUTION " << renderAssignment(found.front()) << "\n";
        return kExitOk;
    }
    // acids: certify via arc consistency, then read off the bound solutions
    bool allDown = true;
    for (const auto& c : inst.constraints()) {
        allDown = allDown && isDownStaircase(c);
    }
    if (!allDown) {
        bool allUp = true;
        for (const auto& c : inst.constraints()) {
            allUp = allUp && isUpStaircase(c);
        }
        if (allUp) {
            throw NotApplicableError("arc consistency does not certify a solution for "
                                     "up-staircase networks; use 'ac --direction us' instead");
        }
        throw ClassMismatchError("instance is not a staircase network");
    }
    auto result = runAcids(inst);
    if (result.status == AcStatus::EmptyDomain) {
        std::cout << "INFEASIBLE\n";
        return kExitNoSolution;
    }
    auto [first, last] = extractBoundSolutions(inst, result);
    std::cout << "SOLUTION " << renderAssignment(first) << "\n";
    std::cout << "SOLUTION " << renderAssignment(last) << "\n";
    return kExitOk;
}

int cmdOracle(const std::string& file, std::uint64_t limit) {
    auto inst = loadInstanceFile(file);
    auto found = bruteForceSolutions(inst, static_cast<std::size_t>(limit));
    for (const auto& a : found) {
        std::cout << "SOLUTION " << renderAssignment(a) << "\n";
    }
    std::cout << "count " << found.size() << "\n";
    return found.empty() ? kExitNoSolution : kExitOk;
}

// The constraint on {i, j}, oriented with rows over D_i.
RowConvexConstraint orientedConstraint(const CspInstance& inst, VarId i, VarId j) {
    const auto* c = inst.constraintOn(i, j);
    if (c == nullptr) {
        throw InvalidSpecError("no constraint on pair (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
    }
    if (c->rowVar() == i) {
        return *c;
    }
    return transpose(*c);
}

CspInstance pairInstance(const Domain& rowDomain, const Domain& colDomain,
                         const RowConvexConstraint& c) {
    CspInstance out({rowDomain, colDomain});
    out.addConstraint(RowConvexConstraint(0, 1, c.colCount(), c.rows()));
    return out;
}

int cmdAlgebra(const std::string& op, const std::string& file, VarId i, VarId j, VarId k, VarId l,
               const std::string& outPath) {
    auto inst = loadInstanceFile(file);
    if (op == "transpose") {
        auto t = transpose(orientedConstraint(inst, i, j));
        emitInstance(pairInstance(inst.domain(j), inst.domain(i), t), outPath);
        return kExitOk;
    }
    if (op == "intersect") {
        if (inst.domain(i) != inst.domain(k) || inst.domain(j) != inst.domain(l)) {
            throw DomainMismatchError("intersect needs both constraints on identical domains");
        }
        auto meet = intersect(orientedConstraint(inst, i, j), orientedConstraint(inst, k, l));
        emitInstance(pairInstance(inst.domain(i), inst.domain(j), meet), outPath);
        return kExitOk;
    }
    if (k != j) {
        throw InvalidSpecError("compose chains (i,j) with (j,k); the middle variable must match");
    }
    auto prod = compose(orientedConstraint(inst, i, j), orientedConstraint(inst, k, l));
    emitInstance(pairInstance(inst.domain(i), inst.domain(l), prod), outPath);
    return kExitOk;
}

int cmdBench(const std::string& family, const std::vector<int>& dList, int n, std::uint64_t seed,
             const std::string& csvPath) {
    std::ofstream csv(csvPath);
    if (!csv) {
        throw GscspError("cannot open '" + csvPath + "' for writing");
    }
    csv << "engine,n,c,d,opCount,ms,outcome\n";

    for (int d : dList) {
        CspInstance inst = family == "planted-chain"      ? plantedChainInstance(n, d, 8, seed)
                           : family == "infeasible-chain" ? infeasibleChainInstance(n, d, seed)
                                                          : diffChainInstance(n, d, seed);
        const auto c = inst.constraints().size();

        {
            const auto t0 = std::chrono::steady_clock::now();
            auto result = runAcids(inst);
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            csv << "acids," << n << "," << c << "," << d << "," << result.opCount << "," << ms
                << "," << (result.status == AcStatus::Consistent ? "consistent" : "empty") << "\n";
        }
        {
            const auto t0 = std::chrono::steady_clock::now();
            auto result = solveDscsp(inst);
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            csv << "dscsp," << n << "," << c << "," << d << "," << result.opCount << "," << ms
                << "," << (result.status == SolveStatus::Solution ? "solution" : "infeasible")
                << "\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver toolkit for staircase constraint networks"};
    app.require_subcommand(1);

    std::string file;
    std::string outPath;

    auto* cClassify = app.add_subcommand("classify", "report constraint classes per constraint");
    cClassify->add_option("file", file, "instance file")->required();

    std::string acEngine = "acids";
    std::string acDirection = "ds";
    bool checkInvariants = false;
    auto* cAc = app.add_subcommand("ac", "compute arc consistency");
    cAc->add_option("file", file, "instance file")->required();
    cAc->add_option("--engine", acEngine, "acids|ac3")->check(CLI::IsMember({"acids", "ac3"}));
    cAc->add_option("--direction", acDirection, "ds|us (acids engine)")
        ->check(CLI::IsMember({"ds", "us"}));
    cAc->add_flag("--check-invariants", checkInvariants,
                  "verify the support structures after every propagation step");

    std::string solveEngine = "dscsp";
    auto* cSolve = app.add_subcommand("solve", "find a solution");
    cSolve->add_option("file", file, "instance file")->required();
    cSolve->add_option("--engine", solveEngine, "dscsp|acids|brute")
        ->check(CLI::IsMember({"dscsp", "acids", "brute"}));

    std::string genKind = "bounded-diff";
    std::string genTopology = "chain";
    GenSpec spec;
    auto* cGen = app.add_subcommand("gen", "generate a random instance");
    cGen->add_option("--kind", genKind, "bounded-diff|random-ds|random-us")
        ->check(CLI::IsMember({"bounded-diff", "random-ds", "random-us"}));
    cGen->add_option("--n", spec.n, "variable count")->required();
    cGen->add_option("--d", spec.d, "domain size")->required();
    cGen->add_option("--density", spec.density, "relative interval width in [0,1]");
    cGen->add_option("--seed", spec.seed, "random seed");
    cGen->add_option("--topology", genTopology, "chain|cycle|random")
        ->check(CLI::IsMember({"chain", "cycle", "random"}));
    cGen->add_option("--c", spec.constraintCount, "constraint count (random topology)");
    cGen->add_option("-o,--out", outPath, "output file (stdout when omitted)");

    std::uint64_t oracleLimit = UINT64_MAX;
    auto* cOracle = app.add_subcommand("oracle", "enumerate all solutions by brute force");
    cOracle->add_option("file", file, "instance file")->required();
    cOracle->add_option("--limit", oracleLimit, "stop after this many solutions");

    std::string algebraOp;
    VarId ai = 0, aj = 0, ak = 0, al = 0;
    auto* cAlgebra = app.add_subcommand("algebra", "transpose/intersect/compose constraints");
    cAlgebra->add_option("op", algebraOp, "transpose|intersect|compose")
        ->required()
        ->check(CLI::IsMember({"transpose", "intersect", "compose"}));
    cAlgebra->add_option("file", file, "instance file")->required();
    cAlgebra->add_option("i", ai, "row variable of the first pair")->required();
    cAlgebra->add_option("j", aj, "column variable of the first pair")->required();
    cAlgebra->add_option("k", ak, "row variable of the second pair");
    cAlgebra->add_option("l", al, "column variable of the second pair");
    cAlgebra->add_option("-o,--out", outPath, "output file (stdout when omitted)");

    std::string benchFamily = "diff-chain";
    std::string dListText = "256,512,1024";
    int benchN = 16;
    std::uint64_t benchSeed = 1;
    std::string csvPath;
    auto* cBench = app.add_subcommand("bench", "run scaling benchmarks, write CSV records");
    cBench->add_option("--family", benchFamily, "diff-chain|planted-chain|infeasible-chain")
        ->check(CLI::IsMember({"diff-chain", "planted-chain", "infeasible-chain"}));
    cBench->add_option("--d-list", dListText, "comma-separated domain sizes");
    cBench->add_option("--n", benchN, "variable count");
    cBench->add_option("--seed", benchSeed, "random seed");
    cBench->add_option("--csv", csvPath, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cClassify->parsed()) {
            return cmdClassify(file);
        }
        if (cAc->parsed()) {
            return cmdAc(file, acEngine, acDirection, checkInvariants);
        }
        if (cSolve->parsed()) {
            return cmdSolve(file, solveEngine);
        }
        if (cGen->parsed()) {
            spec.kind = genKind == "random-ds"   ? GenKind::RandomDs
                        : genKind == "random-us" ? GenKind::RandomUs
                                                 : GenKind::BoundedDiff;
            spec.topology = genTopology == "cycle"    ? Topology::Cycle
                            : genTopology == "random" ? Topology::Random
                                                      : Topology::Chain;
            emitInstance(generate(spec), outPath);
            return kExitOk;
        }
        if (cOracle->parsed()) {
            return cmdOracle(file, oracleLimit);
        }
        if (cAlgebra->parsed()) {
            if (algebraOp != "transpose" && cAlgebra->count("l") == 0) {
                throw InvalidSpecError(algebraOp + " needs a second pair (k, l)");
            }
            return cmdAlgebra(algebraOp, file, ai, aj, ak, al, outPath);
        }
        if (cBench->parsed()) {
            std::vector<int> dList;
            std::stringstream ss{dListText};
            std::string item;
            while (std::getline(ss, item, ',')) {
                dList.push_back(std::stoi(item));
            }
            if (dList.empty()) {
                throw InvalidSpecError("--d-list must name at least one size");
            }
            return cmdBench(benchFamily, dList, benchN, benchSeed, csvPath);
        }
    } catch (const ClassMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClass;
    } catch (const NotDownStaircaseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClass;
    } catch (const NotStaircaseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClass;
    } catch (const MixedClassError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClass;
    } catch (const DomainMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClass;
    } catch (const NotApplicableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClass;
    } catch (const GscspError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
