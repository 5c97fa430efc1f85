// Acceptance suite: one line per criterion, non-zero exit on any failure.
//
// The rank fixtures run in exact rational arithmetic with float twins, so the
// final criterion (cross-mode agreement) is collected from the same runs.

#include <chrono>
#include <cstring>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "convac/analysis.hpp"
#include "convac/verify.hpp"

using namespace convac;

namespace {

struct Criterion {
    std::string label;
    bool pass = false;
    std::string detail;
};

const CaseResult& find_case(const SuiteResult& suite, const std::string& name) {
    for (const CaseResult& c : suite.cases)
        if (c.name == name) return c;
    throw std::logic_error("missing case " + name + " in suite " + suite.name);
}

std::string join_failing(const SuiteResult& suite) {
    std::string out;
    for (const CaseResult& c : suite.cases)
        if (!c.pass) out += " " + c.name + " (" + c.detail + ")";
    return out.empty() ? "all cases passed" : ("failing:" + out);
}

}  // namespace

int main(int argc, char** argv) {
    VerifyOptions options;
    options.trials = 100;
    options.seed = 7;
    options.cross_mode = true;
    options.threads = 2;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
            options.threads = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            options.seed = static_cast<std::uint64_t>(std::atoll(argv[++i]));
    }

    std::vector<Criterion> criteria;
    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration_cast<std::chrono::seconds>(
                   std::chrono::steady_clock::now() - started)
            .count();
    };

    std::cerr << "[running] rank-attainment fixtures and genericity sweep...\n";
    const SuiteResult thm1 = run_suite("thm1", options);
    std::cerr << "[running] non-overlapping upper-bound sweep (" << options.trials
              << " specs)... (" << elapsed() << "s)\n";
    const SuiteResult lemma1 = run_suite("lemma1", options);
    std::cerr << "[running] remaining suites... (" << elapsed() << "s)\n";
    const SuiteResult prop1 = run_suite("prop1", options);
    const SuiteResult claim4 = run_suite("claim4", options);
    const SuiteResult thm3 = run_suite("thm3", options);
    const SuiteResult prop2 = run_suite("prop2", options);

    // 1. Rank attainment by the pair construction.
    {
        const std::vector<std::string> names{"pair-construction-H2-R2-S1",
                                             "pair-construction-H4-R3-S1",
                                             "pair-construction-H4-R3-S2"};
        bool pass = true;
        std::string detail;
        for (const std::string& name : names) {
            const CaseResult& c = find_case(thm1, name);
            pass = pass && c.pass;
            detail += (detail.empty() ? "" : "; ") + name.substr(18) + ": " + c.detail;
        }
        criteria.push_back({"1 pair-construction ranks 4 / 256 / 4", pass, detail});
    }

    // 2. Non-overlapping upper bound on 100 random specs.
    {
        const CaseResult& c = find_case(lemma1, "rank-upper-bound-sweep");
        criteria.push_back({"2 non-overlapping rank <= next-to-last channels", c.pass, c.detail});
    }

    // 3. Genericity of the full rank under random rational parameters.
    {
        const CaseResult& c = find_case(thm1, "genericity-sweep");
        criteria.push_back({"3 generic parameters reach the full rank", c.pass, c.detail});
    }

    // 4. Window shrinking and identity insertion preserve the function.
    criteria.push_back({"4 lifted parameters reproduce outputs exactly", prop1.passed(),
                        join_failing(prop1)});

    // 5. Multi-layer simulation of one big-window layer.
    criteria.push_back(
        {"5 compiled stacks equal the big-window layer", claim4.passed(), join_failing(claim4)});

    // 6. Full-window construction for every even partition.
    {
        bool pass = true;
        for (const CaseResult& c : thm3.cases) pass = pass && c.pass;
        criteria.push_back(
            {"6 full-window construction ranks M^(H^2/2)", pass, join_failing(thm3)});
    }

    // 7. Closed-form arithmetic for the alternating conv-pool family.
    {
        bool pass = true;
        std::string detail;
        for (const char* name :
             {"stride-receptive-closed-forms", "alpha-minimal-closed-form",
              "bound-matches-explicit-spec"}) {
            const CaseResult& c = find_case(prop2, name);
            pass = pass && c.pass;
            if (!c.pass) detail += c.name + ": " + c.detail + "; ";
        }
        if (detail.empty()) detail = "B <= 7, L <= 6 all exact";
        criteria.push_back({"7 conv-pool closed forms match", pass, detail});
    }

    // 8. The M=64, B=5 reference bound.
    {
        const CaseResult& c = find_case(prop2, "m64-b5-h32-at-least-64pow20");
        criteria.push_back({"8 reference bound at least 64^20", c.pass, c.detail});
    }

    // 9. Exact and float ranks agree on every fixture above.
    {
        bool pass = true;
        std::string detail;
        for (const SuiteResult* suite : {&thm1, &lemma1, &thm3})
            for (const CaseResult& c : suite->cases)
                if (!c.cross_ok) {
                    pass = false;
                    detail += " " + c.name;
                }
        criteria.push_back({"9 float-mode ranks match exact-mode ranks", pass,
                            pass ? "tol 1e-9 on every rank fixture" : "disagreeing:" + detail});
    }

    bool all = true;
    for (const Criterion& c : criteria) {
        all = all && c.pass;
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.label << " -- " << c.detail << "\n";
    }
    std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILURES above") << " ("
              << elapsed() << "s)\n";
    return all ? 0 : 1;
}
