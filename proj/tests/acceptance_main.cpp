// Acceptance gate: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Nonzero exit on any failure.

#include <cstdio>
#include <string>

#include "allelofear/acceptance.hpp"

int main(int argc, char** argv) {
    const std::string suite = argc > 1 ? argv[1] : "all";
    int failed = 0;
    try {
        for (const allelofear::CriterionResult& r : allelofear::run_acceptance(suite)) {
            std::printf("criterion %2d [%s] %s (%.1fs < %.0fs budget): %s\n", r.id,
                        r.suite.c_str(), r.pass ? "PASS" : "FAIL", r.runtime_s, r.budget_s,
                        r.detail.c_str());
            std::fflush(stdout);
            if (!r.pass) ++failed;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 2;
    }
    if (failed) std::printf("%d criterion(s) FAILED\n", failed);
    else std::printf("all criteria passed\n");
    return failed ? 1 : 0;
}
