// Acceptance gate: runs every criterion and prints one line each. Exit status is nonzero if any
// criterion fails its checks or its time budget.
#include <cstdio>
#include <cstdlib>

#include "verify.hpp"

int main(int argc, char** argv) {
    bsa::app::VerifyOptions options;
    if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);

    int failed = 0;
    double total = 0.0;
    for (int id = 1; id <= bsa::app::kCriterionCount; ++id) {
        const auto res = bsa::app::run_criterion(id, options);
        total += res.seconds;
        if (!res.passed()) ++failed;
        std::printf("criterion %2d %s  %8.3f s", res.id, res.passed() ? "PASS" : "FAIL", res.seconds);
        if (res.limit_seconds > 0) std::printf(" (limit %g s%s)", res.limit_seconds, res.within_limit() ? "" : ", EXCEEDED");
        std::printf("  %s: %s\n", res.title.c_str(), res.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed in %.1f s\n", bsa::app::kCriterionCount - failed, bsa::app::kCriterionCount, total);
    return failed == 0 ? 0 : 1;
}
