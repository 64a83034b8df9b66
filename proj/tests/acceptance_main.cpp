// Acceptance suite: every criterion A1-A10, one PASS/FAIL line each.
// Usage: acceptance [quick|full] [--smoke]

#include "rankdist/acceptance.hpp"
#include "rankdist/cli.hpp"

#include <cstring>
#include <iostream>

int main(int argc, char** argv)
{
    using namespace rankdist::acceptance;
    Settings s;
    s.level = Level::full;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "quick") == 0) {
            s.level = Level::quick;
        } else if (std::strcmp(argv[i], "full") == 0) {
            s.level = Level::full;
        } else if (std::strcmp(argv[i], "--smoke") == 0) {
            s.smoke = true;
        } else {
            std::cerr << "usage: acceptance [quick|full] [--smoke]\n";
            return 1;
        }
    }
    s.threads = rankdist::cli::thread_count();

    const auto results = run_suite(s, [](const CriterionResult& r) {
        print_result(std::cout, r);
        std::cout.flush();
    });
    unsigned failed = 0;
    for (const auto& r : results) {
        failed += !r.passed;
    }
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
