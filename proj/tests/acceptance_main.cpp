// Release-gate runner: executes every acceptance criterion and prints one
// verdict line per criterion. Exit 0 when all pass, 2 otherwise.
//
//   acceptance_tests [--seed N] [--criterion K]

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "acceptance.h"

int main(int argc, char** argv) {
    std::uint64_t seed = 17;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const char* arg = argv[i];
        if (std::strcmp(arg, "--seed") == 0 && i + 1 < argc) {
            seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (std::strcmp(arg, "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr,
                         "usage: %s [--seed N] [--criterion K]\n", argv[0]);
            return 1;
        }
    }

    using namespace epiconf;
    bool all_pass = true;
    if (only > 0) {
        auto r = acceptance::run_criterion(only, acceptance::Tolerances{}, seed);
        std::printf("%s\n", acceptance::format_line(r).c_str());
        all_pass = r.pass;
    } else {
        auto suite = acceptance::run_all(acceptance::Tolerances{}, seed);
        for (const auto& r : suite.results)
            std::printf("%s\n", acceptance::format_line(r).c_str());
        all_pass = suite.all_pass;
    }
    std::printf("%s\n", all_pass ? "result: all criteria pass"
                                 : "result: criteria failed");
    return all_pass ? 0 : 2;
}
