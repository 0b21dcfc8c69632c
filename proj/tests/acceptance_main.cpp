// Acceptance suite runner: one pass/fail line per criterion, exit 0 iff all
// selected criteria pass.  --only <id> restricts the run (repeatable).

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "otlab/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> only;
    std::uint64_t seed = otlab::kAcceptanceSeed;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only.push_back(std::atoi(argv[++i]));
        } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
            seed = std::strtoull(argv[++i], nullptr, 10);
        } else {
            std::cerr << "usage: acceptance_tests [--only <1..10>]... [--seed <n>]\n";
            return 2;
        }
    }
    bool all = true;
    for (const auto& r : otlab::run_acceptance(only, seed)) {
        std::cout << otlab::format_result_line(r) << std::endl;
        all = all && r.passed;
    }
    return all ? 0 : 1;
}
