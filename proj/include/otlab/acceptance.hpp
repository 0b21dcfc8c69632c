#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace otlab {

// Outcome of one acceptance criterion.  margin is the smallest slack left by
// any sub-check (tolerance minus violation); negative means failed.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double margin = 0.0;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr std::uint64_t kAcceptanceSeed = 20260810u;

// Runs the selected criteria (all ten when `only` is empty) and returns one
// result per criterion, ordered by id.  Deterministic for a fixed seed.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {},
                                            std::uint64_t seed = kAcceptanceSeed);

// One pass/fail line per criterion, e.g.
//   [PASS] 1 dirac-exactness (margin=9.9e-13, 0.001s)
std::string format_result_line(const CriterionResult& r);

} // namespace otlab
