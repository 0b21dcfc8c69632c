#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otlab/acceptance.hpp"

namespace otlab::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAcceptanceFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericError = 3;

struct RateScanConfig {
    std::string measure_path;
    double p = 1.0;
    double h_min = 1e-6;
    double h_max = 1e-1;
    int h_count = 0; // 0: default halving grid 1e-1 .. 1e-6
    std::string out;
    std::uint64_t seed = 0;
};

struct CantorConfig {
    std::string alpha_kind = "constant"; // constant | vector | harmonic
    double alpha_c = 1.0 / 3.0;
    std::vector<double> alpha_values;
    int depth = 14;
    int depth_limit = 26;
    int n_lo = 2;
    int n_hi = 8;
    std::string probe = "fail"; // fail | band
    double p = 1.0;
    std::string out;
    std::uint64_t seed = 0;
};

struct PorosityConfig {
    std::string intervals_path; // JSON interval set; empty: use the Cantor spec
    std::string alpha_kind = "constant";
    double alpha_c = 1.0 / 3.0;
    std::vector<double> alpha_values;
    int depth = 8;
    double s_max = 0.25;
    double s_ratio = 0.5;
    int s_count = 8;
    double threshold = 0.2;
    std::string out;
    std::uint64_t seed = 0;
};

struct VerifyConfig {
    std::vector<int> only; // empty: all criteria
    std::uint64_t seed = kAcceptanceSeed;
    std::string out_json; // optional machine-readable report
};

int cmd_rate_scan(const RateScanConfig& cfg);
int cmd_cantor(const CantorConfig& cfg);
int cmd_porosity(const PorosityConfig& cfg);
int cmd_verify(const VerifyConfig& cfg);

// Full argv entry point used by the binary and by tests.
int run_cli(int argc, const char* const* argv);

} // namespace otlab::cli
