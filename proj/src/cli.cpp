#include "otlab/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "otlab/cantor.hpp"
#include "otlab/errors.hpp"
#include "otlab/io.hpp"
#include "otlab/porosity.hpp"
#include "otlab/rates.hpp"

namespace otlab::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string manifest_line(const std::string& canonical, std::uint64_t seed) {
    std::ostringstream os;
    os << "manifest config_hash=" << std::hex << config_hash(canonical) << std::dec
       << " version=" << kVersion << " seed=" << seed;
    return os.str();
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericError;
    }
}

std::vector<double> geometric_grid(double h_max, double h_min, int count) {
    if (!(h_min > 0.0) || !(h_max >= h_min) || count < 1)
        throw InputError("invalid h grid: need 0 < h-min <= h-max and h-count >= 1");
    std::vector<double> hs;
    if (count == 1) {
        hs.push_back(h_max);
        return hs;
    }
    double ratio = std::pow(h_min / h_max, 1.0 / (count - 1));
    for (int i = 0; i < count; ++i) hs.push_back(h_max * std::pow(ratio, i));
    return hs;
}

CantorSpec spec_from(const std::string& kind, double c, const std::vector<double>& values,
                     int depth_limit) {
    if (kind == "constant") return CantorSpec::constant(c, depth_limit);
    if (kind == "harmonic") return CantorSpec::harmonic(c, depth_limit);
    if (kind == "vector") return CantorSpec::vector(values, depth_limit);
    throw InputError("alpha-kind must be constant|vector|harmonic");
}

} // namespace

int cmd_rate_scan(const RateScanConfig& cfg) {
    return guarded([&] {
        Measure1D m = read_measure_json(cfg.measure_path);
        std::vector<double> hs = cfg.h_count > 0
                                     ? geometric_grid(cfg.h_max, cfg.h_min, cfg.h_count)
                                     : default_h_grid();
        std::vector<RateSample> rows = rate_scan(m, hs, cfg.p);
        std::ostringstream canon;
        canon << "rate-scan measure=" << cfg.measure_path << " p=" << format_double(cfg.p)
              << " h_min=" << format_double(cfg.h_min) << " h_max=" << format_double(cfg.h_max)
              << " h_count=" << cfg.h_count << " seed=" << cfg.seed;
        CsvWriter csv({"h", "p", "distance", "quotient", "trunc_bound"},
                      manifest_line(canon.str(), cfg.seed));
        for (const auto& r : rows)
            csv.add_row({r.h, r.p, r.distance, r.quotient, r.truncation_error_bound});
        csv.write(cfg.out);
        return kExitOk;
    });
}

int cmd_cantor(const CantorConfig& cfg) {
    return guarded([&] {
        CantorSpec spec = spec_from(cfg.alpha_kind, cfg.alpha_c, cfg.alpha_values, cfg.depth_limit);
        if (cfg.depth > spec.depth_limit()) throw InputError("depth over limit");
        if (cfg.n_hi > cfg.depth)
            throw InputError("probe range exceeds the realized depth");
        std::vector<double> hs;
        if (cfg.probe == "fail") {
            hs = spec.failure_probes(cfg.n_lo, cfg.n_hi);
        } else if (cfg.probe == "band") {
            for (const auto& [lo, hi] : spec.band_probes(cfg.n_lo, cfg.n_hi))
                hs.push_back(std::sqrt(lo * hi));
        } else {
            throw InputError("probe must be fail|band");
        }
        Measure1D mu = spec.measure(cfg.depth);
        std::vector<RateSample> rows = rate_scan(mu, hs, cfg.p, spec.delta(cfg.depth));
        std::ostringstream canon;
        canon << "cantor kind=" << cfg.alpha_kind << " c=" << format_double(cfg.alpha_c)
              << " depth=" << cfg.depth << " n=" << cfg.n_lo << ".." << cfg.n_hi
              << " probe=" << cfg.probe << " p=" << format_double(cfg.p) << " seed=" << cfg.seed;
        CsvWriter csv({"h", "p", "distance", "quotient", "trunc_bound"},
                      manifest_line(canon.str(), cfg.seed));
        for (const auto& r : rows)
            csv.add_row({r.h, r.p, r.distance, r.quotient, r.truncation_error_bound});
        csv.write(cfg.out);
        return kExitOk;
    });
}

int cmd_porosity(const PorosityConfig& cfg) {
    return guarded([&] {
        IntervalSet A;
        std::ostringstream canon;
        if (!cfg.intervals_path.empty()) {
            A = read_intervals_json(cfg.intervals_path);
            canon << "porosity intervals=" << cfg.intervals_path;
        } else {
            CantorSpec spec = spec_from(cfg.alpha_kind, cfg.alpha_c, cfg.alpha_values, 26);
            A = spec.generation(cfg.depth);
            canon << "porosity kind=" << cfg.alpha_kind << " c=" << format_double(cfg.alpha_c)
                  << " depth=" << cfg.depth;
        }
        if (!(cfg.s_ratio > 0.0) || !(cfg.s_ratio < 1.0) || cfg.s_count < 1 || !(cfg.s_max > 0.0))
            throw InputError("invalid scale grid");
        std::vector<double> scales;
        double s = cfg.s_max;
        for (int i = 0; i < cfg.s_count; ++i, s *= cfg.s_ratio) scales.push_back(s);
        auto profile = porosity_profile(A, scales);
        ClassAVerdict verdict = class_a_diagnostic(profile, cfg.threshold);
        canon << " s_max=" << format_double(cfg.s_max) << " s_ratio=" << format_double(cfg.s_ratio)
              << " s_count=" << cfg.s_count << " threshold=" << format_double(cfg.threshold)
              << " seed=" << cfg.seed;
        CsvWriter csv({"s", "tau"}, manifest_line(canon.str(), cfg.seed));
        for (const auto& row : profile) csv.add_row({row.s, row.tau});
        csv.add_comment("verdict=" + to_string(verdict));
        csv.write(cfg.out);
        std::cout << "verdict: " << to_string(verdict) << "\n";
        return kExitOk;
    });
}

int cmd_verify(const VerifyConfig& cfg) {
    return guarded([&] {
        std::vector<CriterionResult> results = run_acceptance(cfg.only, cfg.seed);
        bool all = true;
        for (const auto& r : results) {
            std::cout << format_result_line(r) << "\n";
            all = all && r.passed;
        }
        if (!cfg.out_json.empty()) {
            nlohmann::json j;
            j["seed"] = cfg.seed;
            j["version"] = kVersion;
            j["all_passed"] = all;
            j["criteria"] = nlohmann::json::array();
            for (const auto& r : results) {
                j["criteria"].push_back({{"id", r.id},
                                         {"name", r.name},
                                         {"passed", r.passed},
                                         {"margin", r.margin},
                                         {"detail", r.detail},
                                         {"seconds", r.seconds}});
            }
            std::ofstream out(cfg.out_json, std::ios::trunc);
            if (!out) throw InputError("cannot write " + cfg.out_json);
            out << j.dump(2) << "\n";
        }
        return all ? kExitOk : kExitAcceptanceFailure;
    });
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"1D optimal-transport laboratory: shift-superposition rates, Cantor measures, porosity profiles"};
    app.require_subcommand(1);

    RateScanConfig rs;
    auto* rate = app.add_subcommand("rate-scan", "W_p(m, m_h)/h over an h grid");
    rate->add_option("--measure", rs.measure_path, "measure spec JSON")->required();
    rate->add_option("--p", rs.p, "cost exponent p >= 1");
    rate->add_option("--h-min", rs.h_min, "smallest h");
    rate->add_option("--h-max", rs.h_max, "largest h");
    rate->add_option("--h-count", rs.h_count, "grid size (0: default halving grid)");
    rate->add_option("--out", rs.out, "output CSV path")->required();
    rate->add_option("--seed", rs.seed, "seed recorded in the manifest");

    CantorConfig ca;
    auto* cantor = app.add_subcommand("cantor", "rate scan along the critical h sequences");
    cantor->add_option("--alpha-kind", ca.alpha_kind, "constant|vector|harmonic");
    cantor->add_option("--alpha-c", ca.alpha_c, "parameter of the constant/harmonic rule");
    cantor->add_option("--alpha-values", ca.alpha_values, "explicit alpha values (vector rule)");
    cantor->add_option("--depth", ca.depth, "realized approximant depth");
    cantor->add_option("--depth-limit", ca.depth_limit, "construction depth limit");
    cantor->add_option("--n-lo", ca.n_lo, "first probe generation");
    cantor->add_option("--n-hi", ca.n_hi, "last probe generation");
    cantor->add_option("--probe", ca.probe, "fail (h_n = alpha_n delta_n/2) | band (geometric band midpoints)");
    cantor->add_option("--p", ca.p, "cost exponent");
    cantor->add_option("--out", ca.out, "output CSV path")->required();
    cantor->add_option("--seed", ca.seed, "seed recorded in the manifest");

    PorosityConfig po;
    auto* poros = app.add_subcommand("porosity", "porosity profile and class verdict");
    poros->add_option("--intervals", po.intervals_path, "interval set JSON (default: Cantor generation)");
    poros->add_option("--alpha-kind", po.alpha_kind, "constant|vector|harmonic");
    poros->add_option("--alpha-c", po.alpha_c, "parameter of the constant/harmonic rule");
    poros->add_option("--alpha-values", po.alpha_values, "explicit alpha values (vector rule)");
    poros->add_option("--depth", po.depth, "Cantor generation");
    poros->add_option("--s-max", po.s_max, "largest scale");
    poros->add_option("--s-ratio", po.s_ratio, "geometric ratio of the scale grid");
    poros->add_option("--s-count", po.s_count, "number of scales");
    poros->add_option("--threshold", po.threshold, "verdict threshold on tau");
    poros->add_option("--out", po.out, "output CSV path")->required();
    poros->add_option("--seed", po.seed, "seed recorded in the manifest");

    VerifyConfig ve;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--only", ve.only, "criterion ids to run (default: all)");
    verify->add_option("--seed", ve.seed, "seed for the randomized criteria");
    verify->add_option("--out", ve.out_json, "machine-readable JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    if (rate->parsed()) return cmd_rate_scan(rs);
    if (cantor->parsed()) return cmd_cantor(ca);
    if (poros->parsed()) return cmd_porosity(po);
    if (verify->parsed()) return cmd_verify(ve);
    return kExitInputError;
}

} // namespace otlab::cli
