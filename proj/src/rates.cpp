#include "otlab/rates.hpp"

#include <cmath>

#include "otlab/errors.hpp"
#include "otlab/parallel.hpp"
#include "otlab/transport.hpp"

namespace otlab {

Measure1D shift_superpose(const Measure1D& m, double h) {
    if (h < 0.0 || !std::isfinite(h)) throw InputError("shift_superpose: h must be >= 0");
    if (h == 0.0) return m;
    return mixture({{m.pushforward_affine(1.0, -h), 0.5}, {m.pushforward_affine(1.0, h), 0.5}});
}

RateSample rate_quotient(const Measure1D& m, double h, double p, double approx_w1_error) {
    if (!(h > 0.0)) throw InputError("rate_quotient: h must be > 0");
    RateSample s;
    s.h = h;
    s.p = p;
    s.distance = wasserstein(m, shift_superpose(m, h), p);
    s.quotient = s.distance / h;
    s.truncation_error_bound = 2.0 * approx_w1_error / h;
    if (s.quotient > 1.0 + 1e-9)
        throw NumericError("rate quotient exceeds the a-priori bound W_p(m, m_h) <= h");
    return s;
}

std::vector<RateSample> rate_scan(const Measure1D& m, std::span<const double> hs, double p,
                                  double approx_w1_error) {
    if (hs.empty()) throw InputError("rate_scan: empty h grid");
    std::vector<RateSample> out(hs.size());
    parallel_for(hs.size(), [&](std::size_t i) {
        out[i] = rate_quotient(m, hs[i], p, approx_w1_error);
    });
    return out;
}

std::vector<double> default_h_grid() {
    std::vector<double> hs;
    for (double h = 1e-1; h >= 1e-6; h *= 0.5) hs.push_back(h);
    return hs;
}

POrderingReport p_ordering_check(const Measure1D& m, double h, std::span<const double> ps) {
    POrderingReport rep;
    rep.h = h;
    Measure1D mh = shift_superpose(m, h);
    rep.w1_quotient = wasserstein(m, mh, 1.0) / h;
    for (double p : ps) {
        POrderingRow row;
        row.p = p;
        row.quotient = (p == 1.0) ? rep.w1_quotient : wasserstein(m, mh, p) / h;
        row.lower_margin = row.quotient - rep.w1_quotient;
        row.upper_margin = std::pow(rep.w1_quotient, 1.0 / p) - row.quotient;
        if (row.lower_margin < -1e-9 || row.upper_margin < -1e-9) rep.ok = false;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace otlab
