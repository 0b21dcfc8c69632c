#pragma once

#include <cmath>
#include <cstddef>

namespace otlab {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr double gk_nodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr double gk_wk[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr double gk_wg[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

template <class F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 15; ++i) {
        double v = f(c + hw * gk_nodes[i]);
        resk += gk_wk[i] * v;
        if (i % 2 == 1) resg += gk_wg[i / 2] * v;
    }
    kronrod = resk * hw;
    err = std::abs((resk - resg) * hw);
}

template <class F>
double adaptive_rec(const F& f, double a, double b, double tol_abs, int depth) {
    double v, err;
    gk15(f, a, b, v, err);
    if (err <= tol_abs || depth >= 48) return v;
    double c = 0.5 * (a + b);
    return adaptive_rec(f, a, c, 0.5 * tol_abs, depth + 1) +
           adaptive_rec(f, c, b, 0.5 * tol_abs, depth + 1);
}

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b] to relative tolerance
// rel_tol (with a small absolute floor so that near-zero integrals terminate).
template <class F>
double adaptive_quadrature(const F& f, double a, double b, double rel_tol) {
    if (!(b > a)) return 0.0;
    double v0, err0;
    detail::gk15(f, a, b, v0, err0);
    double scale = std::max(std::abs(v0), 1e-300);
    double tol_abs = std::max(rel_tol * scale, 1e-305);
    if (err0 <= tol_abs) return v0;
    double c = 0.5 * (a + b);
    return detail::adaptive_rec(f, a, c, 0.5 * tol_abs, 1) +
           detail::adaptive_rec(f, c, b, 0.5 * tol_abs, 1);
}

} // namespace otlab
