#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "lpflab/errors.hpp"

namespace lpflab {

/// Adaptive bisected-Simpson quadrature with an absolute error target.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    int max_depth = 48;
};

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(F&& f, double a, double fa, double b, double fb, double m, double fm,
             double whole, double tol, int depth, const QuadratureSpec& spec, bool& ok) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double err = left + right - whole;
    if (std::fabs(err) <= 15.0 * tol || (b - a) < 1e-14 * (1.0 + std::fabs(a))) {
        return left + right + err / 15.0;
    }
    if (depth >= spec.max_depth) {
        ok = false;
        return left + right + err / 15.0;
    }
    double half = 0.5 * tol;
    return adapt(f, a, fa, m, fm, lm, flm, left, half, depth + 1, spec, ok) +
           adapt(f, m, fm, b, fb, rm, frm, right, half, depth + 1, spec, ok);
}

} // namespace detail

/// Integrate f over [a, b]. Non-finite endpoint samples are retried a tiny
/// step inside the interval, which handles integrable endpoint singularities.
/// Throws accuracy_error (carrying the best estimate) if max_depth is hit.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (a == b) return 0.0;
    const double w = b - a;
    double fa = f(a);
    double fb = f(b);
    // interior-limit scheme for improper endpoints
    if (!std::isfinite(fa)) fa = f(a + w * 0x1p-40);
    if (!std::isfinite(fb)) fb = f(b - w * 0x1p-40);
    double m = 0.5 * (a + b);
    double fm = f(m);
    double whole = detail::simpson(a, b, fa, fm, fb);
    bool ok = true;
    double result = detail::adapt(f, a, fa, b, fb, m, fm, whole, spec.abs_tol, 0, spec, ok);
    if (!ok) {
        throw accuracy_error("integrate: max_depth exceeded before reaching abs_tol", result);
    }
    return result;
}

} // namespace lpflab
