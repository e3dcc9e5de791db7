#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lpflab/errors.hpp"
#include "lpflab/quadrature.hpp"

namespace lpflab {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kExpMinusGamma = 0.56145948356688516982;

namespace detail {

// Prefix integrals of known uniform samples g[0..M], step h: Simpson pairs at
// even offsets, cubic Newton-Cotes single panels at odd offsets. O(h^4).
inline void prefix_integrals(const std::vector<long double>& g, long double h,
                             std::vector<long double>& out) {
    const std::size_t M = g.size() - 1;
    out.assign(M + 1, 0.0L);
    for (std::size_t m = 2; m <= M; m += 2)
        out[m] = out[m - 2] + h / 3.0L * (g[m - 2] + 4.0L * g[m - 1] + g[m]);
    for (std::size_t m = 1; m <= M; m += 2) {
        if (m + 2 <= M)
            out[m] = out[m - 1] + h / 24.0L * (9.0L * g[m - 1] + 19.0L * g[m] - 5.0L * g[m + 1] + g[m + 2]);
        else
            out[m] = out[m + 1] - h / 24.0L * (g[m - 2] - 5.0L * g[m - 1] + 19.0L * g[m] + 9.0L * g[m + 1]);
    }
}

} // namespace detail

/// Piecewise tables for the two delay equations, built on a uniform grid of
/// step h over [0, u_max].
///
/// rho solves u rho'(u) = -rho(u-1) with rho = 1 on [0,1]. Each unit piece is
/// marched in the self-normalizing window form u rho(u) = int_{u-1}^{u} rho,
/// assembled from fresh prefix quadratures of the stored samples. Absolute
/// errors from earlier pieces enter only through that window and are damped
/// by 1/u per unit, which keeps the relative error small (~1e-13) even where
/// rho underflows toward 1e-40.
///
/// omega solves (u omega(u))' = omega(u-1) with u omega(u) = 1 on [1,2] and
/// omega = 0 below 1.
class SpecialFnTables {
public:
    explicit SpecialFnTables(unsigned u_max = 30, double h = 1e-4, double tol = 1e-9)
        : u_max_(u_max), h_(h), tol_(tol) {
        if (u_max < 3) throw std::invalid_argument("SpecialFnTables: u_max must be >= 3");
        n_per_ = static_cast<std::size_t>(std::llround(1.0 / h));
        if (n_per_ < 8 || n_per_ % 2 != 0 || std::fabs(n_per_ * h - 1.0) > 1e-12)
            throw std::invalid_argument("SpecialFnTables: 1/h must be an even integer");
        build();
    }

    unsigned u_max() const { return u_max_; }
    double step() const { return h_; }
    double tol() const { return tol_; }
    const std::vector<double>& rho_nodes() const { return rho_; }
    const std::vector<double>& omega_nodes() const { return omega_; }

    /// Dickman rho.
    double rho(double u) const {
        if (u < 0) throw std::invalid_argument("rho: u must be >= 0");
        if (u <= 1.0) return 1.0;
        if (u <= 2.0) return 1.0 - std::log(u);
        if (u > u_max_) throw extent_error("rho: u beyond table extent; rebuild with larger u_max");
        if (u > 8.0) {
            // interpolate log rho; avoids relative-accuracy loss in the tail
            return std::exp(interp(log_rho_, u));
        }
        return interp_raw(rho_, u);
    }

    /// rho with the deep tail treated as exactly 0 past the table extent.
    /// Valid only when rho(u_max) is already below the underflow threshold.
    double rho_or_tail_zero(double u) const {
        if (u > u_max_) {
            if (rho_.back() > 1e-30)
                throw extent_error("rho: u beyond table extent and tail not yet negligible");
            return 0.0;
        }
        return rho(u);
    }

    /// Buchstab omega, extended by 0 below u = 1.
    double omega(double u) const {
        if (u < 1.0) return 0.0;
        if (u <= 2.0) return 1.0 / u;
        if (u <= 3.0) return (1.0 + std::log(u - 1.0)) / u;
        if (u > u_max_) throw extent_error("omega: u beyond table extent; rebuild with larger u_max");
        return interp_raw(omega_, u);
    }

    /// theta0(lambda, u) = rho(u/lambda) + int_0^u rho(t/lambda) omega(u-t) dt,
    /// with theta0(0, u) = 0. Limiting density of integers <= x free of prime
    /// factors in (x^{lambda a}, x^a] where u = 1/a.
    double theta0(double lambda, double u, const QuadratureSpec& spec = {1e-10, 48}) const {
        if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("theta0: lambda must be in [0, 1]");
        if (!(u > 0.0)) throw std::invalid_argument("theta0: u must be > 0");
        if (lambda == 0.0) return 0.0;
        double head = rho_or_tail_zero(u / lambda);
        if (u <= 1.0) return head;
        // omega(u-t) vanishes for t > u-1; rho(t/lambda) vanishes past the tail
        double upper = u - 1.0;
        if (rho_.back() <= 1e-30) upper = std::min(upper, lambda * u_max_);
        if (upper <= 0.0) return head;
        // split at integrand kinks: omega knots at t = u-2, u-3 and the rho
        // knots t = lambda, 2 lambda
        std::vector<double> cuts{0.0, upper};
        for (double c : {u - 2.0, u - 3.0, lambda, 2.0 * lambda})
            if (c > 0.0 && c < upper) cuts.push_back(c);
        std::sort(cuts.begin(), cuts.end());
        auto f = [&](double t) { return rho_or_tail_zero(t / lambda) * omega(u - t); };
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            total += integrate(f, cuts[i], cuts[i + 1], spec);
        return head + total;
    }

    /// Max absolute node difference against a rebuild at step h/2 (Richardson
    /// consistency check), scaled relative for rho's decaying tail.
    double richardson_check() const {
        SpecialFnTables half(u_max_, h_ / 2.0, tol_);
        double worst = 0.0;
        for (std::size_t i = 0; i < rho_.size(); ++i) {
            double a = rho_[i], b = half.rho_[2 * i];
            worst = std::max(worst, std::fabs(a - b) / std::max(b, 1e-30));
            worst = std::max(worst, std::fabs(omega_[i] - half.omega_[2 * i]));
        }
        return worst;
    }

private:
    void build() {
        const std::size_t n = n_per_;
        const std::size_t N = static_cast<std::size_t>(u_max_) * n;
        const long double h = static_cast<long double>(h_);
        std::vector<long double> r(N + 1), w(N + 1, 0.0L);

        for (std::size_t j = 0; j <= n; ++j) r[j] = 1.0L;
        for (std::size_t j = n; j <= 2 * n; ++j) r[j] = 1.0L - std::log(static_cast<long double>(j) * h);
        for (std::size_t j = n; j <= 2 * n; ++j) w[j] = 1.0L / (static_cast<long double>(j) * h);

        std::vector<long double> prev(n + 1), B, I;
        long double omega_accum = 1.0L; // u*omega(u) at the current knot, starts at 2*omega(2)
        for (unsigned k = 2; k + 1 <= u_max_; ++k) {
            const std::size_t j0 = static_cast<std::size_t>(k) * n;

            // --- rho piece [k, k+1]: u rho(u) = A[m] + (B[n] - B[m]) ---
            std::copy(r.begin() + (j0 - n), r.begin() + (j0 + 1), prev.begin());
            detail::prefix_integrals(prev, h, B);
            long double A_prev1 = 0.0L, A_prev2 = 0.0L; // A[m-1], A[m-2]
            for (std::size_t m = 1; m <= n; ++m) {
                const std::size_t j = j0 + m;
                const long double u = static_cast<long double>(j) * h;
                const long double tail = B[n] - B[m];
                long double part, weight;
                if (m % 2 == 1) {
                    part = A_prev1 + h / 24.0L * (r[j - 3] - 5.0L * r[j - 2] + 19.0L * r[j - 1]);
                    weight = 9.0L * h / 24.0L;
                } else {
                    part = A_prev2 + h / 3.0L * (r[j - 2] + 4.0L * r[j - 1]);
                    weight = h / 3.0L;
                }
                r[j] = (part + tail) / (u - weight);
                A_prev2 = A_prev1;
                A_prev1 = part + weight * r[j];
            }

            // --- omega piece [k, k+1]: u omega(u) = W(k) + int_{k-1}^{u-1} omega ---
            std::copy(w.begin() + (j0 - n), w.begin() + (j0 + 1), prev.begin());
            detail::prefix_integrals(prev, h, I);
            for (std::size_t m = 1; m <= n; ++m) {
                const std::size_t j = j0 + m;
                w[j] = (omega_accum + I[m]) / (static_cast<long double>(j) * h);
            }
            omega_accum += I[n];
        }

        rho_.resize(N + 1);
        omega_.resize(N + 1);
        log_rho_.resize(N + 1);
        for (std::size_t j = 0; j <= N; ++j) {
            rho_[j] = static_cast<double>(r[j]);
            omega_[j] = static_cast<double>(w[j]);
            log_rho_[j] = static_cast<double>(std::log(r[j]));
        }
    }

    // cubic 4-point Lagrange interpolation on the uniform grid
    double interp_raw(const std::vector<double>& v, double u) const {
        return interp(v, u);
    }

    double interp(const std::vector<double>& v, double u) const {
        double x = u / h_;
        std::size_t j = static_cast<std::size_t>(x);
        const std::size_t N = v.size() - 1;
        if (j < 1) j = 1;
        if (j > N - 2) j = N - 2;
        double t = x - static_cast<double>(j);
        double wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        double w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        double w1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        double w2 = (t + 1.0) * t * (t - 1.0) / 6.0;
        return wm1 * v[j - 1] + w0 * v[j] + w1 * v[j + 1] + w2 * v[j + 2];
    }

    unsigned u_max_;
    double h_;
    double tol_;
    std::size_t n_per_;
    std::vector<double> rho_, omega_, log_rho_;
};

} // namespace lpflab
