#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpflab {

struct OptTrace {
    int dims = 0;
    int grid_points_per_dim = 0;
    int refine_passes = 0;
    double final_step = 0.0;
    std::uint64_t evals = 0;

    std::string summary() const {
        char step[32];
        std::snprintf(step, sizeof(step), "%.3g", final_step);
        return "grid " + std::to_string(grid_points_per_dim) + "^" + std::to_string(dims) +
               ", refine passes " + std::to_string(refine_passes) + ", final step " + step +
               ", evals " + std::to_string(evals);
    }
};

struct MaxResult {
    std::vector<double> argmax;
    double value = -std::numeric_limits<double>::infinity();
    OptTrace trace;
};

namespace detail {

inline constexpr double kInvPhi = 0.6180339887498949;

// Deterministic golden-section maximization; assumes f is unimodal on the
// bracket (callers bracket a grid maximum first). Ties resolve to smaller x.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double xtol,
                                     std::uint64_t& evals) {
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    evals += 2;
    while (b - a > xtol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    double x = 0.5 * (a + b);
    double fx = f(x);
    ++evals;
    return {x, fx};
}

} // namespace detail

/// Maximize f over the open box (lo_i, hi_i): a uniform interior grid pass
/// (ties break toward lexicographically smaller parameters) followed by
/// coordinate-wise golden-section refinement with shrinking brackets.
/// f returns -inf for points outside its admissible region.
inline MaxResult grid_refine_max(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& lo, const std::vector<double>& hi,
                                 int grid_points, int refine_passes = 6, double xtol = 1e-11) {
    const std::size_t d = lo.size();
    if (d == 0 || hi.size() != d) throw std::invalid_argument("grid_refine_max: bad box");
    for (std::size_t i = 0; i < d; ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("grid_refine_max: empty box");
    if (grid_points < 2) throw std::invalid_argument("grid_refine_max: need at least 2 grid points");

    MaxResult res;
    res.trace.dims = static_cast<int>(d);
    res.trace.grid_points_per_dim = grid_points;

    std::vector<double> step(d);
    for (std::size_t i = 0; i < d; ++i) step[i] = (hi[i] - lo[i]) / (grid_points + 1);

    // interior grid scan in ascending lexicographic order; strict improvement
    // keeps the first (smallest) argmax on ties
    std::vector<int> idx(d, 1);
    std::vector<double> x(d);
    bool done = false;
    while (!done) {
        for (std::size_t i = 0; i < d; ++i) x[i] = lo[i] + idx[i] * step[i];
        double v = f(x);
        ++res.trace.evals;
        if (v > res.value) {
            res.value = v;
            res.argmax = x;
        }
        std::size_t i = d;
        while (true) {
            if (i == 0) {
                done = true;
                break;
            }
            --i;
            if (++idx[i] <= grid_points) break;
            idx[i] = 1;
        }
    }
    if (res.argmax.empty()) return res; // nothing feasible on the grid

    // coordinate refinement around the grid argmax
    for (int pass = 0; pass < refine_passes; ++pass) {
        for (std::size_t i = 0; i < d; ++i) {
            double w = step[i] / std::pow(2.0, pass);
            double a = std::max(lo[i] + 1e-12 * (hi[i] - lo[i]), res.argmax[i] - w);
            double b = std::min(hi[i] - 1e-12 * (hi[i] - lo[i]), res.argmax[i] + w);
            if (!(a < b)) continue;
            std::vector<double> probe = res.argmax;
            auto line = [&](double t) {
                probe[i] = t;
                return f(probe);
            };
            auto [t, v] = detail::golden_max(line, a, b, xtol * (hi[i] - lo[i]), res.trace.evals);
            if (v > res.value) {
                res.value = v;
                res.argmax[i] = t;
            }
        }
    }
    res.trace.refine_passes = refine_passes;
    res.trace.final_step = xtol;
    return res;
}

/// 1-D convenience wrapper.
inline MaxResult grid_refine_max_1d(const std::function<double(double)>& f, double lo, double hi,
                                    int grid_points = 1000, int refine_passes = 6,
                                    double xtol = 1e-11) {
    return grid_refine_max([&](const std::vector<double>& x) { return f(x[0]); }, {lo}, {hi},
                           grid_points, refine_passes, xtol);
}

} // namespace lpflab
