#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "lpflab/bounds.hpp"
#include "lpflab/empirical.hpp"
#include "lpflab/sieve.hpp"
#include "lpflab/special.hpp"

namespace lpflab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace acceptance {

// Offline fine-step oracle outputs (sliding-window implicit trapezoid on the
// delay recursion, h = 5e-6, long double; see tests for the generator). The
// table must reproduce them to 1e-8 relative.
inline constexpr double kOracleRho3 = 4.8608388291620e-02;
inline constexpr double kOracleRho10 = 2.7701718407924e-11;

struct Check {
    bool ok = true;
    std::ostringstream out;

    Check() { out.precision(10); }

    template <class T>
    void expect(bool cond, const std::string& label, T measured) {
        if (!out.str().empty()) out << "; ";
        out << label << " = " << measured << (cond ? "" : "  <-- FAIL");
        ok &= cond;
    }
};

template <class F>
CriterionResult timed(int id, std::string name, F&& body) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    body(c);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = c.ok;
    r.detail = c.out.str();
    return r;
}

inline CriterionResult crit1_valley(const BoundsLab& lab) {
    return timed(1, "valley bound maximization", [&](Check& c) {
        auto t0 = std::chrono::steady_clock::now();
        auto r = lab.maximize_valley();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double a = r.argmax.at(0).second;
        c.expect(r.value >= published::valley_density, "value", r.value);
        c.expect(a >= 0.200 && a <= 0.235, "argmax alpha", a);
        c.expect(secs < 10.0, "runtime s", secs);
    });
}

inline CriterionResult crit2_peak(const BoundsLab& lab) {
    return timed(2, "peak bound window decomposition", [&](Check& c) {
        auto t0 = std::chrono::steady_clock::now();
        auto pt = lab.peak_total();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.expect(pt.windows[0].value >= published::peak_window1, "window1", pt.windows[0].value);
        c.expect(pt.windows[1].value >= published::peak_window2, "window2", pt.windows[1].value);
        c.expect(pt.windows[2].value >= published::peak_window3, "window3", pt.windows[2].value);
        c.expect(pt.total >= published::peak_density, "total", pt.total);
        c.expect(secs < 60.0, "runtime s", secs);
    });
}

inline CriterionResult crit3_c_alpha(const BoundsLab& lab) {
    return timed(3, "truncated-pair constants C(alpha)", [&](Check& c) {
        struct Case {
            double alpha;
            double target;
            bool small;
        };
        for (Case k : {Case{1.0 / 3.0, published::c_one_third, true},
                       Case{0.5, published::c_one_half, true},
                       Case{2.0 / 3.0, published::c_two_thirds, false},
                       Case{1.0, published::pair_density_full, false}}) {
            auto t0 = std::chrono::steady_clock::now();
            auto r = k.small ? lab.c_alpha_small(k.alpha) : lab.c_alpha_large(k.alpha);
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::ostringstream label;
            label << "C(" << k.alpha << ")";
            c.expect(r.value >= k.target, label.str(), r.value);
            c.expect(secs < 60.0, label.str() + " runtime s", secs);
        }
    });
}

inline CriterionResult crit4_hf_split(const BoundsLab& lab) {
    return timed(4, "alpha=1 sieve/smooth decomposition", [&](Check& c) {
        auto h = lab.maximize_h();
        auto f = lab.maximize_f(0.2056);
        double hc = h.argmax.at(0).second;
        double fd = f.argmax.at(0).second;
        c.expect(h.value >= published::h_part, "max h", h.value);
        c.expect(hc >= 0.195 && hc <= 0.215, "argmax c", hc);
        c.expect(f.value >= published::f_part, "max f", f.value);
        c.expect(fd >= 0.40 && fd <= 0.43, "argmax delta", fd);
    });
}

inline CriterionResult crit5_c3_c4(const BoundsLab& lab) {
    return timed(5, "J-tuple constants positive with vanishing edges", [&](Check& c) {
        for (int J = 3; J <= 6; ++J) {
            auto r3 = lab.c3(J);
            auto r4 = lab.c4(J);
            c.expect(r3.value > 0.0, "C3(" + std::to_string(J) + ")", r3.value);
            c.expect(r4.value > 0.0, "C4(" + std::to_string(J) + ")", r4.value);
            // numeric boundary limits
            double hi = 1.0 / (2.0 * (J - 1.0));
            double e1 = lab.c3_objective(J, hi * 1e-6);
            double e2 = lab.c3_objective(J, hi * (1.0 - 1e-6));
            c.expect(e1 <= 1e-3 * r3.value, "C3 edge alpha->0", e1);
            c.expect(e2 <= 1e-3 * r3.value, "C3 edge alpha->hi", e2);
            double alo = (2.0 * J - 2.0) / (2.0 * J - 1.0);
            double a = 1.0 - 1e-9;
            double g = 0.5 * (1.0 - a) + 0.5 * (a / (2.0 * (J - 1.0)));
            double e3 = lab.peak_objective(a, 1.0 - a, g, J); // beta on its lower edge, alpha -> 1
            double b = 0.5 * (alo + 1.0);
            double gg = 0.9 * b / (2.0 * (J - 1.0));
            double e4 = lab.peak_objective(b, gg * (1.0 - 1e-9), gg, J); // beta -> gamma
            c.expect(e3 <= 1e-3 * r4.value, "C4 edge alpha->1", e3);
            c.expect(e4 <= 1e-3 * r4.value, "C4 edge beta->gamma", e4);
        }
    });
}

inline CriterionResult crit6_delta_upper(const BoundsLab& lab) {
    return timed(6, "reciprocal-distance upper bound", [&](Check& c) {
        double v = lab.delta_inverse_upper_bound();
        c.expect(std::fabs(v - published::delta_inverse_upper) <= 1e-10, "1 - valley/2", v);
    });
}

inline CriterionResult crit7_special(const SpecialFnTables& fns) {
    return timed(7, "special-function accuracy", [&](Check& c) {
        c.expect(std::fabs(fns.rho(2.0) - (1.0 - std::log(2.0))) <= 1e-8, "rho(2)", fns.rho(2.0));
        c.expect(std::fabs(fns.omega(3.0) - (1.0 + std::log(2.0)) / 3.0) <= 1e-8, "omega(3)",
                 fns.omega(3.0));
        double r3 = fns.rho(3.0), r10 = fns.rho(10.0);
        c.expect(std::fabs(r3 - kOracleRho3) <= 1e-8 * kOracleRho3, "rho(3)", r3);
        c.expect(std::fabs(r10 - kOracleRho10) <= 1e-8 * kOracleRho10, "rho(10)", r10);
        for (double u : {0.5, 1.5, 2.5, 3.5}) {
            double v = fns.theta0(1.0, u);
            c.expect(std::fabs(v - 1.0) <= 1e-7, "theta0(1," + std::to_string(u) + ")", v);
        }
        // delay-equation residuals at 100 interior knots (offset avoids the
        // reduced smoothness at integer knots)
        const double h = fns.step();
        double worst_rho = 0.0, worst_omega = 0.0;
        for (int i = 0; i < 100; ++i) {
            double u = 2.1037 + (fns.u_max() - 2.4) * i / 99.0;
            double dr = (fns.rho(u + h) - fns.rho(u - h)) / (2.0 * h);
            worst_rho = std::max(worst_rho, std::fabs(u * dr + fns.rho(u - 1.0)) / fns.rho(u - 1.0));
            double dw = ((u + h) * fns.omega(u + h) - (u - h) * fns.omega(u - h)) / (2.0 * h);
            worst_omega =
                std::max(worst_omega, std::fabs(dw - fns.omega(u - 1.0)) / fns.omega(u - 1.0));
        }
        c.expect(worst_rho <= 1e-3, "max rho residual (rel)", worst_rho);
        c.expect(worst_omega <= 1e-3, "max omega residual (rel)", worst_omega);
    });
}

inline CriterionResult crit8_sieve_oracle() {
    return timed(8, "sieve equals trial division; segmentation invariant", [&](Check& c) {
        SieveConfig small_cfg;
        small_cfg.segment_length = 1000;
        SieveConfig big_cfg;
        big_cfg.segment_length = 1u << 20;
        big_cfg.parallel_segments = 2;
        auto a = build_factor_table(1, 100000, small_cfg);
        auto b = build_factor_table(1, 100000, big_cfg);
        u64 mismatch_oracle = 0, mismatch_seg = 0;
        for (u64 n = 1; n <= 100000; ++n) {
            if (a.lpf(n) != largest_prime_factor(n)) ++mismatch_oracle;
            if (a.lpf(n) != b.lpf(n)) ++mismatch_seg;
        }
        c.expect(mismatch_oracle == 0, "trial-division mismatches", mismatch_oracle);
        c.expect(mismatch_seg == 0, "segmentation mismatches", mismatch_seg);
    });
}

inline CriterionResult crit9_fixtures(const SpecialFnTables& fns) {
    return timed(9, "hand-count fixtures", [&](Check& c) {
        auto t = build_factor_table(1, 64);
        auto tr = count_triple_patterns(10, t);
        c.expect(tr.at("valley") == 3 && tr.at("peak") == 3 && tr.at("increasing") == 1 &&
                     tr.at("decreasing") == 0,
                 "triples(10)",
                 std::to_string(tr.at("valley")) + "," + std::to_string(tr.at("peak")) + "," +
                     std::to_string(tr.at("increasing")) + "," + std::to_string(tr.at("decreasing")));
        auto pc = count_pairwise(10, 10, t);
        c.expect(pc.at("less") == 6 && pc.at("greater") == 3 && pc.at("equal") == 0, "pairs(10,inf)",
                 std::to_string(pc.at("less")) + "," + std::to_string(pc.at("greater")) + "," +
                     std::to_string(pc.at("equal")));
        c.expect(delta_of(4, t) == 2, "delta(4)", delta_of(4, t));
        c.expect(delta_of(9, t) == 1, "delta(9)", delta_of(9, t));
        c.expect(delta_star_of(5, t) == 2, "delta*(5)", delta_star_of(5, t));
        auto sc1 = smooth_counts(10, 3, 1, t, fns);
        c.expect(sc1.psi == 7, "Psi(10,3)", sc1.psi);
        auto sc2 = smooth_counts(20, 7, 3, t, fns);
        c.expect(sc2.psi0 == 14, "Psi0(20;7,3)", sc2.psi0);
    });
}

inline CriterionResult crit10_corridors(const SpecialFnTables& fns) {
    return timed(10, "desk-scale corridors at 1e6", [&](Check& c) {
        const u64 n_max = 1000000;
        const u64 margin = std::max<u64>(10000, n_max / 100);
        SieveConfig cfg;
        cfg.segment_length = 1u << 18;
        cfg.parallel_segments = 2;
        auto t0 = std::chrono::steady_clock::now();
        auto table = build_factor_table(1, n_max + margin, cfg);

        auto pc = count_pairwise(n_max, n_max, table);
        double less_density = double(pc.at("less")) / double(n_max - 1);
        c.expect(less_density >= 0.48 && less_density <= 0.52, "pair less-density", less_density);

        auto tr = count_triple_patterns(n_max, table);
        double dv = double(tr.at("valley")) / double(n_max);
        double dp = double(tr.at("peak")) / double(n_max);
        double di = double(tr.at("increasing")) / double(n_max);
        double dd = double(tr.at("decreasing")) / double(n_max);
        c.expect(dv > 0 && dp > 0 && di > 0 && dd > 0, "all four densities positive",
                 std::to_string(dv) + "/" + std::to_string(dp) + "/" + std::to_string(di) + "/" +
                     std::to_string(dd));
        c.expect(dv >= published::valley_density && dv < 2.0 / 3.0, "valley density", dv);
        c.expect(dp >= published::peak_density && dp < 2.0 / 3.0, "peak density", dp);

        auto ds = delta_sums(n_max, table);
        double ratio = ds.sum_delta_inv / double(n_max);
        c.expect(ratio > 2.0 / 3.0 - 0.02 && ratio < 1.0, "sum 1/delta / n_max", ratio);

        for (double u : {1.5, 2.0, 2.5, 3.0}) {
            u64 y = static_cast<u64>(std::llround(std::pow(double(n_max), 1.0 / u)));
            u64 psi = 0;
            for (u64 n = 1; n <= n_max; ++n)
                if (table.lpf(n) <= y) ++psi;
            double dev = double(psi) / (double(n_max) * fns.rho(std::log(double(n_max)) / std::log(double(y)))) - 1.0;
            c.expect(std::fabs(dev) <= 0.05, "Psi/(x rho), u=" + std::to_string(u) + " dev", dev);
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.expect(secs < 60.0, "runtime s", secs);
    });
}

} // namespace acceptance

/// Run the complete acceptance suite. Builds its own tables so it can run
/// from a bare `verify` invocation.
inline std::vector<CriterionResult> run_acceptance() {
    SpecialFnTables fns;
    BoundsLab lab(fns);
    std::vector<CriterionResult> out;
    out.push_back(acceptance::crit1_valley(lab));
    out.push_back(acceptance::crit2_peak(lab));
    out.push_back(acceptance::crit3_c_alpha(lab));
    out.push_back(acceptance::crit4_hf_split(lab));
    out.push_back(acceptance::crit5_c3_c4(lab));
    out.push_back(acceptance::crit6_delta_upper(lab));
    out.push_back(acceptance::crit7_special(fns));
    out.push_back(acceptance::crit8_sieve_oracle());
    out.push_back(acceptance::crit9_fixtures(fns));
    out.push_back(acceptance::crit10_corridors(fns));
    return out;
}

inline std::string format_criterion(const CriterionResult& r) {
    char head[64];
    std::snprintf(head, sizeof(head), "[%s] criterion %2d (%.2fs): ", r.pass ? "PASS" : "FAIL", r.id,
                  r.seconds);
    return std::string(head) + r.name + " -- " + r.detail;
}

} // namespace lpflab
