#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "lpflab/bounds.hpp"

using namespace lpflab;

namespace {

const SpecialFnTables& tables() {
    static SpecialFnTables fns;
    return fns;
}

const BoundsLab& lab() {
    static BoundsLab b(tables());
    return b;
}

template <class F>
double midpoint_rule(F&& f, double a, double b, int n) {
    double h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

} // namespace

TEST_CASE("valley objective: published point, limits, quadrature oracle") {
    CHECK(lab().valley_objective(1.0 / 4.6) > 1.063e-7);
    CHECK(lab().valley_objective(0.02) <= 1e-20); // rho(50) kills it
    double a = 0.20;
    double oracle = tables().rho(1.0 / a) * a * a * a *
                    midpoint_rule([&](double t) { return std::log(t) / (0.5 - a * t); }, 1.0,
                                  1.0 / (2.0 * a) - 1.0, 1000000);
    CHECK(lab().valley_objective(a) == Catch::Approx(oracle).epsilon(1e-8));
    CHECK_THROWS_AS(lab().valley_objective(0.0), std::invalid_argument);
    CHECK_THROWS_AS(lab().valley_objective(0.25), std::invalid_argument);
}

TEST_CASE("valley maximization") {
    auto r = lab().maximize_valley();
    CHECK(r.value >= 1.063e-7);
    double a = r.argmax.at(0).second;
    CHECK(a == Catch::Approx(0.217).margin(0.005));
    // local-max property
    CHECK(lab().valley_objective(a + 1e-4) <= r.value);
    CHECK(lab().valley_objective(a - 1e-4) <= r.value);
    // coarse and refined resolutions agree to 3 significant digits
    auto coarse = grid_refine_max_1d(
        [&](double x) {
            return (x > 0.0 && x < 0.25) ? lab().valley_objective(x)
                                         : -std::numeric_limits<double>::infinity();
        },
        0.0, 0.25, 500);
    CHECK(coarse.value == Catch::Approx(r.value).epsilon(1e-3));
}

TEST_CASE("peak objective: published parameters and degenerate edges") {
    CHECK(lab().peak_objective(0.895, 0.105, 0.22375, 3) > 7e-4);
    // beta = gamma collapses the weight factor
    CHECK(lab().peak_objective(0.9, 0.2, 0.2, 3) == 0.0);
    CHECK(lab().peak_objective(0.9, 0.2, 0.2000000001, 3) < 1e-18);
    // alpha -> 1 kills log(1/alpha)
    CHECK(lab().peak_objective(1.0 - 1e-9, 0.1, 0.2, 3) < 1e-9);
    CHECK_THROWS_WITH(lab().peak_objective(0.7, 0.1, 0.2, 3),
                      Catch::Matchers::ContainsSubstring("(2J-2)/(2J-1) < alpha"));
    CHECK_THROWS_WITH(lab().peak_objective(0.9, 0.05, 0.2, 3),
                      Catch::Matchers::ContainsSubstring("1 - alpha <= beta"));
    CHECK_THROWS_WITH(lab().peak_objective(0.9, 0.21, 0.2, 3),
                      Catch::Matchers::ContainsSubstring("beta < gamma"));
    CHECK_THROWS_WITH(lab().peak_objective(0.9, 0.1, 0.24, 3),
                      Catch::Matchers::ContainsSubstring("gamma < alpha/(2(J-1))"));
}

TEST_CASE("peak window decomposition reaches the published pieces") {
    auto pt = lab().peak_total();
    CHECK(pt.windows[0].value >= 7e-4);
    CHECK(pt.windows[1].value >= 1.44e-4);
    CHECK(pt.windows[2].value >= 4e-5);
    CHECK(pt.total >= 8.84e-4);
    // c4(3) equals the first window by construction and the window argmax
    // parameters sit near the published ones
    auto c43 = lab().c4(3);
    CHECK(c43.value == Catch::Approx(pt.windows[0].value).epsilon(1e-9));
    CHECK(c43.argmax.at(0).second == Catch::Approx(0.8927).margin(0.003));
    CHECK(c43.argmax.at(1).second == Catch::Approx(0.1073).margin(0.003));
    CHECK(c43.argmax.at(2).second == Catch::Approx(0.2232).margin(0.003));
}

TEST_CASE("c3: grid oracle, endpoints, decline in J") {
    auto r3 = lab().c3(3);
    CHECK(r3.value > 0.0);
    double a3 = r3.argmax.at(0).second;
    CHECK(a3 > 0.0);
    CHECK(a3 < 0.25);
    // dense independent grid oracle at resolution 1e-4
    double best = 0.0;
    for (double a = 1e-4; a < 0.25; a += 1e-4)
        best = std::max(best, tables().rho_or_tail_zero(1.0 / a) *
                                  std::pow(a * std::log(1.0 / (4.0 * a)), 2));
    CHECK(r3.value == Catch::Approx(best).epsilon(1e-4));
    CHECK(r3.value >= best);

    CHECK(lab().c3_objective(3, 1e-6) <= 1e-12);
    CHECK(lab().c3_objective(3, 0.25 - 1e-9) <= 1e-12);
    auto r6 = lab().c3(6);
    CHECK(r6.value > 0.0);
    CHECK(r6.value < r3.value);
    CHECK_THROWS_AS(lab().c3(2), std::invalid_argument);
}

TEST_CASE("c4 for larger tuples") {
    auto r4 = lab().c4(4);
    CHECK(r4.value > 0.0);
    CHECK(r4.value < lab().c4(3).value);
    CHECK_THROWS_AS(lab().c4(2), std::invalid_argument);
}

TEST_CASE("optimizer self-consistency on a halved grid") {
    auto f = [&](const std::vector<double>& x) {
        if (!(x[0] > 0.0 && x[0] < 0.25)) return -std::numeric_limits<double>::infinity();
        double v = lab().c3_objective(3, x[0]);
        return v;
    };
    auto fine = grid_refine_max(f, {0.0}, {0.25}, 1000);
    auto half = grid_refine_max(f, {0.0}, {0.25}, 500);
    CHECK(half.value == Catch::Approx(fine.value).epsilon(1e-3));
}

TEST_CASE("truncated-pair constants below 1/2") {
    auto r13 = lab().c_alpha_small(1.0 / 3.0);
    CHECK(r13.value > 0.0506);
    auto r12 = lab().c_alpha_small(0.5);
    CHECK(r12.value > 0.0914);
    // beta -> 0 limit of the objective
    CHECK(lab().c_alpha_small_objective(0.5, 1e-8) < 1e-6);
    CHECK_THROWS_AS(lab().c_alpha_small(0.6), std::invalid_argument);
    CHECK_THROWS_AS(lab().c_alpha_small(0.0), std::invalid_argument);
}

TEST_CASE("g objective: decomposition, empty range, region guards") {
    // alpha = 1 splits into the sieve part and the smooth part
    double g = lab().g_objective(1.0, 0.2056, 0.414);
    double split = lab().h_objective(0.2056) + lab().f_objective(0.414);
    CHECK(g == Catch::Approx(split).margin(1e-10));
    CHECK(g > 0.1238 + 0.0118);
    // c = 1 - alpha empties the sieve integral
    CHECK(lab().g_sieve_part(0.8, 0.2) == Catch::Approx(std::log(0.8 / 0.8)).margin(1e-12));
    CHECK_THROWS_AS(lab().g_objective(0.5, 0.3, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(lab().g_objective(0.8, 0.1, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(lab().g_objective(0.8, 0.3, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(lab().g_objective(0.8, 0.3, 0.6), std::invalid_argument);
    // distribution level switches at 2/7
    CHECK(BoundsLab::nu(2.0 / 7.0) == Catch::Approx(4.0 / 7.0));
    CHECK(BoundsLab::nu(2.0 / 7.0 + 1e-12) == Catch::Approx(0.5));
}

TEST_CASE("large-alpha constants") {
    auto r23 = lab().c_alpha_large(2.0 / 3.0);
    CHECK(r23.value > 0.0948);
    auto r1 = lab().corollary1();
    CHECK(r1.value > 0.1356);
    auto small = lab().c_alpha_large(0.51);
    CHECK(small.value > 0.0);
    CHECK_THROWS_AS(lab().c_alpha_large(0.5), std::invalid_argument);
    CHECK_THROWS_AS(lab().c_alpha_large(1.1), std::invalid_argument);

    // 2-D coarse-grid oracle over (c, delta) for alpha = 2/3
    double alpha = 2.0 / 3.0;
    double best = -1e18;
    for (int i = 1; i <= 160; ++i) {
        double c = (1.0 - alpha) + (0.5 - (1.0 - alpha)) * i / 161.0;
        double pc = lab().g_sieve_part(alpha, c);
        for (int j = 1; j <= 160; ++j) {
            double dlt = c + (0.5 - c) * j / 161.0;
            best = std::max(best, pc + lab().g_smooth_part(alpha, dlt));
        }
    }
    CHECK(r23.value >= best - 1e-9);
    CHECK(r23.value == Catch::Approx(best).epsilon(5e-3));
}

TEST_CASE("argmax interiority under small perturbations") {
    auto h = lab().maximize_h();
    double c = h.argmax.at(0).second;
    CHECK(lab().h_objective(c + 1e-5) <= h.value);
    CHECK(lab().h_objective(c - 1e-5) <= h.value);
    auto f = lab().maximize_f();
    double d = f.argmax.at(0).second;
    CHECK(lab().f_objective(d + 1e-5) <= f.value);
    CHECK(lab().f_objective(d - 1e-5) <= f.value);
}

TEST_CASE("alpha=1 split maxima near the published locations") {
    auto h = lab().maximize_h();
    CHECK(h.value > 0.1238);
    CHECK(h.argmax.at(0).second == Catch::Approx(0.2056).margin(0.005));
    auto f = lab().maximize_f(0.2056);
    CHECK(f.value > 0.0118);
    CHECK(f.argmax.at(0).second == Catch::Approx(0.414).margin(0.01));
}

TEST_CASE("reciprocal-distance upper bound") {
    double basic = lab().delta_inverse_upper_bound();
    CHECK(std::fabs(basic - (1.0 - 5.315e-8)) <= 1e-10);
    CHECK(lab().delta_inverse_upper_bound(2) == basic);
    double refined = lab().delta_inverse_upper_bound(4);
    CHECK(refined < basic);
    // refinement arithmetic from the c3 values
    double expect = basic - lab().c3(3).value * (1.0 / 3.0 - 1.0 / 4.0) -
                    lab().c3(4).value * (1.0 / 4.0 - 1.0 / 5.0);
    CHECK(refined == Catch::Approx(expect).margin(1e-15));
    CHECK_THROWS_AS(lab().delta_inverse_upper_bound(1), std::invalid_argument);
}

TEST_CASE("triple-ordering upper bounds") {
    auto b = BoundsLab::corollary3_bounds();
    CHECK(b[0] == Catch::Approx(2.0 / 3.0));
    CHECK(b[1] == Catch::Approx(2.0 / 3.0));
    CHECK(b[2] == Catch::Approx(0.8644 - 8.84e-4).margin(1e-12));
    CHECK(b[3] == b[2]);
    for (double v : b) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("every reproduced constant meets its published target") {
    CHECK(lab().maximize_valley().value >= published::valley_density);
    CHECK(lab().peak_total().total >= published::peak_density);
    CHECK(lab().c_alpha_small(1.0 / 3.0).value >= published::c_one_third);
    CHECK(lab().c_alpha_small(0.5).value >= published::c_one_half);
    CHECK(lab().c_alpha_large(2.0 / 3.0).value >= published::c_two_thirds);
    CHECK(lab().c_alpha_large(1.0).value >= published::pair_density_full);
    CHECK(lab().maximize_h().value >= published::h_part);
    CHECK(lab().maximize_f().value >= published::f_part);
}
