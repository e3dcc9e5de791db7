#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lpflab/quadrature.hpp"
#include "lpflab/sieve.hpp"
#include "lpflab/special.hpp"

namespace lpflab {

struct PatternCounts {
    u64 n_max = 0;
    std::map<std::string, u64> counts; // class name -> exact count
    u64 ties = 0;                      // windows excluded for non-strict comparisons
    u64 classified = 0;                // windows that fell into some class

    u64 at(const std::string& k) const {
        auto it = counts.find(k);
        return it == counts.end() ? 0 : it->second;
    }
};

struct DeltaSums {
    u64 n_max = 0;
    double sum_delta_inv = 0.0;
    double sum_delta_star_inv = 0.0;
    std::vector<u64> excluded; // n with undefined delta (only n = 1)
};

struct SmoothCounts {
    u64 psi = 0;   // P+(n) <= y
    u64 psi0 = 0;  // no prime factor in (z, y]
    u64 phi = 0;   // P-(n) > y
    double psi_pred = 0.0;   // x rho(u)
    double psi0_pred = 0.0;  // x theta0(lambda, u)
    double psi_rel_dev = 0.0;
    double psi0_rel_dev = 0.0;
};

struct DiscrepancyReport {
    u64 x = 0, y = 0, z = 0, Q = 0;
    std::string set_name;
    std::vector<double> per_q_max; // per_q_max[q-1] = max_a |count(a,q) - coprime/phi(q)|
    double max_dev = 0.0;
    double mean_dev = 0.0;
};

enum class ExtremeMode { min, max };
enum class BvSet { smooth, interval, rough };

namespace detail {

inline void require_base_table(const FactorTable& t, u64 need_hi, const char* who) {
    if (t.lo() != 1 || t.hi() < need_hi)
        throw std::invalid_argument(std::string(who) + ": table must cover [1, " +
                                    std::to_string(need_hi) + "]");
}

// P+_y values for 1..n_max; y >= n_max means no truncation
inline std::vector<u64> pvals_upto(u64 n_max, u64 y, const FactorTable& table) {
    if (y >= n_max) {
        std::vector<u64> v(n_max + 1, 0);
        for (u64 n = 1; n <= n_max; ++n) v[n] = table.lpf(n);
        return v;
    }
    return truncated_lpf_table(n_max, y);
}

} // namespace detail

/// Classify each center n in [3, n_max-1] by the ordering of
/// (P+(n-1), P+(n), P+(n+1)). Adjacent values are never equal (consecutive
/// integers are coprime), so the four classes partition all centers.
inline PatternCounts count_triple_patterns(u64 n_max, const FactorTable& table) {
    if (n_max < 4) throw std::invalid_argument("count_triple_patterns: n_max must be >= 4");
    detail::require_base_table(table, n_max, "count_triple_patterns");
    PatternCounts out;
    out.n_max = n_max;
    u64 valley = 0, peak = 0, incr = 0, decr = 0;
    u64 a = table.lpf(2), b = table.lpf(3);
    for (u64 n = 3; n + 1 <= n_max; ++n) {
        u64 c = table.lpf(n + 1);
        if (a > b && b < c) ++valley;
        else if (a < b && b > c) ++peak;
        else if (a < b && b < c) ++incr;
        else ++decr;
        a = b;
        b = c;
    }
    out.counts = {{"valley", valley}, {"peak", peak}, {"increasing", incr}, {"decreasing", decr}};
    out.classified = valley + peak + incr + decr;
    return out;
}

/// Compare P+_y(n) with P+_y(n+1) for n in [1, n_max-1]. Equality happens
/// exactly when both sides are y-rough (both values 1).
inline PatternCounts count_pairwise(u64 n_max, u64 y, const FactorTable& table) {
    if (n_max < 2) throw std::invalid_argument("count_pairwise: n_max must be >= 2");
    if (y < 2) throw std::invalid_argument("count_pairwise: requires y >= 2");
    detail::require_base_table(table, n_max, "count_pairwise");
    auto v = detail::pvals_upto(n_max, y, table);
    PatternCounts out;
    out.n_max = n_max;
    u64 less = 0, greater = 0, equal = 0;
    for (u64 n = 1; n + 1 <= n_max; ++n) {
        if (v[n] < v[n + 1]) ++less;
        else if (v[n] > v[n + 1]) ++greater;
        else ++equal;
    }
    out.counts = {{"less", less}, {"greater", greater}, {"equal", equal}};
    out.classified = less + greater + equal;
    return out;
}

/// Count windows n in [1, n_max-J+1] where position j0 attains the min (or
/// max) of P+(n), ..., P+(n+J-1). `strict` demands unique attainment; ties
/// reports how many windows attain non-strictly but not strictly.
inline PatternCounts count_tuple_extremes(u64 n_max, int J, int j0, ExtremeMode mode, bool strict,
                                          const FactorTable& table) {
    if (J < 3) throw std::invalid_argument("count_tuple_extremes: requires J >= 3");
    if (j0 < 0 || j0 >= J) throw std::invalid_argument("count_tuple_extremes: requires 0 <= j0 < J");
    if (n_max < static_cast<u64>(J)) throw std::invalid_argument("count_tuple_extremes: n_max < J");
    detail::require_base_table(table, n_max, "count_tuple_extremes");
    u64 strict_count = 0, attained = 0;
    for (u64 n = 1; n + J - 1 <= n_max; ++n) {
        u64 pivot = table.lpf(n + j0);
        bool attain = true, unique = true;
        for (int j = 0; j < J; ++j) {
            if (j == j0) continue;
            u64 v = table.lpf(n + j);
            bool better = (mode == ExtremeMode::min) ? (v < pivot) : (v > pivot);
            if (better) {
                attain = false;
                break;
            }
            if (v == pivot) unique = false;
        }
        if (attain) {
            ++attained;
            if (unique) ++strict_count;
        }
    }
    PatternCounts out;
    out.n_max = n_max;
    out.counts["count"] = strict ? strict_count : attained;
    out.ties = attained - strict_count;
    out.classified = n_max - J + 1;
    return out;
}

/// delta(n): distance to the nearest m != n with P+(m) <= P+(n). Undefined
/// for n = 1 (argument error). Scans above the table fall back to trial
/// division.
inline u64 delta_of(u64 n, const FactorTable& table) {
    if (n < 2) throw std::invalid_argument("delta_of: undefined for n = 1");
    if (!table.contains(n)) throw std::invalid_argument("delta_of: n outside table");
    const u64 pn = table.lpf(n);
    auto pplus = [&](u64 m) { return table.contains(m) ? table.lpf(m) : largest_prime_factor(m); };
    for (u64 d = 1;; ++d) {
        if (n > d && pplus(n - d) <= pn) return d;
        if (pplus(n + d) <= pn) return d;
    }
}

/// delta*(n): distance to the nearest m != n with P+(m) >= P+(n).
inline u64 delta_star_of(u64 n, const FactorTable& table) {
    if (n < 1) throw std::invalid_argument("delta_star_of: requires n >= 1");
    if (!table.contains(n)) throw std::invalid_argument("delta_star_of: n outside table");
    const u64 pn = table.lpf(n);
    auto pplus = [&](u64 m) { return table.contains(m) ? table.lpf(m) : largest_prime_factor(m); };
    for (u64 d = 1;; ++d) {
        if (n > d && pplus(n - d) >= pn) return d;
        if (pplus(n + d) >= pn) return d;
    }
}

/// delta(n): distance to the nearest m != n with P+(m) <= P+(n);
/// delta*(n): same with P+(m) >= P+(n). Scans run outward; above the table
/// they fall back to trial division. n = 1 is excluded from the delta sum
/// (no competitor exists); delta*(1) = 1.
inline DeltaSums delta_sums(u64 n_max, const FactorTable& table) {
    if (n_max < 2) throw std::invalid_argument("delta_sums: n_max must be >= 2");
    detail::require_base_table(table, n_max, "delta_sums");
    DeltaSums out;
    out.n_max = n_max;
    out.excluded.push_back(1);
    out.sum_delta_star_inv += 1.0; // delta*(1) = 1 via m = 2
    const u64 hi = table.hi();
    auto pplus = [&](u64 m) { return m <= hi ? table.lpf(m) : largest_prime_factor(m); };
    for (u64 n = 2; n <= n_max; ++n) {
        const u64 pn = table.lpf(n);
        u64 d_le = 0, d_ge = 0;
        for (u64 d = 1; d_le == 0 || d_ge == 0; ++d) {
            if (n > d) {
                u64 p = table.lpf(n - d);
                if (d_le == 0 && p <= pn) d_le = d;
                if (d_ge == 0 && p >= pn) d_ge = d;
            }
            if (d_le == 0 || d_ge == 0) {
                u64 p = pplus(n + d);
                if (d_le == 0 && p <= pn) d_le = d;
                if (d_ge == 0 && p >= pn) d_ge = d;
            }
        }
        out.sum_delta_inv += 1.0 / static_cast<double>(d_le);
        out.sum_delta_star_inv += 1.0 / static_cast<double>(d_ge);
    }
    return out;
}

/// Frequency of each strict ordering of (P+(n), ..., P+(n+k-1)) over windows
/// inside [1, n_max]. Key "a1a2...ak" lists offsets in increasing P+ order;
/// windows with any tie are counted in `ties` only.
inline PatternCounts permutation_densities(u64 n_max, int k, const FactorTable& table) {
    if (k < 2 || k > 6) throw std::invalid_argument("permutation_densities: requires 2 <= k <= 6");
    if (n_max < static_cast<u64>(k)) throw std::invalid_argument("permutation_densities: n_max < k");
    detail::require_base_table(table, n_max, "permutation_densities");
    PatternCounts out;
    out.n_max = n_max;
    // pre-register all k! classes so absent orderings emit explicit zeros
    std::array<int, 6> perm{};
    std::iota(perm.begin(), perm.begin() + k, 0);
    do {
        std::string key;
        for (int i = 0; i < k; ++i) key += static_cast<char>('0' + perm[i]);
        out.counts[key] = 0;
    } while (std::next_permutation(perm.begin(), perm.begin() + k));

    std::array<u64, 6> v{};
    std::array<int, 6> ord{};
    for (u64 n = 1; n + k - 1 <= n_max; ++n) {
        for (int i = 0; i < k; ++i) v[i] = table.lpf(n + i);
        std::iota(ord.begin(), ord.begin() + k, 0);
        std::sort(ord.begin(), ord.begin() + k, [&](int a, int b) { return v[a] < v[b]; });
        bool tie = false;
        for (int i = 0; i + 1 < k; ++i)
            if (v[ord[i]] == v[ord[i + 1]]) tie = true;
        if (tie) {
            ++out.ties;
            continue;
        }
        std::string key;
        for (int i = 0; i < k; ++i) key += static_cast<char>('0' + ord[i]);
        ++out.counts[key];
        ++out.classified;
    }
    return out;
}

/// Exact counts of smooth / interval-sifted / rough integers up to x, with
/// the limiting-density predictions x rho(u) and x theta0(lambda, u).
inline SmoothCounts smooth_counts(u64 x, u64 y, u64 z, const FactorTable& table,
                                  const SpecialFnTables& fns, const QuadratureSpec& quad = {}) {
    if (!(z <= y && y <= x)) throw std::invalid_argument("smooth_counts: requires z <= y <= x");
    if (z < 1) throw std::invalid_argument("smooth_counts: requires z >= 1");
    detail::require_base_table(table, x, "smooth_counts");
    SmoothCounts out;
    for (u64 n = 1; n <= x; ++n)
        if (table.lpf(n) <= y) ++out.psi;

    // interval-sifted and rough sets via direct prime marking
    std::vector<char> hit(x + 1, 0);
    for (u64 p : primes_up_to(y)) {
        if (p <= z) continue;
        for (u64 m = p; m <= x; m += p) hit[m] = 1;
    }
    for (u64 n = 1; n <= x; ++n)
        if (!hit[n]) ++out.psi0;
    std::fill(hit.begin(), hit.end(), 0);
    for (u64 p : primes_up_to(y))
        for (u64 m = p; m <= x; m += p) hit[m] = 1;
    for (u64 n = 1; n <= x; ++n)
        if (!hit[n]) ++out.phi; // includes n = 1 (P-(1) sentinel is above any y)

    const double u = std::log(double(x)) / std::log(double(y));
    const double lambda = z == 1 ? 0.0 : std::log(double(z)) / std::log(double(y));
    out.psi_pred = double(x) * fns.rho_or_tail_zero(u);
    out.psi0_pred = double(x) * fns.theta0(std::min(lambda, 1.0), u, quad);
    out.psi_rel_dev = out.psi_pred != 0.0 ? double(out.psi) / out.psi_pred - 1.0 : 0.0;
    out.psi0_rel_dev = out.psi0_pred != 0.0 ? double(out.psi0) / out.psi0_pred - 1.0 : 0.0;
    return out;
}

/// Per-modulus arithmetic-progression discrepancy of the chosen set:
/// max over (a,q)=1 of |#{n in S, n = a mod q} - #{n in S, (n,q)=1}/phi(q)|.
inline DiscrepancyReport bv_discrepancy(u64 x, u64 y, u64 z, u64 Q, BvSet set,
                                        const FactorTable& table, unsigned threads = 1) {
    if (Q < 1) throw std::invalid_argument("bv_discrepancy: requires Q >= 1");
    if (Q > isqrt_u64(x)) throw std::invalid_argument("bv_discrepancy: requires Q <= sqrt(x)");
    if (!(z <= y && y <= x)) throw std::invalid_argument("bv_discrepancy: requires z <= y <= x");
    detail::require_base_table(table, x, "bv_discrepancy");

    std::vector<char> member(x + 1, 0);
    switch (set) {
        case BvSet::smooth:
            for (u64 n = 1; n <= x; ++n) member[n] = table.lpf(n) <= y;
            break;
        case BvSet::interval: {
            std::fill(member.begin() + 1, member.end(), 1);
            for (u64 p : primes_up_to(y)) {
                if (p <= z) continue;
                for (u64 m = p; m <= x; m += p) member[m] = 0;
            }
            break;
        }
        case BvSet::rough: {
            std::fill(member.begin() + 1, member.end(), 1);
            for (u64 p : primes_up_to(y))
                for (u64 m = p; m <= x; m += p) member[m] = 0;
            break;
        }
    }
    std::vector<u64> members;
    for (u64 n = 1; n <= x; ++n)
        if (member[n]) members.push_back(n);

    DiscrepancyReport rep;
    rep.x = x;
    rep.y = y;
    rep.z = z;
    rep.Q = Q;
    rep.set_name = set == BvSet::smooth ? "smooth" : set == BvSet::interval ? "interval" : "rough";
    rep.per_q_max.assign(Q, 0.0);

    auto work = [&](u64 q) {
        std::vector<u64> cnt(q, 0);
        for (u64 n : members) ++cnt[n % q];
        u64 coprime_total = 0;
        u64 phi = 0;
        for (u64 a = 0; a < q; ++a)
            if (std::gcd(a, q) == 1) {
                ++phi;
                coprime_total += cnt[a];
            }
        double avg = double(coprime_total) / double(phi);
        double worst = 0.0;
        for (u64 a = 0; a < q; ++a)
            if (std::gcd(a, q) == 1) worst = std::max(worst, std::fabs(double(cnt[a]) - avg));
        rep.per_q_max[q - 1] = worst;
    };
    if (threads <= 1) {
        for (u64 q = 1; q <= Q; ++q) work(q);
    } else {
        std::atomic<u64> next{1};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (u64 q = next.fetch_add(1); q <= Q; q = next.fetch_add(1)) work(q);
            });
        for (auto& th : pool) th.join();
    }
    rep.max_dev = *std::max_element(rep.per_q_max.begin(), rep.per_q_max.end());
    rep.mean_dev = std::accumulate(rep.per_q_max.begin(), rep.per_q_max.end(), 0.0) / double(Q);
    return rep;
}

/// Signed pair sum: +1 when P+_y(n+1) > P+_y(n), -1 when smaller, 0 on the
/// (y-rough, y-rough) equality case; n runs to n_max - 1.
inline long long rivat_fy_sum(u64 n_max, u64 y, const FactorTable& table) {
    auto pc = count_pairwise(n_max, y, table);
    return static_cast<long long>(pc.at("less")) - static_cast<long long>(pc.at("greater"));
}

} // namespace lpflab
