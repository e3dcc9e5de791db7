#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lpflab/errors.hpp"

namespace lpflab {

using u64 = std::uint64_t;

/// Sentinel for the smallest prime factor of 1 (no prime factor exists).
inline constexpr u64 kNoPrimeFactor = std::numeric_limits<u64>::max();

struct SieveConfig {
    u64 segment_length = 1u << 16;
    unsigned parallel_segments = 1;
    bool with_spf = false;
    // hard cap on total table memory; exceeding it is a resource error
    u64 max_table_bytes = u64(1) << 33;

    void validate() const {
        if (segment_length < 2) throw std::invalid_argument("SieveConfig: segment_length must be >= 2");
        if (parallel_segments < 1) throw std::invalid_argument("SieveConfig: parallel_segments must be >= 1");
        if (segment_length > (u64(1) << 28))
            throw std::invalid_argument("SieveConfig: segment_length exceeds the per-segment memory cap");
    }
};

/// Largest (and optionally smallest) prime factors for every integer in
/// [lo, hi]. Immutable once built; safe to share across threads.
class FactorTable {
public:
    FactorTable(u64 lo, u64 hi, std::vector<u64> lpf, std::vector<u64> spf)
        : lo_(lo), hi_(hi), lpf_(std::move(lpf)), spf_(std::move(spf)) {}

    u64 lo() const { return lo_; }
    u64 hi() const { return hi_; }
    bool contains(u64 n) const { return n >= lo_ && n <= hi_; }
    bool has_spf() const { return !spf_.empty(); }

    /// P+(n); P+(1) = 1.
    u64 lpf(u64 n) const {
        if (!contains(n)) throw std::invalid_argument("FactorTable: n outside table range");
        return lpf_[n - lo_];
    }

    /// P-(n); P-(1) is the kNoPrimeFactor sentinel.
    u64 spf(u64 n) const {
        if (spf_.empty()) throw std::invalid_argument("FactorTable: built without smallest-prime-factor storage");
        if (!contains(n)) throw std::invalid_argument("FactorTable: n outside table range");
        return spf_[n - lo_];
    }

    const std::vector<u64>& lpf_data() const { return lpf_; }
    const std::vector<u64>& spf_data() const { return spf_; }

private:
    u64 lo_, hi_;
    std::vector<u64> lpf_;
    std::vector<u64> spf_;
};

inline u64 isqrt_u64(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// All primes <= limit by a plain Eratosthenes sieve.
inline std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> comp(limit + 1, false);
    for (u64 i = 2; i * i <= limit; ++i)
        if (!comp[i])
            for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
    for (u64 i = 2; i <= limit; ++i)
        if (!comp[i]) out.push_back(i);
    return out;
}

/// Trial-division P+(n). Independent oracle for the sieve and fallback for
/// values outside a table.
inline u64 largest_prime_factor(u64 n) {
    if (n == 0) throw std::invalid_argument("largest_prime_factor: n must be >= 1");
    if (n == 1) return 1;
    u64 best = 1;
    for (u64 d = 2; d * d <= n; d = (d == 2 ? 3 : d + 2)) {
        while (n % d == 0) {
            best = d;
            n /= d;
        }
    }
    return n > 1 ? n : best;
}

namespace detail {

inline void sieve_segment(u64 seg_lo, u64 seg_hi, const std::vector<u64>& base_primes,
                          u64 table_lo, std::vector<u64>& lpf, std::vector<u64>* spf) {
    const u64 len = seg_hi - seg_lo + 1;
    std::vector<u64> residual(len);
    for (u64 i = 0; i < len; ++i) residual[i] = seg_lo + i;
    std::vector<u64> lo_factor(len, 0);   // largest base prime dividing n
    std::vector<u64> first_factor;
    if (spf) first_factor.assign(len, 0);

    for (u64 p : base_primes) {
        if (p * p > seg_hi) break;
        u64 start = ((seg_lo + p - 1) / p) * p;
        for (u64 m = start; m <= seg_hi; m += p) {
            u64 i = m - seg_lo;
            lo_factor[i] = p;
            if (spf && first_factor[i] == 0) first_factor[i] = p;
            u64 r = residual[i];
            while (r % p == 0) r /= p;
            residual[i] = r;
        }
    }
    for (u64 i = 0; i < len; ++i) {
        u64 n = seg_lo + i;
        u64 idx = n - table_lo;
        if (n == 1) {
            lpf[idx] = 1;
            if (spf) (*spf)[idx] = kNoPrimeFactor;
            continue;
        }
        // residual > 1 is the (prime) cofactor above sqrt(seg_hi)
        lpf[idx] = residual[i] > 1 ? residual[i] : lo_factor[i];
        if (spf) (*spf)[idx] = first_factor[i] != 0 ? first_factor[i] : n;
    }
}

} // namespace detail

/// Build P+ (and optionally P-) for every n in [lo, hi] with a segmented
/// sieve. The result is independent of segment_length and parallelism.
inline FactorTable build_factor_table(u64 lo, u64 hi, const SieveConfig& cfg = {}) {
    cfg.validate();
    if (lo < 1 || lo > hi) throw std::invalid_argument("build_factor_table: requires 1 <= lo <= hi");
    const u64 count = hi - lo + 1;
    const u64 bytes = count * sizeof(u64) * (cfg.with_spf ? 2 : 1);
    if (bytes > cfg.max_table_bytes)
        throw resource_error("build_factor_table: range needs " + std::to_string(bytes) +
                             " bytes, over the configured cap");

    const std::vector<u64> base_primes = primes_up_to(isqrt_u64(hi));
    std::vector<u64> lpf(count);
    std::vector<u64> spf;
    if (cfg.with_spf) spf.assign(count, 0);

    const u64 nseg = (count + cfg.segment_length - 1) / cfg.segment_length;
    auto run = [&](u64 s) {
        u64 seg_lo = lo + s * cfg.segment_length;
        u64 seg_hi = std::min(hi, seg_lo + cfg.segment_length - 1);
        detail::sieve_segment(seg_lo, seg_hi, base_primes, lo, lpf, cfg.with_spf ? &spf : nullptr);
    };

    unsigned workers = std::min<u64>(cfg.parallel_segments, nseg);
    if (workers <= 1) {
        for (u64 s = 0; s < nseg; ++s) run(s);
    } else {
        // segments write disjoint slices, so the merge is deterministic
        std::atomic<u64> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (u64 s = next.fetch_add(1); s < nseg; s = next.fetch_add(1)) run(s);
            });
        for (auto& th : pool) th.join();
    }
    return FactorTable(lo, hi, std::move(lpf), std::move(spf));
}

/// P+_y(n): largest prime factor of n that is <= y, or 1 if none.
inline u64 p_plus_y(u64 n, u64 y, const FactorTable& table) {
    if (y < 2) throw std::invalid_argument("p_plus_y: requires y >= 2");
    if (!table.contains(n)) throw std::invalid_argument("p_plus_y: n outside table range");
    u64 full = table.lpf(n);
    if (full <= y) return full;
    // factor the y-rough part by trial division up to y
    u64 best = 1;
    u64 m = n;
    for (u64 d = 2; d <= y && d * d <= m; d = (d == 2 ? 3 : d + 2)) {
        while (m % d == 0) {
            best = d;
            m /= d;
        }
    }
    if (m > 1 && m <= y) best = m > best ? m : best;
    return best;
}

/// Dense table of P+_y(n) for n in [1, hi]; entries with no prime factor
/// <= y hold 1.
inline std::vector<u64> truncated_lpf_table(u64 hi, u64 y) {
    if (y < 2) throw std::invalid_argument("truncated_lpf_table: requires y >= 2");
    std::vector<u64> t(hi + 1, 1);
    if (hi == 0) return t;
    for (u64 p : primes_up_to(std::min(hi, y)))
        for (u64 m = p; m <= hi; m += p) t[m] = p;
    return t;
}

// ---------------------------------------------------------------------------
// binary dump: magic "LPFT", u32 version, u64 lo, u64 hi, u32 flags
// (bit 0 = has spf), then little-endian u64 values (lpf block, spf block).
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& os, u64 v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
}

inline u64 get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= u64(b[i]) << (8 * i);
    return v;
}

} // namespace detail

inline constexpr std::uint32_t kFactorTableFormatVersion = 1;

inline void dump_factor_table(const FactorTable& t, std::ostream& os) {
    os.write("LPFT", 4);
    detail::put_u32(os, kFactorTableFormatVersion);
    detail::put_u64(os, t.lo());
    detail::put_u64(os, t.hi());
    detail::put_u32(os, t.has_spf() ? 1u : 0u);
    for (u64 v : t.lpf_data()) detail::put_u64(os, v);
    if (t.has_spf())
        for (u64 v : t.spf_data()) detail::put_u64(os, v);
}

inline FactorTable load_factor_table(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LPFT", 4) != 0)
        throw std::invalid_argument("load_factor_table: bad magic");
    std::uint32_t version = detail::get_u32(is);
    if (version != kFactorTableFormatVersion)
        throw std::invalid_argument("load_factor_table: unsupported version " + std::to_string(version));
    u64 lo = detail::get_u64(is);
    u64 hi = detail::get_u64(is);
    std::uint32_t flags = detail::get_u32(is);
    if (lo < 1 || hi < lo) throw std::invalid_argument("load_factor_table: corrupt header");
    u64 count = hi - lo + 1;
    std::vector<u64> lpf(count), spf;
    for (u64 i = 0; i < count; ++i) lpf[i] = detail::get_u64(is);
    if (flags & 1u) {
        spf.resize(count);
        for (u64 i = 0; i < count; ++i) spf[i] = detail::get_u64(is);
    }
    if (!is) throw std::invalid_argument("load_factor_table: truncated file");
    return FactorTable(lo, hi, std::move(lpf), std::move(spf));
}

} // namespace lpflab
