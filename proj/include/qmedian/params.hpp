#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qmedian {

/// Deterministic trial division; the parameter prime is O(n^{1/h}), so this
/// is never the bottleneck.
inline bool is_prime(std::uint64_t v) {
    if (v < 2) return false;
    if (v % 2 == 0) return v == 2;
    for (std::uint64_t d = 3; d * d <= v; d += 2)
        if (v % d == 0) return false;
    return true;
}

namespace detail {

// min(base^exp, cap) without overflow.
inline std::uint64_t pow_clamped(std::uint64_t base, unsigned exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    if (base == 0) return exp == 0 ? 1 : 0;
    for (unsigned i = 0; i < exp; ++i) {
        if (r > cap / base) return cap;
        r *= base;
        if (r >= cap) return cap;
    }
    return r;
}

} // namespace detail

/// Smallest c >= 1 with c^h >= n, i.e. ceil(n^{1/h}) computed exactly.
inline std::uint64_t ceil_nth_root(std::uint64_t n, unsigned h) {
    if (n == 0 || h == 0) throw std::invalid_argument("ceil_nth_root: need n >= 1, h >= 1");
    std::uint64_t lo = 1, hi = n;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (detail::pow_clamped(mid, h, n) >= n) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

/// Smallest prime in [ceil(n^{1/h}), 2*ceil(n^{1/h})]; one always exists.
inline std::uint64_t bertrand_prime(std::uint64_t n, unsigned h) {
    const std::uint64_t c = ceil_nth_root(n, h);
    for (std::uint64_t v = c; v <= 2 * c; ++v)
        if (is_prime(v)) return v;
    throw std::logic_error("bertrand_prime: no prime in window"); // unreachable
}

/// Base-t digits of j, most significant first, padded to h digits.
inline std::vector<std::uint32_t> tary_digits(std::uint64_t j, std::uint64_t t, unsigned h) {
    if (t < 2 || h == 0) throw std::invalid_argument("tary_digits: need t >= 2, h >= 1");
    std::vector<std::uint32_t> digits(h, 0);
    for (unsigned r = 0; r < h; ++r) {
        digits[h - 1 - r] = static_cast<std::uint32_t>(j % t);
        j /= t;
    }
    if (j != 0) throw std::invalid_argument("tary_digits: value does not fit in h base-t digits");
    return digits;
}

/// The run parameters: prime t in the Bertrand window, shift sigma in {0,1}
/// with gcd(t, n-sigma) = 1, and the base-t digits of n-sigma-1.
struct Params {
    std::uint64_t n = 0;
    unsigned h = 0;
    std::uint64_t t = 0;
    unsigned sigma = 0;
    std::vector<std::uint32_t> sprime;         // digits of n-sigma-1, most significant first
    std::vector<std::uint64_t> sprime_partial; // partial[m] = sum_{r<m} s'_r t^r, m in [0,h]
    std::vector<double> t_pow;                 // t^m for m in [0,h-1]; double so large h cannot overflow

    std::uint64_t q() const noexcept { return n - sigma; }
    std::uint32_t sprime_digit(unsigned r) const { return sprime[h - 1 - r]; } // coefficient of t^r
};

inline constexpr std::uint64_t kMaxN = 1ULL << 32;

/// Fixes (t, sigma, s') for a run. Everything here depends on (n, h) only,
/// which is what makes the query schedule nonadaptive.
inline Params choose_params(std::uint64_t n, unsigned h) {
    if (n == 0 || n > kMaxN) throw std::invalid_argument("choose_params: need 1 <= n <= 2^32");
    if (h < 2) throw std::invalid_argument("choose_params: need h >= 2");

    Params p;
    p.n = n;
    p.h = h;
    p.t = bertrand_prime(n, h);
    p.sigma = std::gcd(p.t, n) == 1 ? 0u : 1u;
    if (std::gcd(p.t, p.q()) != 1) throw std::logic_error("choose_params: gcd(t, n-sigma) != 1");
    p.sprime = tary_digits(p.q() - 1, p.t, h);

    p.sprime_partial.assign(h + 1, 0);
    std::uint64_t tp = 1;
    bool tp_valid = true;
    for (unsigned r = 0; r < h; ++r) {
        p.sprime_partial[r + 1] = p.sprime_partial[r];
        if (p.sprime_digit(r) != 0) {
            if (!tp_valid) throw std::logic_error("choose_params: digit above representable range");
            p.sprime_partial[r + 1] += p.sprime_digit(r) * tp;
        }
        if (tp_valid) {
            if (tp > (~0ULL) / p.t) tp_valid = false;
            else tp *= p.t;
        }
    }

    p.t_pow.resize(h);
    p.t_pow[0] = 1.0;
    for (unsigned m = 1; m < h; ++m) p.t_pow[m] = p.t_pow[m - 1] * static_cast<double>(p.t);
    return p;
}

/// h = max(2, round((eps/2) * lg n)): the depth that turns the guarantee into
/// an (eps * lg n)-approximation.
inline unsigned h_from_epsilon(std::uint64_t n, double eps) {
    if (n == 0 || eps <= 0.0) throw std::invalid_argument("h_from_epsilon: need n >= 1, eps > 0");
    const double raw = (eps / 2.0) * std::log2(static_cast<double>(n));
    const long rounded = std::lround(raw);
    return rounded < 2 ? 2u : static_cast<unsigned>(rounded);
}

} // namespace qmedian
