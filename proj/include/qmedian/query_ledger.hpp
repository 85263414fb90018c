#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qmedian/metric_space.hpp"

namespace qmedian {

namespace detail {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a_u64(std::uint64_t hash, std::uint64_t value) {
    for (int byte = 0; byte < 8; ++byte) {
        hash ^= (value >> (8 * byte)) & 0xffULL;
        hash *= kFnvPrime;
    }
    return hash;
}

} // namespace detail

/// Counting distance oracle. Every algorithm reads distances through one of
/// these; it records the ordered query stream and the set of distinct
/// unordered pairs, which is the complexity measure that matters.
///
/// Self-queries (x,x) answer 0 and are neither transcribed nor counted.
/// Single-writer: one ledger per algorithm run.
class QueryLedger {
public:
    explicit QueryLedger(const MetricSpace& metric, bool record_transcript = true)
        : metric_(&metric), record_(record_transcript) {}

    double query(std::size_t x, std::size_t y) {
        const std::size_t n = metric_->size();
        if (x >= n || y >= n) throw std::out_of_range("QueryLedger::query: index out of range");
        if (x == y) return 0.0;
        if (record_) transcript_.emplace_back(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
        hash_ = detail::fnv1a_u64(hash_, x);
        hash_ = detail::fnv1a_u64(hash_, y);
        distinct_.insert(pair_key(x, y));
        return metric_->distance(x, y);
    }

    const MetricSpace& metric() const noexcept { return *metric_; }

    /// Ordered (x,y) pairs as issued, self-queries excluded.
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& transcript() const noexcept {
        return transcript_;
    }

    std::size_t count_distinct() const noexcept { return distinct_.size(); }

    /// FNV-1a over the ordered pair stream; a cheap nonadaptivity fingerprint.
    std::uint64_t transcript_hash() const noexcept { return hash_; }

    void reserve(std::size_t expected_queries) {
        if (record_) transcript_.reserve(expected_queries);
        distinct_.reserve(expected_queries);
    }

    static std::uint64_t pair_key(std::size_t x, std::size_t y) noexcept {
        const std::uint64_t lo = x < y ? x : y;
        const std::uint64_t hi = x < y ? y : x;
        return (lo << 32) | hi;
    }

private:
    const MetricSpace* metric_;
    bool record_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> transcript_;
    std::unordered_set<std::uint64_t> distinct_;
    std::uint64_t hash_ = detail::kFnvOffset;
};

} // namespace qmedian
