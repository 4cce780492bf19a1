#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "demis/bitstring.hpp"

namespace demis {

// Error patterns are enumerated in nondecreasing Hamming weight; within a
// weight class, in colexicographic order of the set-bit index tuple. Ranks are
// 1-based: rank 1 is the all-zeros pattern. All 2^n ranks fit in uint64 for
// n <= 63, which is the supported range for rank arithmetic.

inline constexpr int kMaxRankBits = 63;

namespace detail {
inline const std::array<std::array<std::uint64_t, 64>, 64>& binomial_table() {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, 64>, 64> t{};
        for (int n = 0; n < 64; ++n) {
            t[n][0] = 1;
            for (int k = 1; k <= n; ++k)
                t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
        }
        return t;
    }();
    return table;
}
}  // namespace detail

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > kMaxRankBits)
        throw ValidationError("binomial: n > " + std::to_string(kMaxRankBits) +
                              " not supported in 64-bit rank arithmetic");
    return detail::binomial_table()[n][k];
}

/// Number of patterns of weight < w (i.e. the rank offset of weight class w).
inline std::uint64_t weight_class_offset(int n, int w) {
    std::uint64_t s = 0;
    for (int j = 0; j < w; ++j) s += binomial(n, j);
    return s;
}

/// i-th pattern (1-based) in the global (weight, colex) order.
inline Bitstring unrank_pattern(int n, std::uint64_t rank) {
    if (n < 1 || n > kMaxRankBits) throw ValidationError("unrank_pattern: n must be in [1, 63]");
    const std::uint64_t total = std::uint64_t{1} << n;
    if (rank < 1 || rank > total) throw ValidationError("unrank_pattern: rank out of range");
    int w = 0;
    std::uint64_t cum = 0;
    while (cum + binomial(n, w) < rank) {
        cum += binomial(n, w);
        ++w;
    }
    std::uint64_t r = rank - cum - 1;  // 0-based colex rank within the weight class
    Bitstring pat = Bitstring::zeros(static_cast<std::size_t>(n));
    for (int j = w; j >= 1; --j) {
        // largest c with C(c, j) <= r
        int c = j - 1;
        while (c + 1 < n && binomial(c + 1, j) <= r) ++c;
        pat.set(static_cast<std::size_t>(c), true);
        r -= binomial(c, j);
    }
    return pat;
}

/// Inverse of unrank_pattern: rank(unrank(i)) == i.
inline std::uint64_t rank_pattern(const Bitstring& pattern) {
    const int n = static_cast<int>(pattern.size());
    if (n < 1 || n > kMaxRankBits) throw ValidationError("rank_pattern: n must be in [1, 63]");
    std::uint64_t colex = 0;
    int j = 0;
    pattern.for_each_set_bit([&](std::size_t pos) {
        ++j;
        colex += binomial(static_cast<int>(pos), j);
    });
    return weight_class_offset(n, j) + colex + 1;
}

/// Streaming enumerator over the global pattern order; advance() is O(weight)
/// worst case and O(1) amortized. Works for any n (no rank arithmetic needed
/// beyond the iteration count held by the caller).
class ErrorPatternCursor {
  public:
    explicit ErrorPatternCursor(int n) : n_(n) {
        if (n < 1) throw ValidationError("ErrorPatternCursor: n must be >= 1");
    }

    int weight() const { return static_cast<int>(positions_.size()); }
    const std::vector<int>& positions() const { return positions_; }
    bool exhausted() const { return weight() > n_; }

    /// Move to the next pattern; returns false once the space is exhausted.
    bool advance() {
        const int w = weight();
        if (w > n_) return false;
        // colex successor within the weight class
        for (int j = 0; j < w; ++j) {
            int limit = (j + 1 < w) ? positions_[j + 1] : n_;
            if (positions_[j] + 1 < limit) {
                ++positions_[j];
                for (int t = 0; t < j; ++t) positions_[t] = t;
                return true;
            }
        }
        // weight class exhausted; open the next one
        positions_.resize(static_cast<std::size_t>(w) + 1);
        if (w + 1 > n_) return false;
        for (int t = 0; t <= w; ++t) positions_[t] = t;
        return true;
    }

    Bitstring pattern() const {
        Bitstring b = Bitstring::zeros(static_cast<std::size_t>(n_));
        for (int p : positions_) b.set(static_cast<std::size_t>(p), true);
        return b;
    }

  private:
    int n_;
    std::vector<int> positions_;  // ascending set-bit indices; empty = zero pattern
};

}  // namespace demis
