#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "demis/bitstring.hpp"

namespace demis {

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ValidationError("quantile: empty sample");
    if (sorted.size() == 1) return sorted.front();
    // linear interpolation between order statistics
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

inline double quantile(std::vector<double> sample, double q) {
    std::sort(sample.begin(), sample.end());
    return quantile_sorted(sample, q);
}

inline double median(std::vector<double> sample) { return quantile(std::move(sample), 0.5); }

inline double mean(const std::vector<double>& sample) {
    if (sample.empty()) throw ValidationError("mean: empty sample");
    double s = 0;
    for (double x : sample) s += x;
    return s / static_cast<double>(sample.size());
}

}  // namespace demis
