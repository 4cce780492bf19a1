#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "demis/analytics.hpp"
#include "demis/bitstring.hpp"
#include "demis/rng.hpp"

namespace demis {

/// Per-site bit-flip channel: p01 = P(1|0), p10 = P(0|1). The cost theory is
/// defined on [0, 0.5]; rates beyond that are rejected here and clipped (with
/// a flag) during calibration.
struct NoiseModel {
    double p01 = 0.0;
    double p10 = 0.0;

    NoiseModel() = default;
    NoiseModel(double p01_, double p10_) : p01(p01_), p10(p10_) { validate(); }

    static NoiseModel symmetric_rate(double p) { return NoiseModel(p, p); }

    bool symmetric() const { return p01 == p10; }

    void validate() const {
        if (!(p01 >= 0.0 && p01 <= 0.5) || !(p10 >= 0.0 && p10 <= 0.5))
            throw ValidationError("noise model: rates must lie in [0, 0.5], got p01=" +
                                  std::to_string(p01) + " p10=" + std::to_string(p10));
    }
};

/// Applies the channel independently per site and shot; shot s, site i draws
/// from the (seed, s, i) stream, so results are independent of scheduling.
inline std::vector<Bitstring> apply_channel(const Bitstring& ideal, const NoiseModel& model,
                                            std::uint64_t rng_seed, std::size_t shots) {
    model.validate();
    if (shots < 1) throw ValidationError("apply_channel: shots must be >= 1");
    std::vector<Bitstring> out;
    out.reserve(shots);
    for (std::size_t s = 0; s < shots; ++s) {
        Bitstring b = ideal;
        for (std::size_t i = 0; i < ideal.size(); ++i) {
            const double u = site_uniform(rng_seed, s, i);
            const double rate = ideal.get(i) ? model.p10 : model.p01;
            if (u < rate) b.flip(i);
        }
        out.push_back(std::move(b));
    }
    return out;
}

struct RateEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t flips = 0;
    std::uint64_t exposures = 0;
    bool clipped = false;  // raw estimate exceeded 0.5 and was clipped
};

struct CalibrationReport {
    std::optional<RateEstimate> p01_hat;  // absent when the ideal has no 0-sites
    std::optional<RateEstimate> p10_hat;  // absent when the ideal has no 1-sites
    double f0 = 0.0;
    double f1 = 0.0;
    double p_eff = 0.0;
    std::uint64_t shots = 0;
};

/// Unique root of H2(p_eff) = f0 H2(p01) + f1 H2(p10) in [0, 0.5], by
/// bisection to absolute tolerance 1e-12. Symmetric input returns exactly p01.
inline double effective_rate(double p01, double p10, double f0, double f1) {
    NoiseModel(p01, p10);  // domain check
    if (f0 < 0.0 || f1 < 0.0 || std::abs(f0 + f1 - 1.0) > 1e-9)
        throw ValidationError("effective_rate: need f0, f1 >= 0 with f0 + f1 = 1");
    if (p01 == p10) return p01;
    const double rhs = f0 * binary_entropy(p01) + f1 * binary_entropy(p10);
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (binary_entropy(mid) < rhs)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Second-order expansion pbar + (H2''(pbar)/H2'(pbar)) f0 f1 (dp)^2 / 2.
/// Undefined at pbar = 0.5 (H2' vanishes); callers fall back to the exact root.
inline std::optional<double> effective_rate_second_order(double p01, double p10, double f0,
                                                         double f1) {
    NoiseModel(p01, p10);
    if (f0 < 0.0 || f1 < 0.0 || std::abs(f0 + f1 - 1.0) > 1e-9)
        throw ValidationError("effective_rate_second_order: need f0, f1 >= 0 with f0 + f1 = 1");
    const double pbar = f0 * p01 + f1 * p10;
    const double dp = p01 - p10;
    if (dp == 0.0) return pbar;
    if (pbar <= 0.0 || pbar >= 0.5) return std::nullopt;
    const double h1 = std::log2((1.0 - pbar) / pbar);
    const double h2 = -1.0 / (std::numbers::ln2 * pbar * (1.0 - pbar));
    return pbar + 0.5 * (h2 / h1) * f0 * f1 * dp * dp;
}

/// Estimates (p01, p10) from (ideal, measured) pairs: flip counts over the
/// 0-sites and 1-sites of the ideal configuration, binomial standard errors.
inline CalibrationReport calibrate(const Bitstring& ideal, const std::vector<Bitstring>& shots) {
    if (shots.empty()) throw ValidationError("calibrate: need at least one shot");
    const std::size_t n = ideal.size();
    for (std::size_t s = 0; s < shots.size(); ++s)
        if (shots[s].size() != n)
            throw ValidationError("calibrate: shot " + std::to_string(s) + " has length " +
                                  std::to_string(shots[s].size()) + ", expected " +
                                  std::to_string(n));
    const std::uint64_t ones = ideal.weight();
    const std::uint64_t zeros = static_cast<std::uint64_t>(n) - ones;
    std::uint64_t flips01 = 0, flips10 = 0;
    for (const auto& shot : shots) {
        for (std::size_t i = 0; i < n; ++i) {
            const bool a = ideal.get(i), b = shot.get(i);
            if (!a && b) ++flips01;
            if (a && !b) ++flips10;
        }
    }
    CalibrationReport rep;
    rep.shots = shots.size();
    rep.f0 = static_cast<double>(zeros) / static_cast<double>(n);
    rep.f1 = static_cast<double>(ones) / static_cast<double>(n);
    auto estimate = [&](std::uint64_t flips, std::uint64_t sites) -> std::optional<RateEstimate> {
        if (sites == 0) return std::nullopt;
        RateEstimate e;
        e.flips = flips;
        e.exposures = sites * shots.size();
        e.value = static_cast<double>(flips) / static_cast<double>(e.exposures);
        if (e.value > 0.5) {
            e.value = 0.5;
            e.clipped = true;
        }
        e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(e.exposures));
        return e;
    };
    rep.p01_hat = estimate(flips01, zeros);
    rep.p10_hat = estimate(flips10, ones);
    const double p01 = rep.p01_hat ? rep.p01_hat->value : 0.0;
    const double p10 = rep.p10_hat ? rep.p10_hat->value : 0.0;
    rep.p_eff = effective_rate(p01, p10, rep.f0, rep.f1);
    return rep;
}

}  // namespace demis
