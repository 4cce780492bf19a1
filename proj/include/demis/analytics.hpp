#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "demis/bitstring.hpp"

namespace demis {

using BigInt = boost::multiprecision::cpp_int;

/// Binary entropy in bits, with H2(0) = H2(1) = 0.
inline double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw ValidationError("binary_entropy: p must be in [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

namespace detail {
// Products like 25 * 0.2 land a hair above the exact integer in binary
// floating point; snap before taking ceil/floor so radii match the intended
// real-arithmetic value.
inline double snap_integer(double x) {
    double r = std::nearbyint(x);
    return std::abs(x - r) < 1e-9 ? r : x;
}
}  // namespace detail

inline long ceil_np(long n, double p) {
    return static_cast<long>(std::ceil(detail::snap_integer(static_cast<double>(n) * p)));
}

inline long floor_np(long n, double p) {
    return static_cast<long>(std::floor(detail::snap_integer(static_cast<double>(n) * p)));
}

/// Sum_{k=0}^{radius} C(n, k) as an exact integer.
inline BigInt cumulative_binomial(long n, long radius) {
    if (radius > n) radius = n;
    BigInt term = 1, sum = 1;
    for (long k = 0; k < radius; ++k) {
        term = term * (n - k) / (k + 1);
        sum += term;
    }
    return sum;
}

/// log2 of a positive big integer, accurate to ~1e-15 relative.
inline double log2_big(const BigInt& t) {
    if (t <= 0) throw ValidationError("log2_big: argument must be positive");
    const auto bits = boost::multiprecision::msb(t);
    if (bits <= 52) return std::log2(t.convert_to<double>());
    BigInt top = t >> (bits - 52);
    return static_cast<double>(bits - 52) + std::log2(top.convert_to<double>());
}

inline double log2_binomial(long n, long k) {
    return (std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
            std::lgamma(static_cast<double>(n - k) + 1)) /
           std::numbers::ln2;
}

/// log2 Sum_{k=0}^{radius} C(n,k) via log-sum-exp; usable for any n.
inline double log2_cumulative_binomial(long n, long radius) {
    if (radius > n) radius = n;
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(radius) + 1);
    for (long k = 0; k <= radius; ++k) {
        terms.push_back(log2_binomial(n, k));
        peak = std::max(peak, terms.back());
    }
    double s = 0.0;
    for (double t : terms) s += std::exp2(t - peak);
    return peak + std::log2(s);
}

/// Regularized incomplete beta I_x(a, b) by Lentz continued fraction,
/// relative tolerance 1e-13. a == 0 returns 1 (point mass limit).
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw ValidationError("ibeta: x must be in [0, 1]");
    if (a == 0.0) return 1.0;
    if (b == 0.0) return 0.0;
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    // use the fast-converging branch (strict: at the threshold both branches
    // converge, and the symmetric case a == b must not flip forever)
    if (x > (a + 1.0) / (a + b + 2.0))
        return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
    const double log_prefactor = a * std::log(x) + b * std::log1p(-x) -
                                 (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)) -
                                 std::log(a);
    constexpr double tiny = 1e-300;
    constexpr double rel_tol = 1e-13;
    double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double f = d;
    for (int m = 1; m < 500; ++m) {
        const double dm = static_cast<double>(m);
        // even step
        double num = dm * (b - dm) * x / ((a + 2 * dm - 1.0) * (a + 2 * dm));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        f *= d * c;
        // odd step
        num = -(a + dm) * (a + b + dm) * x / ((a + 2 * dm) * (a + 2 * dm + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        const double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < rel_tol) break;
    }
    return std::exp(log_prefactor) * f;
}

/// Search-volume cost model for BF-DEM: exact cumulative binomial T(n,p) with
/// radius ceil(n*p), its log, the asymptotic form, and the incomplete-beta
/// identity value for cross-checking.
struct CostModel {
    long n = 0;
    double p = 0.0;
    long radius_ceil = 0;        // ceil(n*p), the T(n,p) radius
    long radius_floor = 0;       // floor(n*p), the M_eff radius
    bool exact_available = false;
    BigInt t_exact;              // valid when exact_available
    double log2_t_exact = 0.0;   // exact when available, else log-domain sum
    double log2_t_asymptotic = std::numeric_limits<double>::quiet_NaN();
    double log2_identity = 0.0;  // n + log2 I_1/2(n-r, r+1)
};

inline double log2_asymptotic_volume(long n, double p) {
    if (p <= 0.0 || p > 0.5) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(n) * binary_entropy(p) -
           0.5 * std::log2(2.0 * std::numbers::pi * static_cast<double>(n) * p * (1.0 - p));
}

inline CostModel search_volume(long n, double p, long exact_cap = 10000) {
    if (n < 1) throw ValidationError("search_volume: n must be >= 1");
    if (p < 0.0 || p > 0.5) throw ValidationError("search_volume: p must be in [0, 0.5]");
    CostModel m;
    m.n = n;
    m.p = p;
    m.radius_ceil = ceil_np(n, p);
    m.radius_floor = floor_np(n, p);
    if (n <= exact_cap) {
        m.t_exact = cumulative_binomial(n, m.radius_ceil);
        m.exact_available = true;
        m.log2_t_exact = log2_big(m.t_exact);
    } else {
        m.log2_t_exact = log2_cumulative_binomial(n, m.radius_ceil);
    }
    m.log2_t_asymptotic = log2_asymptotic_volume(n, p);
    m.log2_identity =
        static_cast<double>(n) +
        std::log2(regularized_incomplete_beta(static_cast<double>(n - m.radius_ceil),
                                              static_cast<double>(m.radius_ceil + 1), 0.5));
    return m;
}

/// log2 of the effective search space M_eff (Hamming ball of radius floor(n*p)),
/// in the asymptotic form n*H2(p) - log2(2*pi*n*p*(1-p))/2.
inline double effective_search_space(long n, double p) {
    if (n < 1) throw ValidationError("effective_search_space: n must be >= 1");
    if (p <= 0.0 || p > 0.5)
        throw ValidationError("effective_search_space: p must be in (0, 0.5]");
    return log2_asymptotic_volume(n, p);
}

/// Pruning-aware interpolation c0^{H2(p)}.
inline double pruned_base(double p, double c0) {
    if (p < 0.0 || p > 0.5) throw ValidationError("pruned_base: p must be in [0, 0.5]");
    if (c0 <= 1.0 || c0 > 2.0) throw ValidationError("pruned_base: c0 must be in (1, 2]");
    return std::pow(c0, binary_entropy(p));
}

struct ExponentFit {
    double p = 0.0;
    double ln_c_emp = 0.0;   // OLS slope of ln(cost) on n
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::vector<std::pair<double, double>> points;  // (n, cost)

    double c_emp() const { return std::exp(ln_c_emp); }
};

/// OLS fit of ln(cost) against n. Requires >= 3 distinct n values, costs >= 1.
inline ExponentFit fit_exponent_base(const std::vector<std::pair<double, double>>& points,
                                     double p) {
    if (points.size() < 3) throw ValidationError("fit_exponent_base: need at least 3 points");
    double first_n = points.front().first;
    bool distinct = false;
    for (const auto& [n, cost] : points) {
        if (cost < 1.0)
            throw ValidationError("fit_exponent_base: costs must be >= 1");
        if (n != first_n) distinct = true;
    }
    if (!distinct) throw ValidationError("fit_exponent_base: degenerate design (all n equal)");
    const double m = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += std::log(y);
    }
    const double xb = sx / m, yb = sy / m;
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        sxx += (x - xb) * (x - xb);
        sxy += (x - xb) * (std::log(y) - yb);
    }
    ExponentFit fit;
    fit.p = p;
    fit.points = points;
    fit.ln_c_emp = sxy / sxx;
    fit.intercept = yb - fit.ln_c_emp * xb;
    double ssr = 0;
    for (const auto& [x, y] : points) {
        double r = std::log(y) - (fit.intercept + fit.ln_c_emp * x);
        ssr += r * r;
    }
    fit.stderr_slope = points.size() > 2
                           ? std::sqrt(ssr / (m - 2.0) / sxx)
                           : 0.0;
    return fit;
}

struct BreakevenReport {
    double p_eff = 0.0;
    double budget_ops = 0.0;
    long n_ratio = 0;                  // smallest N with log2 T(N,0.5) - log2 T(N,p_eff) >= log2 budget
    std::optional<long> n_literal;     // smallest N with T(N,0.5) - T(N,p_eff) >= budget (exact ints)
};

namespace detail {
inline double log2_volume_any(long n, double p, long exact_cap) {
    long r = ceil_np(n, p);
    if (n <= exact_cap) return log2_big(cumulative_binomial(n, r));
    return log2_cumulative_binomial(n, r);
}
}  // namespace detail

/// Breakeven system size under the log-domain (cost ratio) reading, with the
/// literal-difference reading reported alongside.
inline BreakevenReport breakeven_size(double p_eff, double budget_ops, long exact_cap = 2000,
                                      long n_max = 200000) {
    if (p_eff <= 0.0 || p_eff >= 0.5)
        throw ValidationError("breakeven_size: p_eff must be in (0, 0.5)");
    if (budget_ops <= 0.0) throw ValidationError("breakeven_size: budget must be > 0");
    BreakevenReport rep;
    rep.p_eff = p_eff;
    rep.budget_ops = budget_ops;
    const double target = std::log2(budget_ops);
    auto gap = [&](long n) {
        return detail::log2_volume_any(n, 0.5, exact_cap) -
               detail::log2_volume_any(n, p_eff, exact_cap);
    };
    long lo = 1, hi = 1;
    while (gap(hi) < target) {
        hi *= 2;
        if (hi > n_max)
            throw ValidationError("breakeven_size: no solution up to n_max");
    }
    while (lo < hi) {
        long mid = lo + (hi - lo) / 2;
        if (gap(mid) >= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    // radius steps make the gap locally non-monotone; settle on the smallest N
    while (lo > 1 && gap(lo - 1) >= target) --lo;
    rep.n_ratio = lo;

    // literal difference, exact integers (small N; cap the scan)
    BigInt budget_int = BigInt(budget_ops);
    for (long n = 1; n <= 4000; ++n) {
        BigInt diff = cumulative_binomial(n, ceil_np(n, 0.5)) -
                      cumulative_binomial(n, ceil_np(n, p_eff));
        if (diff >= budget_int) {
            rep.n_literal = n;
            break;
        }
    }
    return rep;
}

}  // namespace demis
