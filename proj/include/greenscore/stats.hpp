#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace greenscore {

/// Tie-aware Kendall rank correlation between two equal-length vectors.
///
/// tau_b = (concordant - discordant) / sqrt((n0 - tied_a)(n0 - tied_b))
/// with n0 = n(n-1)/2 and tied_a/tied_b the pair counts tied on each side.
/// `defined` is false when either side is fully tied (zero denominator).
struct KendallResult {
    double tau_b = 0.0;
    bool defined = false;
    std::size_t n = 0;
    long long concordant = 0;
    long long discordant = 0;
    long long tied_a = 0;       // pairs tied on a (including both-tied)
    long long tied_b = 0;       // pairs tied on b (including both-tied)
    long long tied_both = 0;    // pairs tied on both
    /// tau on untied pairs only: (C - D) / (C + D). NaN-free: check
    /// fraction_defined before use.
    double tau_a_untied = 0.0;
    /// concordant / (concordant + discordant)
    double concordant_fraction = 0.0;
    bool fraction_defined = false;
};

/// O(n log n) merge-sort formulation; throws std::invalid_argument when the
/// inputs differ in length or have fewer than 2 elements.
KendallResult kendall_tau(std::span<const double> a, std::span<const double> b);

/// Two-sided Welch two-sample t-test for independent samples with (possibly)
/// unequal variances.
struct WelchResult {
    double t = 0.0;
    double dof = 0.0;
    double p = 1.0;
    int direction = 0;  // sign of mean(a) - mean(b); 0 when means are equal
};

/// Requires at least 2 observations on each side. Degenerate zero-variance
/// inputs resolve to p=1 (equal means) or p=0 (different means).
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Regularized incomplete beta function I_x(a, b) via continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value for a Student-t statistic with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

/// Midrank percentiles: 100 * (#smaller + 0.5 * #equal) / n for each value.
/// Tied values share one percentile; a single value maps to 50.
std::vector<double> percentile_midrank(std::span<const double> values);

/// Pearson-style correlation of two aligned series:
///   sum[(x - <x>)(y - <y>)] / sqrt(sum[(x - <x>)^2] * sum[(y - <y>)^2])
/// Returns nullopt when either side has zero variance. Results are clamped
/// to [-1, 1] only against rounding (|c| <= 1 + 1e-12).
std::optional<double> aligned_correlation(std::span<const double> x,
                                          std::span<const double> y);

/// Integer-bin histogram over [0, max_value] with unit bins.
struct Histogram {
    int max_value = 0;
    std::size_t n = 0;
    std::vector<long long> counts;   // index = value
    std::vector<double> density;     // count / n (unit bin width)
};

Histogram integer_histogram(std::span<const int> values, int max_value);

}  // namespace greenscore
