#include "greenscore/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace greenscore {
namespace {

// Counts strict inversions (v[i] > v[j] for i < j) by merge sort.
long long count_inversions(std::vector<double>& v) {
    std::vector<double> buf(v.size());
    long long inversions = 0;
    for (std::size_t width = 1; width < v.size(); width *= 2) {
        for (std::size_t lo = 0; lo + width < v.size(); lo += 2 * width) {
            std::size_t mid = lo + width;
            std::size_t hi = std::min(lo + 2 * width, v.size());
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    inversions += static_cast<long long>(mid - i);
                    buf[k++] = v[j++];
                } else {
                    buf[k++] = v[i++];
                }
            }
            while (i < mid) buf[k++] = v[i++];
            while (j < hi) buf[k++] = v[j++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      v.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inversions;
}

long long tied_pairs(const std::vector<double>& sorted) {
    long long pairs = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        long long run = static_cast<long long>(j - i);
        pairs += run * (run - 1) / 2;
        i = j;
    }
    return pairs;
}

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kFpMin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double mean_sorted(std::span<const double> v) {
    // summing in sorted order keeps equal multisets bit-identical
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

double sample_variance(std::span<const double> v, double mean) {
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size() - 1);
}

}  // namespace

KendallResult kendall_tau(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("kendall_tau: length mismatch");
    if (a.size() < 2)
        throw std::invalid_argument("kendall_tau: need at least 2 observations");

    const std::size_t n = a.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (a[i] != a[j]) return a[i] < a[j];
        return b[i] < b[j];
    });

    KendallResult r;
    r.n = n;
    const long long n0 = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;

    // tie pair counts on a and on (a, b) jointly
    long long tied_a = 0, tied_both = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && a[order[j]] == a[order[i]]) ++j;
        long long run = static_cast<long long>(j - i);
        tied_a += run * (run - 1) / 2;
        std::size_t k = i;
        while (k < j) {
            std::size_t m = k;
            while (m < j && b[order[m]] == b[order[k]]) ++m;
            long long sub = static_cast<long long>(m - k);
            tied_both += sub * (sub - 1) / 2;
            k = m;
        }
        i = j;
    }

    std::vector<double> b_seq(n);
    for (std::size_t t = 0; t < n; ++t) b_seq[t] = b[order[t]];
    long long discordant = count_inversions(b_seq);  // b_seq ends up sorted
    long long tied_b = tied_pairs(b_seq);

    long long concordant = n0 - tied_a - tied_b + tied_both - discordant;

    r.concordant = concordant;
    r.discordant = discordant;
    r.tied_a = tied_a;
    r.tied_b = tied_b;
    r.tied_both = tied_both;

    if (n0 > tied_a && n0 > tied_b) {
        double denom = std::sqrt(static_cast<double>(n0 - tied_a) *
                                 static_cast<double>(n0 - tied_b));
        r.tau_b = static_cast<double>(concordant - discordant) / denom;
        r.defined = true;
    }
    if (concordant + discordant > 0) {
        r.tau_a_untied = static_cast<double>(concordant - discordant) /
                         static_cast<double>(concordant + discordant);
        r.concordant_fraction = static_cast<double>(concordant) /
                                static_cast<double>(concordant + discordant);
        r.fraction_defined = true;
    }
    return r;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_t_test: need at least 2 observations per sample");

    WelchResult r;
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double m1 = mean_sorted(a);
    const double m2 = mean_sorted(b);
    const double v1 = sample_variance(a, m1);
    const double v2 = sample_variance(b, m2);

    r.direction = (m1 > m2) ? 1 : (m1 < m2 ? -1 : 0);

    const double se2 = v1 / n1 + v2 / n2;
    if (se2 == 0.0) {
        r.t = 0.0;
        r.dof = n1 + n2 - 2.0;
        r.p = (r.direction == 0) ? 1.0 : 0.0;
        return r;
    }
    r.t = (m1 - m2) / std::sqrt(se2);
    const double d1 = (v1 / n1) * (v1 / n1) / (n1 - 1.0);
    const double d2 = (v2 / n2) * (v2 / n2) / (n2 - 1.0);
    r.dof = se2 * se2 / (d1 + d2);
    r.p = student_t_two_sided_p(r.t, r.dof);
    return r;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                   a * std::log(x) + b * std::log(1.0 - x);
    double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    if (t == 0.0) return 1.0;
    double x = dof / (dof + t * t);
    return regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

std::vector<double> percentile_midrank(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        double below = static_cast<double>(i);
        double run = static_cast<double>(j - i);
        double pct = 100.0 * (below + 0.5 * run) / static_cast<double>(n);
        for (std::size_t k = i; k < j; ++k) out[order[k]] = pct;
        i = j;
    }
    return out;
}

std::optional<double> aligned_correlation(std::span<const double> x,
                                          std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("aligned_correlation: length mismatch");
    if (x.empty()) throw std::invalid_argument("aligned_correlation: empty input");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    double c = sxy / std::sqrt(sxx * syy);
    if (c > 1.0 && c <= 1.0 + 1e-12) c = 1.0;
    if (c < -1.0 && c >= -1.0 - 1e-12) c = -1.0;
    return c;
}

Histogram integer_histogram(std::span<const int> values, int max_value) {
    if (values.empty())
        throw std::invalid_argument("integer_histogram: empty input");
    if (max_value < 0)
        throw std::invalid_argument("integer_histogram: negative max");
    Histogram h;
    h.max_value = max_value;
    h.n = values.size();
    h.counts.assign(static_cast<std::size_t>(max_value) + 1, 0);
    for (int v : values) {
        if (v < 0 || v > max_value)
            throw std::invalid_argument("integer_histogram: value out of range");
        ++h.counts[static_cast<std::size_t>(v)];
    }
    h.density.resize(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        h.density[i] = static_cast<double>(h.counts[i]) / static_cast<double>(h.n);
    return h;
}

}  // namespace greenscore
