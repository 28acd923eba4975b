#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "greenscore/corpus.hpp"
#include "greenscore/scorer.hpp"
#include "greenscore/stats.hpp"

namespace greenscore {

/// Within-year midrank percentiles of total scores.
struct PercentileTable {
    std::string family;
    std::map<std::pair<std::string, int>, double> values;  // (company, year) -> [0,100]
};

PercentileTable percentile_ranks(const ScoreMatrix& matrix);

/// Per-year rank agreement between yearly-rubric and master-rubric totals.
struct TauYear {
    std::size_t n_common = 0;
    double tau_b = 0.0;
    bool defined = false;
    long long concordant = 0;
    long long discordant = 0;
    long long tied_a = 0;
    long long tied_b = 0;
    /// concordant / (concordant + discordant) over untied pairs; equals
    /// (1 + tau_a) / 2, the rank-preservation share.
    double concordant_fraction = 0.0;
    bool fraction_defined = false;
};

struct TauReport {
    std::map<int, TauYear> per_year;
    std::vector<std::string> notices;  // skipped years etc.
};

/// Compares the two matrices year by year over common companies; years with
/// fewer than 2 common companies are skipped with a notice.
TauReport validate_rank_consistency(const ScoreMatrix& yearly, const ScoreMatrix& master);

/// Time-indexed metric series for one entity (company, sector or country).
struct ScoreSeries {
    std::string entity;
    std::string metric;  // "score" or "percentile"
    std::map<int, double> points;
};

/// Correlation of two series over their common years. Throws
/// std::invalid_argument below 3 common years; returns nullopt when either
/// side has zero variance over the window (undefined, distinct from 0).
std::optional<double> series_correlation(const ScoreSeries& x, const ScoreSeries& y);

/// Pairwise series correlations. Cell-level undefined (zero variance or
/// fewer than 3 common years) is data, not an error.
LabeledMatrix correlation_matrix(const std::vector<ScoreSeries>& series);

enum class Grouping { sector, country };
const char* grouping_name(Grouping grouping);

/// (company, year) -> distinct group labels; companies reporting under two
/// sectors contribute to both groups.
struct AttributeIndex {
    std::map<std::pair<std::string, int>, std::set<std::string>> sectors;
    std::map<std::pair<std::string, int>, std::set<std::string>> countries;
};

AttributeIndex build_attribute_index(const Corpus& corpus);

/// Unweighted per-group per-year mean of `values` over companies present
/// that year.
std::vector<ScoreSeries> group_mean_series(
    const std::map<std::pair<std::string, int>, double>& values,
    const AttributeIndex& attributes, Grouping grouping, const std::string& metric);

/// Companies contributing to each (group, year) mean.
std::map<std::pair<std::string, int>, std::size_t> group_counts(
    const std::map<std::pair<std::string, int>, double>& values,
    const AttributeIndex& attributes, Grouping grouping);

/// Year-over-year Welch test point for one group.
struct SignedPValuePoint {
    int year = 0;       // the later year of the pair
    int prev_year = 0;
    std::size_t n_prev = 0;
    std::size_t n_curr = 0;
    double raw_p = 1.0;
    int direction = 0;           // sign of mean(year) - mean(prev_year)
    double signed_display = 0.0; // direction * max(raw_p, 1e-3); 0 when direction 0
    bool significant = false;    // raw_p <= 0.05
};

struct SignedPValueSeries {
    std::string entity;
    std::string metric;
    std::vector<SignedPValuePoint> points;
};

/// Two-sided Welch two-sample t-test between consecutive years of per-company
/// values, per group. Pairs where either year has < 2 companies are skipped
/// with a notice. The displayed value is floor-cropped at 1e-3 and signed by
/// the direction of the mean change.
std::vector<SignedPValueSeries> yoy_signed_pvalues(
    const std::map<std::pair<std::string, int>, double>& values,
    const AttributeIndex& attributes, Grouping grouping, const std::string& metric,
    std::vector<std::string>* notices);

double signed_display_value(double raw_p, int direction);

/// Integer-bin histogram + density of totals, per year.
struct YearDistribution {
    int year = 0;
    Histogram histogram;
};

std::vector<YearDistribution> score_distribution(const ScoreMatrix& matrix, int max_total);

}  // namespace greenscore
