#include "greenscore/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "greenscore/util.hpp"

namespace greenscore {

PercentileTable percentile_ranks(const ScoreMatrix& matrix) {
    if (matrix.records.empty())
        throw std::invalid_argument("percentile_ranks: empty score matrix");
    PercentileTable table;
    table.family = matrix.family;

    std::map<int, std::vector<std::pair<std::string, double>>> by_year;
    for (const auto& [key, record] : matrix.records)
        by_year[key.second].emplace_back(key.first, static_cast<double>(record.total));

    for (const auto& [year, entries] : by_year) {
        std::vector<double> totals;
        for (const auto& [company, total] : entries) totals.push_back(total);
        std::vector<double> pct = percentile_midrank(totals);
        for (std::size_t i = 0; i < entries.size(); ++i)
            table.values[{entries[i].first, year}] = pct[i];
    }
    return table;
}

TauReport validate_rank_consistency(const ScoreMatrix& yearly, const ScoreMatrix& master) {
    TauReport report;
    std::set<int> years;
    for (const auto& [key, record] : yearly.records) years.insert(key.second);
    for (const auto& [key, record] : master.records) years.insert(key.second);

    for (int year : years) {
        std::vector<double> a, b;
        for (const auto& [key, record] : yearly.records) {
            if (key.second != year) continue;
            auto it = master.records.find(key);
            if (it == master.records.end()) continue;
            a.push_back(static_cast<double>(record.total));
            b.push_back(static_cast<double>(it->second.total));
        }
        if (a.size() < 2) {
            report.notices.push_back("year " + std::to_string(year) +
                                     " skipped: fewer than 2 common companies");
            continue;
        }
        KendallResult k = kendall_tau(a, b);
        TauYear ty;
        ty.n_common = a.size();
        ty.tau_b = k.tau_b;
        ty.defined = k.defined;
        ty.concordant = k.concordant;
        ty.discordant = k.discordant;
        ty.tied_a = k.tied_a;
        ty.tied_b = k.tied_b;
        ty.concordant_fraction = k.concordant_fraction;
        ty.fraction_defined = k.fraction_defined;
        report.per_year[year] = ty;
    }
    return report;
}

std::optional<double> series_correlation(const ScoreSeries& x, const ScoreSeries& y) {
    std::vector<double> xv, yv;
    for (const auto& [year, value] : x.points) {
        auto it = y.points.find(year);
        if (it == y.points.end()) continue;
        xv.push_back(value);
        yv.push_back(it->second);
    }
    if (xv.size() < 3)
        throw std::invalid_argument("series_correlation: need >= 3 common years, have " +
                                    std::to_string(xv.size()));
    return aligned_correlation(xv, yv);
}

LabeledMatrix correlation_matrix(const std::vector<ScoreSeries>& series) {
    if (series.size() < 2)
        throw std::invalid_argument("correlation_matrix: need >= 2 series");
    LabeledMatrix matrix;
    for (const auto& s : series) matrix.labels.push_back(s.entity);
    matrix.cells.assign(series.size(), std::vector<std::optional<double>>(series.size()));
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = i; j < series.size(); ++j) {
            std::optional<double> c;
            try {
                if (i == j) {
                    auto self = series_correlation(series[i], series[i]);
                    c = self ? std::optional<double>(1.0) : std::nullopt;
                } else {
                    c = series_correlation(series[i], series[j]);
                }
            } catch (const std::invalid_argument&) {
                c = std::nullopt;  // too few common years: undefined cell
            }
            matrix.cells[i][j] = c;
            matrix.cells[j][i] = c;
        }
    }
    return matrix;
}

const char* grouping_name(Grouping grouping) {
    return grouping == Grouping::sector ? "sector" : "country";
}

AttributeIndex build_attribute_index(const Corpus& corpus) {
    AttributeIndex index;
    for (const auto& record : corpus.records()) {
        index.sectors[{record.company_id, record.year}].insert(record.sector);
        index.countries[{record.company_id, record.year}].insert(record.country);
    }
    return index;
}

namespace {

const std::map<std::pair<std::string, int>, std::set<std::string>>& groups_of(
    const AttributeIndex& attributes, Grouping grouping) {
    return grouping == Grouping::sector ? attributes.sectors : attributes.countries;
}

// group -> year -> per-company values (company order irrelevant for means;
// sorted for the Welch test's deterministic summation)
std::map<std::string, std::map<int, std::vector<double>>> collect_group_values(
    const std::map<std::pair<std::string, int>, double>& values,
    const AttributeIndex& attributes, Grouping grouping) {
    std::map<std::string, std::map<int, std::vector<double>>> out;
    const auto& group_map = groups_of(attributes, grouping);
    for (const auto& [key, value] : values) {
        auto it = group_map.find(key);
        std::set<std::string> groups =
            it != group_map.end() ? it->second : std::set<std::string>{"Other"};
        for (const auto& group : groups) out[group][key.second].push_back(value);
    }
    return out;
}

}  // namespace

std::vector<ScoreSeries> group_mean_series(
    const std::map<std::pair<std::string, int>, double>& values,
    const AttributeIndex& attributes, Grouping grouping, const std::string& metric) {
    std::vector<ScoreSeries> out;
    for (const auto& [group, by_year] : collect_group_values(values, attributes, grouping)) {
        ScoreSeries series;
        series.entity = group;
        series.metric = metric;
        for (const auto& [year, vals] : by_year) {
            double sum = 0.0;
            for (double v : vals) sum += v;
            series.points[year] = sum / static_cast<double>(vals.size());
        }
        out.push_back(std::move(series));
    }
    return out;
}

std::map<std::pair<std::string, int>, std::size_t> group_counts(
    const std::map<std::pair<std::string, int>, double>& values,
    const AttributeIndex& attributes, Grouping grouping) {
    std::map<std::pair<std::string, int>, std::size_t> out;
    for (const auto& [group, by_year] : collect_group_values(values, attributes, grouping))
        for (const auto& [year, vals] : by_year) out[{group, year}] = vals.size();
    return out;
}

double signed_display_value(double raw_p, int direction) {
    if (direction == 0) return 0.0;
    return direction * std::max(raw_p, 1e-3);
}

std::vector<SignedPValueSeries> yoy_signed_pvalues(
    const std::map<std::pair<std::string, int>, double>& values,
    const AttributeIndex& attributes, Grouping grouping, const std::string& metric,
    std::vector<std::string>* notices) {
    std::vector<SignedPValueSeries> out;
    for (const auto& [group, by_year] : collect_group_values(values, attributes, grouping)) {
        SignedPValueSeries series;
        series.entity = group;
        series.metric = metric;
        std::vector<int> years;
        for (const auto& [year, vals] : by_year) years.push_back(year);
        for (std::size_t i = 1; i < years.size(); ++i) {
            const auto& prev = by_year.at(years[i - 1]);
            const auto& curr = by_year.at(years[i]);
            if (prev.size() < 2 || curr.size() < 2) {
                if (notices)
                    notices->push_back(grouping_name(grouping) + std::string(" ") + group +
                                       " " + std::to_string(years[i - 1]) + "->" +
                                       std::to_string(years[i]) +
                                       " skipped: fewer than 2 companies on one side");
                continue;
            }
            WelchResult w = welch_t_test(curr, prev);
            SignedPValuePoint point;
            point.year = years[i];
            point.prev_year = years[i - 1];
            point.n_prev = prev.size();
            point.n_curr = curr.size();
            point.raw_p = w.p;
            point.direction = w.direction;
            point.signed_display = signed_display_value(w.p, w.direction);
            point.significant = w.p <= 0.05;
            series.points.push_back(point);
        }
        out.push_back(std::move(series));
    }
    return out;
}

std::vector<YearDistribution> score_distribution(const ScoreMatrix& matrix, int max_total) {
    std::map<int, std::vector<int>> totals_by_year;
    for (const auto& [key, record] : matrix.records)
        totals_by_year[key.second].push_back(record.total);
    std::vector<YearDistribution> out;
    for (const auto& [year, totals] : totals_by_year) {
        YearDistribution d;
        d.year = year;
        d.histogram = integer_histogram(totals, max_total);
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace greenscore
