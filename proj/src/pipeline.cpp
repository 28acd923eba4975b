#include "greenscore/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include "greenscore/analytics.hpp"
#include "greenscore/csv.hpp"
#include "greenscore/hash.hpp"
#include "greenscore/llm/http_backend.hpp"
#include "greenscore/rubric_engine.hpp"
#include "greenscore/scorer.hpp"
#include "greenscore/svg.hpp"
#include "greenscore/util.hpp"

namespace greenscore {

namespace {

using Clock = std::chrono::steady_clock;

long elapsed_ms(Clock::time_point start) {
    return static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
}

std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::set<std::string> load_stopwords(const std::optional<std::filesystem::path>& path) {
    std::set<std::string> words;
    if (!path) return words;
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open stopword list: " + path->string());
    std::string line;
    while (std::getline(in, line)) {
        std::string w = trim(line);
        if (!w.empty()) words.insert(w);
    }
    return words;
}

RubricEngineOptions rubric_options(const PipelineConfig& config) {
    RubricEngineOptions options;
    options.model_id = config.backend.model_id;
    options.max_output_tokens = config.backend.max_output_tokens;
    options.max_companies = config.rubric_max_companies;
    options.max_answer_chars = config.rubric_max_answer_chars;
    options.hide_years = config.hide_years_in_rubric_prompts;
    return options;
}

ScorerOptions scorer_options(const PipelineConfig& config) {
    ScorerOptions options;
    options.model_id = config.backend.model_id;
    options.max_output_tokens = config.backend.max_output_tokens;
    options.chunk_size = config.companies_per_prompt;
    return options;
}

std::map<std::pair<std::string, int>, double> totals_map(const ScoreMatrix& matrix) {
    std::map<std::pair<std::string, int>, double> out;
    for (const auto& [key, record] : matrix.records)
        out[key] = static_cast<double>(record.total);
    return out;
}

void write_labeled_matrix_csv(std::string& content, const std::string& metric,
                              const LabeledMatrix& matrix) {
    for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
        for (std::size_t j = 0; j < matrix.labels.size(); ++j) {
            const auto& cell = matrix.cells[i][j];
            content += csv_join({metric, matrix.labels[i], matrix.labels[j],
                                 cell ? fmt_double(*cell) : std::string(),
                                 cell ? "1" : "0"});
        }
    }
}

std::vector<svg::Series> series_for_chart(const std::vector<ScoreSeries>& series,
                                          std::size_t cap = 12) {
    std::vector<svg::Series> out;
    for (const auto& s : series) {
        if (out.size() >= cap) break;
        svg::Series chart_series;
        chart_series.label = s.entity;
        for (const auto& [year, value] : s.points)
            chart_series.points.emplace_back(static_cast<double>(year), value);
        out.push_back(std::move(chart_series));
    }
    return out;
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
    std::error_code ec;
    std::filesystem::create_directories(config_.output_dir, ec);
    if (ec || !std::filesystem::is_directory(config_.output_dir))
        throw ConfigError("output directory is not writable: " +
                          config_.output_dir.string());

    if (config_.backend.kind == "mock") {
        llm::MockOptions mock_options;
        mock_options.seed = config_.backend.seed;
        mock_options.echo_scores = config_.backend.echo_scores;
        auto mock = std::make_shared<llm::MockBackend>(mock_options);
        mock_ = mock.get();
        backend_ = mock;
    } else {
        llm::HttpBackendOptions http_options;
        http_options.base_url = config_.backend.base_url;
        http_options.credential_env = config_.backend.credential_env;
        backend_ = std::make_shared<llm::HttpBackend>(http_options);
    }

    llm::GatewayOptions gateway_options;
    gateway_options.cache_dir = config_.output_dir / "cache";
    gateway_options.audit_dir = config_.output_dir / "audit";
    gateway_options.max_attempts = config_.backend.max_attempts;
    gateway_options.backoff_initial_ms = config_.backend.backoff_initial_ms;
    gateway_options.structured_max_attempts = config_.backend.structured_max_attempts;
    gateway_options.max_parallel = config_.backend.parallelism;
    gateway_options.min_request_interval_ms = config_.backend.min_request_interval_ms;
    gateway_ = std::make_unique<llm::Gateway>(backend_, gateway_options);
}

llm::Gateway& Pipeline::gateway() { return *gateway_; }
llm::MockBackend* Pipeline::mock_backend() { return mock_; }

const LoadResult& Pipeline::corpus() {
    if (!loaded_) loaded_ = load_corpus(config_.corpus_path, config_.schema);
    return *loaded_;
}

void Pipeline::note_partial(const std::string& reason) {
    partial_ = true;
    partial_reasons_.push_back(reason);
    std::clog << "[partial] " << reason << "\n";
}

int Pipeline::run_ingest() {
    auto t0 = Clock::now();
    const LoadResult& load = corpus();

    std::string rejects = csv_join({"row_number", "reason"});
    for (const auto& reject : load.rejects)
        rejects += csv_join({std::to_string(reject.row_number), reject.reason});
    atomic_write_file(config_.output_dir / "rejects.csv", rejects);

    std::string summary = csv_join({"grouping", "group", "year", "companies"});
    for (GroupBy group_by : {GroupBy::country, GroupBy::sector}) {
        ParticipationStats stats = participation_counts(load.corpus, group_by);
        const char* grouping = group_by == GroupBy::country ? "country" : "sector";
        for (const auto& [key, count] : stats.counts)
            summary += csv_join({grouping, key.first, std::to_string(key.second),
                                 std::to_string(count)});
    }
    atomic_write_file(config_.output_dir / "corpus_summary.csv", summary);

    auto stopwords = load_stopwords(config_.stopwords_path);
    WordFrequencyTable words = top_k_words(load.corpus, config_.words_k, stopwords);
    std::string wordfreq = csv_join({"country", "year", "rank", "token", "count"});
    for (const auto& [key, tokens] : words.entries) {
        for (std::size_t rank = 0; rank < tokens.size(); ++rank)
            wordfreq += csv_join({key.first, std::to_string(key.second),
                                  std::to_string(rank + 1), tokens[rank].first,
                                  std::to_string(tokens[rank].second)});
    }
    atomic_write_file(config_.output_dir / "wordfreq.csv", wordfreq);

    counts_["corpus_records"] = static_cast<long>(load.corpus.records().size());
    counts_["rows_rejected"] = static_cast<long>(load.rejects.size());
    counts_["rows_filtered"] = static_cast<long>(load.corpus.provenance().rows_filtered);
    counts_["consistent_participants"] =
        static_cast<long>(consistent_participants(load.corpus).size());
    timings_ms_["ingest"] = elapsed_ms(t0);

    std::cout << "ingest: " << load.corpus.records().size() << " records across "
              << load.corpus.years().size() << " years, " << load.rejects.size()
              << " rejected rows, " << counts_["consistent_participants"]
              << " companies present in every year\n";
    write_manifest("ingest");
    return partial_ ? kExitPartial : kExitOk;
}

int Pipeline::run_rubrics() {
    auto t0 = Clock::now();
    const LoadResult& load = corpus();
    auto slices = partition_by_year(load.corpus);
    const auto rubric_dir = config_.output_dir / "rubrics";
    RubricEngineOptions options = rubric_options(config_);

    std::vector<const YearSlice*> slice_list;
    for (const auto& [year, slice] : slices) slice_list.push_back(&slice);

    RubricSet set;
    std::mutex set_mutex;
    parallel_for(slice_list.size(), gateway_->max_parallel(), [&](std::size_t i) {
        RubricGeneration generation =
            generate_yearly_rubric(*slice_list[i], *gateway_, options);
        save_rubric_with_provenance(generation, rubric_dir);
        std::lock_guard<std::mutex> lock(set_mutex);
        set.yearly[slice_list[i]->year] = std::move(generation.rubric);
    });

    if (set.yearly.size() >= 2) {
        RubricGeneration master = aggregate_master_rubric(set, *gateway_, options);
        save_rubric_with_provenance(master, rubric_dir);
        set.master = std::move(master.rubric);
    } else {
        note_partial("master rubric skipped: fewer than 2 yearly rubrics");
    }

    counts_["yearly_rubrics"] = static_cast<long>(set.yearly.size());
    counts_["master_rubrics"] = set.master ? 1 : 0;
    timings_ms_["rubrics"] = elapsed_ms(t0);

    std::cout << "rubrics: " << set.yearly.size() << " yearly"
              << (set.master ? " + master" : " (master skipped)") << "\n";
    write_manifest("rubrics");
    return partial_ ? kExitPartial : kExitOk;
}

int Pipeline::run_score(ScoreWhich which, const std::optional<std::string>& naive_company) {
    auto t0 = Clock::now();
    const LoadResult& load = corpus();
    const auto rubric_dir = config_.output_dir / "rubrics";
    const auto scores_dir = config_.output_dir / "scores";
    ScorerOptions options = scorer_options(config_);

    auto require_rubric = [&](const std::string& rubric_id) {
        auto file = rubric_dir / (rubric_file_stem(rubric_id) + ".txt");
        if (!std::filesystem::exists(file))
            throw ConfigError("missing rubric file (run the rubrics stage first): " +
                              file.string());
        Rubric rubric = load_rubric(file, rubric_id);
        if (auto violations = validate_rubric(rubric); !violations.empty())
            throw ConfigError("rubric " + rubric_id +
                              " is structurally invalid: " + violations.front().detail);
        return rubric;
    };

    long flagged = 0;
    if (which == ScoreWhich::yearly || which == ScoreWhich::both) {
        RubricSet set;
        for (int year : load.corpus.years())
            set.yearly[year] = require_rubric("yearly:" + std::to_string(year));
        ScoreMatrix matrix = score_all_yearly(load.corpus, set, *gateway_, options);
        std::map<int, std::vector<ScoreRecord>> by_year;
        for (const auto& [key, record] : matrix.records)
            by_year[key.second].push_back(record);
        for (const auto& [year, records] : by_year) {
            write_score_csv(scores_dir / ("yearly_" + std::to_string(year) + ".csv"),
                            records, set.yearly.at(year).items.size());
            for (const auto& record : records) flagged += record.clamped ? 1 : 0;
        }
        counts_["scores_yearly"] = static_cast<long>(matrix.records.size());
    }
    if (which == ScoreWhich::master || which == ScoreWhich::both) {
        Rubric master = require_rubric("master");
        ScoreMatrix matrix = score_all_with_master(load.corpus, master, *gateway_, options);
        std::vector<ScoreRecord> records;
        for (const auto& [key, record] : matrix.records) records.push_back(record);
        write_score_csv(scores_dir / "master.csv", records, master.items.size());
        for (const auto& record : records) flagged += record.clamped ? 1 : 0;
        counts_["scores_master"] = static_cast<long>(matrix.records.size());
    }
    counts_["flagged_scores"] = flagged;
    if (flagged > 0)
        note_partial(std::to_string(flagged) + " score(s) were clamped into rubric range");

    if (naive_company) {
        std::vector<NaiveRun> runs;
        for (NaiveVariant variant :
             {NaiveVariant::plain, NaiveVariant::year_hidden, NaiveVariant::shuffled})
            runs.push_back(naive_longitudinal_score(*naive_company, load.corpus, *gateway_,
                                                    variant, config_.backend.seed, options));
        std::string naive_csv = csv_join({"method_id", "year", "score"});
        for (const auto& run : runs)
            for (const auto& [year, score] : run.series)
                naive_csv += csv_join({run.method_id, std::to_string(year), fmt_double(score)});
        atomic_write_file(config_.output_dir / "naive_runs.csv", naive_csv);

        LabeledMatrix corr = method_correlation_matrix(runs);
        std::string corr_csv = csv_join({"metric", "row", "col", "value", "defined"});
        write_labeled_matrix_csv(corr_csv, "naive_score", corr);
        atomic_write_file(config_.output_dir / "method_corr.csv", corr_csv);
    }

    timings_ms_["score"] = elapsed_ms(t0);
    std::cout << "score: yearly=" << counts_["scores_yearly"]
              << " master=" << counts_["scores_master"] << " flagged=" << flagged << "\n";
    write_manifest("score");
    return partial_ ? kExitPartial : kExitOk;
}

int Pipeline::run_analyze() {
    auto t0 = Clock::now();
    const LoadResult& load = corpus();
    const auto scores_dir = config_.output_dir / "scores";
    const auto analytics_dir = config_.output_dir / "analytics";

    ScoreMatrix yearly;
    yearly.family = "yearly";
    for (int year : load.corpus.years()) {
        auto file = scores_dir / ("yearly_" + std::to_string(year) + ".csv");
        if (!std::filesystem::exists(file))
            throw ConfigError("missing score file (run the score stage first): " +
                              file.string());
        for (auto& record : read_score_csv(file, "yearly:" + std::to_string(year)))
            yearly.records[{record.company_id, record.year}] = std::move(record);
    }
    ScoreMatrix master;
    master.family = "master";
    {
        auto file = scores_dir / "master.csv";
        if (!std::filesystem::exists(file))
            throw ConfigError("missing score file (run the score stage first): " +
                              file.string());
        for (auto& record : read_score_csv(file, "master"))
            master.records[{record.company_id, record.year}] = std::move(record);
    }
    Rubric master_rubric = load_rubric(config_.output_dir / "rubrics" / "master.txt", "master");

    // percentiles (both families)
    PercentileTable yearly_pct = percentile_ranks(yearly);
    PercentileTable master_pct = percentile_ranks(master);
    std::string pct_csv = csv_join({"family", "company_id", "year", "total", "percentile"});
    for (const PercentileTable* table : {&master_pct, &yearly_pct}) {
        const ScoreMatrix& source = table == &master_pct ? master : yearly;
        for (const auto& [key, pct] : table->values)
            pct_csv += csv_join({table->family, key.first, std::to_string(key.second),
                                 std::to_string(source.records.at(key).total),
                                 fmt_double(pct)});
    }
    atomic_write_file(analytics_dir / "percentiles.csv", pct_csv);

    // rank consistency between the two rubric families
    TauReport tau = validate_rank_consistency(yearly, master);
    for (const auto& notice : tau.notices) note_partial(notice);
    std::string tau_csv =
        csv_join({"year", "n_common", "tau_b", "defined", "concordant", "discordant",
                  "tied_a_pairs", "tied_b_pairs", "concordant_fraction", "fraction_defined"});
    for (const auto& [year, ty] : tau.per_year)
        tau_csv += csv_join({std::to_string(year), std::to_string(ty.n_common),
                             ty.defined ? fmt_double(ty.tau_b) : std::string(),
                             ty.defined ? "1" : "0", std::to_string(ty.concordant),
                             std::to_string(ty.discordant), std::to_string(ty.tied_a),
                             std::to_string(ty.tied_b),
                             ty.fraction_defined ? fmt_double(ty.concordant_fraction)
                                                 : std::string(),
                             ty.fraction_defined ? "1" : "0"});
    atomic_write_file(analytics_dir / "tau_report.csv", tau_csv);

    // group means, correlations, year-over-year significance (master family)
    AttributeIndex attributes = build_attribute_index(load.corpus);
    auto master_totals = totals_map(master);
    std::map<std::pair<std::string, int>, double> master_pct_values = master_pct.values;

    std::map<std::string, std::vector<ScoreSeries>> mean_series;  // "<grouping>:<metric>"
    std::string means_csv =
        csv_join({"grouping", "metric", "group", "year", "mean", "n_companies"});
    for (Grouping grouping : {Grouping::sector, Grouping::country}) {
        for (const auto& [metric, values] :
             std::vector<std::pair<std::string, const std::map<std::pair<std::string, int>, double>*>>{
                 {"score", &master_totals}, {"percentile", &master_pct_values}}) {
            auto series = group_mean_series(*values, attributes, grouping, metric);
            auto counts = group_counts(*values, attributes, grouping);
            for (const auto& s : series)
                for (const auto& [year, mean] : s.points)
                    means_csv += csv_join({grouping_name(grouping), metric, s.entity,
                                           std::to_string(year), fmt_double(mean),
                                           std::to_string(counts.at({s.entity, year}))});
            mean_series[std::string(grouping_name(grouping)) + ":" + metric] =
                std::move(series);
        }
    }
    atomic_write_file(analytics_dir / "means.csv", means_csv);

    for (Grouping grouping : {Grouping::sector, Grouping::country}) {
        std::string corr_csv = csv_join({"metric", "row", "col", "value", "defined"});
        for (const char* metric : {"score", "percentile"}) {
            const auto& series =
                mean_series.at(std::string(grouping_name(grouping)) + ":" + metric);
            if (series.size() < 2) {
                note_partial(std::string("correlation matrix skipped for ") +
                             grouping_name(grouping) + "/" + metric + ": fewer than 2 groups");
                continue;
            }
            write_labeled_matrix_csv(corr_csv, metric, correlation_matrix(series));
        }
        atomic_write_file(analytics_dir /
                              (std::string("corr_") + grouping_name(grouping) + ".csv"),
                          corr_csv);
    }

    std::vector<std::string> yoy_notices;
    std::string yoy_csv =
        csv_join({"grouping", "metric", "group", "year", "prev_year", "n_prev", "n_curr",
                  "raw_p", "direction", "signed_display", "significant"});
    std::map<std::string, std::vector<SignedPValueSeries>> yoy_series;
    for (Grouping grouping : {Grouping::sector, Grouping::country}) {
        for (const auto& [metric, values] :
             std::vector<std::pair<std::string, const std::map<std::pair<std::string, int>, double>*>>{
                 {"score", &master_totals}, {"percentile", &master_pct_values}}) {
            auto series =
                yoy_signed_pvalues(*values, attributes, grouping, metric, &yoy_notices);
            for (const auto& s : series)
                for (const auto& point : s.points)
                    yoy_csv += csv_join(
                        {grouping_name(grouping), metric, s.entity,
                         std::to_string(point.year), std::to_string(point.prev_year),
                         std::to_string(point.n_prev), std::to_string(point.n_curr),
                         fmt_double(point.raw_p), std::to_string(point.direction),
                         fmt_double(point.signed_display), point.significant ? "1" : "0"});
            yoy_series[std::string(grouping_name(grouping)) + ":" + metric] =
                std::move(series);
        }
    }
    for (const auto& notice : yoy_notices) note_partial(notice);
    atomic_write_file(analytics_dir / "yoy_pvalues.csv", yoy_csv);

    auto distributions = score_distribution(master, master_rubric.max_total());
    std::string dist_csv = csv_join({"year", "total", "count", "density"});
    for (const auto& d : distributions)
        for (int total = 0; total <= d.histogram.max_value; ++total)
            dist_csv += csv_join(
                {std::to_string(d.year), std::to_string(total),
                 std::to_string(d.histogram.counts[static_cast<std::size_t>(total)]),
                 fmt_double(d.histogram.density[static_cast<std::size_t>(total)])});
    atomic_write_file(analytics_dir / "distributions.csv", dist_csv);

    if (config_.emit_svg) {
        const auto svg_dir = analytics_dir / "svg";

        // percentile trajectories for the first few companies
        std::map<std::string, ScoreSeries> company_pct;
        for (const auto& [key, pct] : master_pct.values) {
            auto& s = company_pct[key.first];
            s.entity = key.first;
            s.points[key.second] = pct;
        }
        std::vector<ScoreSeries> company_series;
        for (const auto& [company, s] : company_pct) {
            if (company_series.size() >= 8) break;
            company_series.push_back(s);
        }
        svg::LineChartOptions pct_options;
        pct_options.title = "Within-year percentile by company (master rubric)";
        pct_options.x_label = "year";
        pct_options.y_label = "percentile";
        pct_options.y_range = {{0.0, 100.0}};
        atomic_write_file(svg_dir / "percentiles.svg",
                          svg::line_chart(series_for_chart(company_series), pct_options));

        std::vector<std::string> tau_labels;
        std::vector<double> tau_values;
        for (const auto& [year, ty] : tau.per_year) {
            if (!ty.defined) continue;
            tau_labels.push_back(std::to_string(year));
            tau_values.push_back(ty.tau_b);
        }
        atomic_write_file(svg_dir / "tau_report.svg",
                          svg::bar_chart("Yearly vs master rank agreement (Kendall tau-b)",
                                         tau_labels, tau_values, "tau_b"));

        for (Grouping grouping : {Grouping::sector, Grouping::country}) {
            const auto& series =
                mean_series.at(std::string(grouping_name(grouping)) + ":score");
            if (series.size() >= 2) {
                LabeledMatrix m = correlation_matrix(series);
                atomic_write_file(
                    svg_dir / (std::string("corr_") + grouping_name(grouping) + ".svg"),
                    svg::heatmap(std::string("Mean-score correlation between ") +
                                     grouping_name(grouping) + "s",
                                 m.labels, m.cells));
            }
            svg::LineChartOptions mean_options;
            mean_options.title =
                std::string("Mean master-rubric score by ") + grouping_name(grouping);
            mean_options.x_label = "year";
            mean_options.y_label = "mean score";
            atomic_write_file(
                svg_dir / (std::string("means_") + grouping_name(grouping) + ".svg"),
                svg::line_chart(series_for_chart(series), mean_options));
        }

        std::vector<svg::Series> yoy_chart;
        for (const auto& s : yoy_series.at("sector:score")) {
            svg::Series cs;
            cs.label = s.entity;
            for (const auto& point : s.points)
                cs.points.emplace_back(static_cast<double>(point.year), point.signed_display);
            yoy_chart.push_back(std::move(cs));
        }
        svg::LineChartOptions yoy_options;
        yoy_options.title = "Year-over-year signed p-values (sector mean score)";
        yoy_options.x_label = "year";
        yoy_options.y_label = "signed p";
        yoy_options.y_range = {{-1.0, 1.0}};
        yoy_options.band_half_width = 0.05;
        atomic_write_file(svg_dir / "yoy_pvalues.svg",
                          svg::line_chart(yoy_chart, yoy_options));

        std::vector<svg::Series> dist_chart;
        for (const auto& d : distributions) {
            svg::Series cs;
            cs.label = std::to_string(d.year);
            for (int total = 0; total <= d.histogram.max_value; ++total)
                cs.points.emplace_back(
                    static_cast<double>(total),
                    d.histogram.density[static_cast<std::size_t>(total)]);
            dist_chart.push_back(std::move(cs));
        }
        svg::LineChartOptions dist_options;
        dist_options.title = "Master-rubric total score density by year";
        dist_options.x_label = "total score";
        dist_options.y_label = "density";
        atomic_write_file(svg_dir / "distributions.svg",
                          svg::line_chart(dist_chart, dist_options));
    }

    counts_["tau_years"] = static_cast<long>(tau.per_year.size());
    timings_ms_["analyze"] = elapsed_ms(t0);
    std::cout << "analyze: " << tau.per_year.size() << " tau years, partial="
              << (partial_ ? "yes" : "no") << "\n";
    write_manifest("analyze");
    return partial_ ? kExitPartial : kExitOk;
}

int Pipeline::run_all(const std::optional<std::string>& naive_company) {
    int worst = kExitOk;
    worst = std::max(worst, run_ingest());
    worst = std::max(worst, run_rubrics());
    worst = std::max(worst, run_score(ScoreWhich::both, naive_company));
    worst = std::max(worst, run_analyze());
    write_manifest("run");
    return worst;
}

void Pipeline::write_manifest(const std::string& command) {
    nlohmann::json files = nlohmann::json::array();
    std::vector<std::string> paths;
    for (auto it = std::filesystem::recursive_directory_iterator(config_.output_dir);
         it != std::filesystem::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        auto rel = std::filesystem::relative(it->path(), config_.output_dir).string();
        if (rel == "manifest.json" || rel.find(".tmp") != std::string::npos) continue;
        paths.push_back(rel);
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) files.push_back(p);

    nlohmann::json counts;
    for (const auto& [key, value] : counts_) counts[key] = value;
    counts["cache_hits"] = gateway_->cache_hits();
    counts["live_calls"] = gateway_->live_calls();
    counts["coalesced_joins"] = gateway_->coalesced_joins();

    nlohmann::json timings;
    for (const auto& [key, value] : timings_ms_) timings[key] = value;

    nlohmann::json manifest = {
        {"command", command},
        {"config_hash", config_hash(config_)},
        {"generated_at", now_iso8601()},
        {"weighting", "equal-company"},
        {"counts", counts},
        {"timings_ms", timings},
        {"partial_reasons", partial_reasons_},
        {"files", files},
    };
    if (loaded_) {
        const CorpusProvenance& prov = loaded_->corpus.provenance();
        manifest["corpus"] = {{"path", prov.source_path},
                              {"rows_total", prov.rows_total},
                              {"rows_accepted", prov.rows_accepted},
                              {"rows_rejected", prov.rows_rejected},
                              {"rows_filtered", prov.rows_filtered},
                              {"loaded_at", prov.loaded_at}};
    }
    std::vector<std::string> rubric_ids;
    auto rubric_dir = config_.output_dir / "rubrics";
    if (std::filesystem::is_directory(rubric_dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(rubric_dir)) {
            auto name = entry.path().filename().string();
            if (entry.path().extension() == ".txt")
                rubric_ids.push_back(name.substr(0, name.size() - 4));
        }
        std::sort(rubric_ids.begin(), rubric_ids.end());
    }
    manifest["rubric_ids"] = rubric_ids;

    atomic_write_file(config_.output_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace greenscore
