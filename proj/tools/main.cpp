#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "greenscore/pipeline.hpp"
#include "greenscore/util.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string years;
    std::string backend;
    bool svg = false;
    long words_k = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "pipeline config file (JSON)")
        ->required();
    cmd->add_option("--years", args.years, "year window override, e.g. 2010..2012");
    cmd->add_option("--backend", args.backend, "backend override: mock[:SEED] or live");
    cmd->add_flag("--svg", args.svg, "emit SVG charts alongside analytics tables");
    cmd->add_option("--words-k", args.words_k, "tokens per (country, year) in wordfreq");
}

greenscore::PipelineConfig make_config(const CommonArgs& args) {
    auto config = greenscore::load_pipeline_config(args.config_path);
    if (!args.years.empty()) greenscore::apply_years_override(config, args.years);
    if (!args.backend.empty()) greenscore::apply_backend_override(config, args.backend);
    if (args.svg) config.emit_svg = true;
    if (args.words_k > 0) config.words_k = static_cast<std::size_t>(args.words_k);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Climate disclosure scoring and benchmarking pipeline"};
    app.require_subcommand(1);

    CommonArgs ingest_args, rubrics_args, score_args, analyze_args, run_args;
    std::string score_which = "both";
    std::string score_naive, run_naive;

    auto* ingest = app.add_subcommand("ingest", "load corpus, participation and word stats");
    add_common(ingest, ingest_args);

    auto* rubrics = app.add_subcommand("rubrics", "induce yearly rubrics and the master rubric");
    add_common(rubrics, rubrics_args);

    auto* score = app.add_subcommand("score", "score company-years under the rubrics");
    add_common(score, score_args);
    score->add_option("--rubric", score_which, "which rubric family: yearly|master|both")
        ->check(CLI::IsMember({"yearly", "master", "both"}));
    score->add_option("--naive", score_naive,
                      "also run the whole-history baselines for this company");

    auto* analyze = app.add_subcommand("analyze", "emit the analytics bundle");
    add_common(analyze, analyze_args);

    auto* run = app.add_subcommand("run", "all stages in order");
    add_common(run, run_args);
    run->add_option("--naive", run_naive,
                    "also run the whole-history baselines for this company");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            greenscore::Pipeline pipeline(make_config(ingest_args));
            return pipeline.run_ingest();
        }
        if (rubrics->parsed()) {
            greenscore::Pipeline pipeline(make_config(rubrics_args));
            return pipeline.run_rubrics();
        }
        if (score->parsed()) {
            greenscore::Pipeline pipeline(make_config(score_args));
            greenscore::ScoreWhich which = greenscore::ScoreWhich::both;
            if (score_which == "yearly") which = greenscore::ScoreWhich::yearly;
            if (score_which == "master") which = greenscore::ScoreWhich::master;
            std::optional<std::string> naive;
            if (!score_naive.empty()) naive = score_naive;
            return pipeline.run_score(which, naive);
        }
        if (analyze->parsed()) {
            greenscore::Pipeline pipeline(make_config(analyze_args));
            return pipeline.run_analyze();
        }
        if (run->parsed()) {
            greenscore::Pipeline pipeline(make_config(run_args));
            std::optional<std::string> naive;
            if (!run_naive.empty()) naive = run_naive;
            return pipeline.run_all(naive);
        }
    } catch (const greenscore::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return greenscore::kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return greenscore::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return greenscore::kExitPartial;
    }
    return greenscore::kExitOk;
}
