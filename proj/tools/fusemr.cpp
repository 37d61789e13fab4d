// fusemr — multi-reference expansion and evaluation for sentence fusion.
//
// Subcommands:
//   augment   expand a fusion corpus into a multi-reference file
//   eval      score predictions with Exact / SARI / MR-Exact / MR-SARI
//   stats     marker and phenomenon distributions of an augmented file
//   probs     compare two models' reference-set probability distributions
//   diagnose  classify failed predictions by token diff

#include <CLI11.hpp>

#include "fusemr/cli.hpp"

namespace {

void add_common(CLI::App* cmd, fusemr::RunConfig& cfg) {
    cmd->set_config("--config", "", "Config file with key=value lines (flags win)");
    cmd->add_option("--dicts", cfg.dicts_path, "Dictionary override JSON file")
        ->envname("FUSEMR_DICTS");
    cmd->add_option("--threads", cfg.threads, "Worker threads (default: available parallelism)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--strict", cfg.strict, "Abort on the first malformed row");
    cmd->add_option("--columns", cfg.columns,
                    "TSV column layout: preset (discofuse, augmented) or key=index list");
    cmd->add_option("--format", cfg.format, "Corpus file format: tsv or jsonl")
        ->check(CLI::IsMember({"tsv", "jsonl"}));
}

}  // namespace

int main(int argc, char** argv) {
    fusemr::RunConfig cfg;
    CLI::App app{"multi-reference sentence fusion toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file with key=value lines (flags win)");

    auto* augment = app.add_subcommand("augment", "Expand a corpus into a multi-reference file");
    augment->add_option("--input", cfg.input, "Input corpus")->required();
    augment->add_option("--output", cfg.output, "Output file (default: stdout)");
    augment->add_option("--max-variants", cfg.max_variants,
                        "Cap generated variants per example (0 = unlimited)");
    augment->add_flag("--seed-original,!--no-seed-original", cfg.seed_original,
                      "Include the original gold as row 0 of each group (default: on)");
    add_common(augment, cfg);

    auto* eval = app.add_subcommand("eval", "Score predictions against multi-reference sets");
    eval->add_option("--corpus", cfg.corpus, "Corpus file")->required();
    eval->add_option("--variants", cfg.variants,
                     "Augmented file, or \"generate\" to run the rewrite engine inline");
    eval->add_option("--predictions", cfg.predictions, "Predictions JSONL")->required();
    eval->add_option("--report", cfg.report, "Report format")
        ->check(CLI::IsMember({"pretty", "json", "tsv"}));
    eval->add_option("--output", cfg.output, "Report destination (default: stdout)");
    eval->add_option("--max-variants", cfg.max_variants,
                     "Cap generated variants per example (0 = unlimited)");
    eval->add_flag("--ignore-case", cfg.ignore_case, "Case-fold both sides of every comparison");
    add_common(eval, cfg);

    auto* stats = app.add_subcommand("stats", "Distributions over an augmented file");
    stats->add_option("--input", cfg.input, "Augmented file")->required();
    stats->add_option("--output", cfg.output, "Output file (default: stdout)");
    stats->add_option("--top-k", cfg.top_k, "Rows per table");
    stats->add_option("--by", cfg.stats_by, "Table selection: marker, phenomenon or both")
        ->check(CLI::IsMember({"marker", "phenomenon", "both"}));
    add_common(stats, cfg);

    auto* probs = app.add_subcommand("probs", "Compare two models' variant probabilities");
    probs->add_option("--model-a,-a", cfg.probs_a, "Model A predictions JSONL")->required();
    probs->add_option("--model-b,-b", cfg.probs_b, "Model B predictions JSONL")->required();
    probs->add_option("--report", cfg.report, "Report format")
        ->check(CLI::IsMember({"pretty", "json"}));
    probs->add_option("--output", cfg.output, "Report destination (default: stdout)");
    add_common(probs, cfg);

    auto* diagnose = app.add_subcommand("diagnose", "Classify failed predictions");
    diagnose->add_option("--corpus", cfg.corpus, "Corpus file")->required();
    diagnose->add_option("--variants", cfg.variants,
                         "Augmented file, or \"generate\" (default)");
    diagnose->add_option("--predictions", cfg.predictions, "Predictions JSONL")->required();
    diagnose->add_option("--output", cfg.output, "Per-example TSV (default: stdout)");
    diagnose->add_option("--max-variants", cfg.max_variants,
                         "Cap generated variants per example (0 = unlimited)");
    diagnose->add_flag("--ignore-case", cfg.ignore_case,
                       "Case-fold both sides of every comparison");
    add_common(diagnose, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return fusemr::kExitUsage;
    }

    if (augment->parsed()) cfg.command = fusemr::RunConfig::Command::Augment;
    else if (eval->parsed()) cfg.command = fusemr::RunConfig::Command::Eval;
    else if (stats->parsed()) cfg.command = fusemr::RunConfig::Command::Stats;
    else if (probs->parsed()) cfg.command = fusemr::RunConfig::Command::Probs;
    else cfg.command = fusemr::RunConfig::Command::Diagnose;

    return fusemr::run(cfg);
}
