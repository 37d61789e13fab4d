#pragma once

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusemr/analysis.hpp"
#include "fusemr/clusters.hpp"
#include "fusemr/corpus.hpp"
#include "fusemr/metrics.hpp"
#include "fusemr/rewrite.hpp"
#include "fusemr/tokens.hpp"

namespace fusemr {

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
    enum class Command { Augment, Eval, Stats, Probs, Diagnose };

    Command command = Command::Augment;
    std::string input;        // augment/stats corpus or augmented file
    std::string output;       // output path; empty or "-" means stdout
    std::string corpus;       // eval/diagnose corpus
    std::string variants;     // "generate" or an augmented file path
    std::string predictions;  // predictions JSONL
    std::string probs_a;      // probs model A
    std::string probs_b;      // probs model B
    std::string format = "tsv";
    std::string report = "pretty";
    std::string columns;      // column map spec for TSV corpora
    std::string dicts_path;   // dictionary override JSON
    std::string stats_by = "both";
    bool ignore_case = false;
    bool strict = false;
    bool seed_original = true;
    std::size_t top_k = 20;
    std::size_t max_variants = 0;  // 0 = unlimited
    unsigned threads = 0;          // 0 = available parallelism

    std::size_t variant_cap() const {
        return max_variants == 0 ? kUnlimitedVariants : max_variants;
    }
    unsigned effective_threads() const {
        if (threads > 0) return threads;
        unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1;
    }
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

namespace cli_detail {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Output file with commit-on-success semantics
// ---------------------------------------------------------------------------

/// Writes to stdout when the path is empty or "-"; otherwise writes to a
/// temporary file that replaces the target only on commit().
class OutputFile {
  public:
    explicit OutputFile(const std::string& path) : path_(path) {
        if (is_stdout()) return;
        tmp_ = path + ".tmp." + std::to_string(::getpid());
        file_.open(tmp_, std::ios::binary);
        if (!file_) throw std::runtime_error("cannot write to " + tmp_);
    }

    ~OutputFile() {
        if (!is_stdout() && !committed_) {
            file_.close();
            std::error_code ec;
            std::filesystem::remove(tmp_, ec);
        }
    }

    std::ostream& stream() { return is_stdout() ? std::cout : file_; }

    void commit() {
        if (is_stdout()) {
            std::cout.flush();
            return;
        }
        file_.close();
        if (!file_.good() && file_.bad()) throw std::runtime_error("write failed: " + tmp_);
        std::filesystem::rename(tmp_, path_);
        committed_ = true;
    }

  private:
    bool is_stdout() const { return path_.empty() || path_ == "-"; }

    std::string path_;
    std::string tmp_;
    std::ofstream file_;
    bool committed_ = false;
};

inline void require_readable(const std::string& path, const char* what) {
    if (path.empty()) throw UsageError(std::string("missing required path: ") + what);
    std::ifstream probe(path);
    if (!probe) throw std::runtime_error(std::string("cannot open ") + what + ": " + path);
}

inline ConnectiveDictionaries load_dicts(const RunConfig& cfg) {
    if (!cfg.dicts_path.empty()) return ConnectiveDictionaries::load_json(cfg.dicts_path);
    return ConnectiveDictionaries::builtin();
}

inline ErrorLog make_log(const RunConfig& cfg) {
    ErrorLog log(cfg.strict);
    log.set_callback([](const RowError& e, bool warning) {
        std::cerr << (warning ? "warning" : "error");
        if (e.line > 0) std::cerr << " (line " << e.line << ")";
        if (!warning) std::cerr << " [" << row_error_name(e.kind) << "]";
        std::cerr << ": " << e.detail << "\n";
    });
    return log;
}

/// Expands a chunk of examples in parallel; results are indexed so output
/// order never depends on the thread count.
inline std::vector<VariantSet> expand_chunk(const std::vector<FusionExample>& chunk,
                                            const ConnectiveDictionaries& dicts,
                                            std::size_t cap, unsigned threads) {
    std::vector<VariantSet> results(chunk.size());
    if (threads <= 1 || chunk.size() < 2) {
        for (std::size_t i = 0; i < chunk.size(); ++i)
            results[i] = expand_variants(chunk[i], dicts, cap);
        return results;
    }
    const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(chunk.size()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < chunk.size(); i += workers)
                results[i] = expand_variants(chunk[i], dicts, cap);
        });
    for (auto& t : pool) t.join();
    return results;
}

constexpr std::size_t kChunkRows = 4096;

// ---------------------------------------------------------------------------
// augment
// ---------------------------------------------------------------------------

inline int run_augment(const RunConfig& cfg) {
    require_readable(cfg.input, "--input");
    const auto dicts = load_dicts(cfg);
    const auto format = parse_format(cfg.format);
    const auto columns = ColumnMap::parse(cfg.columns);
    ErrorLog log = make_log(cfg);

    DatasetReader reader(cfg.input, format, log, columns);
    OutputFile out(cfg.output);
    AugmentedWriter writer(out.stream(), format);

    std::size_t examples = 0;
    std::vector<FusionExample> chunk;
    chunk.reserve(kChunkRows);
    bool done = false;
    while (!done) {
        chunk.clear();
        while (chunk.size() < kChunkRows) {
            auto ex = reader.next();
            if (!ex) {
                done = true;
                break;
            }
            chunk.push_back(std::move(*ex));
        }
        auto sets = expand_chunk(chunk, dicts, cfg.variant_cap(), cfg.effective_threads());
        for (const auto& set : sets) write_variant_set(writer, set, cfg.seed_original);
        examples += chunk.size();
    }
    out.commit();
    std::cerr << "augmented " << examples << " examples into " << writer.rows_written()
              << " rows (" << log.errors().size() << " bad rows skipped)\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// corpus + variants loading shared by eval and diagnose
// ---------------------------------------------------------------------------

inline bool use_generated_variants(const RunConfig& cfg) {
    return cfg.variants.empty() || equal_folded(cfg.variants, "generate");
}

/// Streams (example, variants) pairs either by running the rewrite engine
/// inline or by joining a pre-built augmented file to the corpus by id.
class VariantSource {
  public:
    VariantSource(const RunConfig& cfg, const ConnectiveDictionaries& dicts, ErrorLog& log)
        : cfg_(cfg), dicts_(dicts), log_(log) {
        reader_ = std::make_unique<DatasetReader>(cfg.corpus, parse_format(cfg.format), log,
                                                  ColumnMap::parse(cfg.columns));
        if (!use_generated_variants(cfg))
            aug_ = std::make_unique<AugmentedReader>(cfg.variants, parse_format(cfg.format), log);
    }

    std::optional<VariantSet> next() {
        auto ex = reader_->next();
        if (!ex) return std::nullopt;
        if (!aug_) return expand_variants(*ex, dicts_, cfg_.variant_cap());

        while (true) {
            auto group = aug_->next_group();
            if (!group)
                throw std::runtime_error("variants file ended before corpus (no group for id \"" +
                                         ex->id + "\")");
            if (group->front().id != ex->id) {
                log_.warn(0, "variants group \"" + group->front().id +
                                 "\" has no corpus row at this position; skipped");
                continue;
            }
            VariantSet set = group_to_variant_set(*group);
            set.example = std::move(*ex);  // corpus stays authoritative for the example
            return set;
        }
    }

  private:
    const RunConfig& cfg_;
    const ConnectiveDictionaries& dicts_;
    ErrorLog& log_;
    std::unique_ptr<DatasetReader> reader_;
    std::unique_ptr<AugmentedReader> aug_;
};

inline std::unordered_map<std::string, PredictionRecord> load_predictions(const RunConfig& cfg,
                                                                          ErrorLog& log) {
    PredictionReader reader(cfg.predictions, log);
    std::unordered_map<std::string, PredictionRecord> map;
    while (auto rec = reader.next()) {
        auto [it, inserted] = map.emplace(rec->id, std::move(*rec));
        if (!inserted) log.warn(0, "duplicate prediction id \"" + it->first + "\"; keeping the first");
    }
    return map;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

inline void render_eval_pretty(std::ostream& os, const EvalReport& r) {
    auto pct = [](double v) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(1) << 100.0 * v;
        return s.str();
    };
    os << "examples  " << r.n_examples << "\n"
       << "exact     " << pct(r.exact) << "\n"
       << "sari      " << pct(r.sari) << "\n"
       << "mr-exact  " << pct(r.mr_exact) << "\n"
       << "mr-sari   " << pct(r.mr_sari) << "\n";
}

inline void render_eval_json(std::ostream& os, const EvalReport& r) {
    nlohmann::ordered_json doc;
    doc["n_examples"] = r.n_examples;
    doc["exact"] = r.exact;
    doc["sari"] = r.sari;
    doc["mr_exact"] = r.mr_exact;
    doc["mr_sari"] = r.mr_sari;
    auto& rows = doc["per_example"] = nlohmann::ordered_json::array();
    for (const auto& e : r.per_example) {
        nlohmann::ordered_json row;
        row["id"] = e.id;
        row["exact"] = e.exact;
        row["sari"] = e.sari;
        row["mr_exact"] = e.mr_exact;
        row["mr_sari"] = e.mr_sari;
        row["best_variant_index"] = e.best_variant_index;
        rows.push_back(std::move(row));
    }
    os << doc.dump(2) << "\n";
}

inline void render_eval_tsv(std::ostream& os, const EvalReport& r) {
    os << "# n_examples=" << r.n_examples << std::fixed << std::setprecision(6)
       << " exact=" << r.exact << " sari=" << r.sari << " mr_exact=" << r.mr_exact
       << " mr_sari=" << r.mr_sari << "\n";
    os << "id\texact\tsari\tmr_exact\tmr_sari\tbest_variant_index\n";
    for (const auto& e : r.per_example)
        os << e.id << '\t' << e.exact << '\t' << e.sari << '\t' << e.mr_exact << '\t'
           << e.mr_sari << '\t' << e.best_variant_index << "\n";
}

inline int run_eval(const RunConfig& cfg) {
    require_readable(cfg.corpus, "--corpus");
    require_readable(cfg.predictions, "--predictions");
    if (!use_generated_variants(cfg)) require_readable(cfg.variants, "--variants");
    if (cfg.report != "pretty" && cfg.report != "json" && cfg.report != "tsv")
        throw UsageError("unknown report format: " + cfg.report);

    const auto dicts = load_dicts(cfg);
    ErrorLog log = make_log(cfg);
    auto predictions = load_predictions(cfg, log);

    VariantSource source(cfg, dicts, log);
    EvalAccumulator acc;
    std::unordered_map<std::string, bool> used;
    while (auto set = source.next()) {
        auto it = predictions.find(set->example.id);
        const PredictionRecord* rec = it == predictions.end() ? nullptr : &it->second;
        if (!rec)
            log.warn(0, "missing prediction for example \"" + set->example.id + "\"; scoring zero");
        else
            used[set->example.id] = true;
        acc.add(score_example(set->example, set->variants, rec ? &rec->prediction : nullptr,
                              cfg.ignore_case));
    }
    for (const auto& [id, rec] : predictions)
        if (!used.count(id)) log.error(0, RowErrorKind::UnmatchedPrediction, "\"" + id + "\"");

    EvalReport report = acc.finish();
    OutputFile out(cfg.output);
    if (cfg.report == "pretty") render_eval_pretty(out.stream(), report);
    else if (cfg.report == "json") render_eval_json(out.stream(), report);
    else render_eval_tsv(out.stream(), report);
    out.commit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

inline int run_stats(const RunConfig& cfg) {
    require_readable(cfg.input, "--input");
    if (cfg.stats_by != "marker" && cfg.stats_by != "phenomenon" && cfg.stats_by != "both")
        throw UsageError("unknown --by value: " + cfg.stats_by);
    ErrorLog log = make_log(cfg);
    AugmentedReader reader(cfg.input, parse_format(cfg.format), log);

    MarkerDistribution markers;
    PhenomenonDistribution phenomena;
    while (auto row = reader.next_row()) {
        markers.add(*row);
        phenomena.add(*row);
    }

    OutputFile out(cfg.output);
    auto& os = out.stream();
    auto render = [&](const char* kind, const std::vector<DistributionRow>& rows) {
        for (const auto& r : rows)
            os << kind << '\t' << r.key << '\t' << std::fixed << std::setprecision(1)
               << r.percent << "\n";
    };
    if (cfg.stats_by != "phenomenon") render("marker", markers.rows(cfg.top_k));
    if (cfg.stats_by != "marker") render("phenomenon", phenomena.rows(cfg.top_k));
    out.commit();
    std::cerr << "tallied " << markers.total() << " generated rows\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// probs
// ---------------------------------------------------------------------------

inline std::vector<VariantDistribution> load_distributions(const std::string& path,
                                                           ErrorLog& log) {
    PredictionReader reader(path, log);
    std::vector<VariantDistribution> out;
    while (auto rec = reader.next()) {
        if (!rec->variant_probs) {
            log.warn(0, "prediction \"" + rec->id + "\" has no probabilities; skipped");
            continue;
        }
        out.push_back(VariantDistribution::from_probs(rec->id, std::move(*rec->variant_probs)));
    }
    return out;
}

inline int run_probs(const RunConfig& cfg) {
    require_readable(cfg.probs_a, "--model-a");
    require_readable(cfg.probs_b, "--model-b");
    if (cfg.report != "pretty" && cfg.report != "json")
        throw UsageError("unknown report format: " + cfg.report);

    ErrorLog log = make_log(cfg);
    auto a = load_distributions(cfg.probs_a, log);
    auto b = load_distributions(cfg.probs_b, log);
    ProbComparison cmp = probability_stats(a, b, log);

    OutputFile out(cfg.output);
    auto& os = out.stream();
    if (cfg.report == "json") {
        nlohmann::ordered_json doc;
        doc["n_examples"] = cmp.n_examples;
        doc["mean_entropy_a"] = cmp.mean_entropy_a;
        doc["mean_entropy_b"] = cmp.mean_entropy_b;
        doc["mean_mass_a"] = cmp.mean_mass_a;
        doc["mean_mass_b"] = cmp.mean_mass_b;
        doc["frac_entropy_a_gt_b"] = cmp.frac_entropy_a_gt_b;
        doc["frac_mass_a_gt_b"] = cmp.frac_mass_a_gt_b;
        os << doc.dump(2) << "\n";
    } else {
        os << std::fixed << std::setprecision(6);
        os << "examples            " << cmp.n_examples << "\n"
           << "mean entropy A      " << cmp.mean_entropy_a << "\n"
           << "mean entropy B      " << cmp.mean_entropy_b << "\n"
           << "mean mass A         " << cmp.mean_mass_a << "\n"
           << "mean mass B         " << cmp.mean_mass_b << "\n"
           << "entropy A > B       " << std::setprecision(1) << 100.0 * cmp.frac_entropy_a_gt_b
           << "%\n"
           << "mass A > B          " << 100.0 * cmp.frac_mass_a_gt_b << "%\n";
    }
    out.commit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// diagnose
// ---------------------------------------------------------------------------

inline int run_diagnose(const RunConfig& cfg) {
    require_readable(cfg.corpus, "--corpus");
    require_readable(cfg.predictions, "--predictions");
    if (!use_generated_variants(cfg)) require_readable(cfg.variants, "--variants");

    const auto dicts = load_dicts(cfg);
    ErrorLog log = make_log(cfg);
    auto predictions = load_predictions(cfg, log);

    VariantSource source(cfg, dicts, log);
    OutputFile out(cfg.output);
    auto& os = out.stream();
    os << "id\tcategory\n";
    DistributionCounter summary;
    while (auto set = source.next()) {
        auto it = predictions.find(set->example.id);
        if (it == predictions.end()) {
            log.warn(0, "missing prediction for example \"" + set->example.id + "\"; skipped");
            continue;
        }
        const Tokens& pred = it->second.prediction;
        std::string category;
        if (exact_match(pred, set->example.gold, cfg.ignore_case))
            category = "ExactMatch";
        else
            category = diagnosis_name(diagnose(set->example, *set, pred, dicts, cfg.ignore_case));
        os << set->example.id << '\t' << category << "\n";
        summary.add(category);
    }
    out.commit();
    for (const auto& row : summary.rows())
        std::cerr << std::left << std::setw(20) << row.key << std::fixed << std::setprecision(1)
                  << row.percent << "%\n";
    return kExitOk;
}

}  // namespace cli_detail

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Runs one subcommand. Exit status 0 on success, 1 on processing errors,
/// 2 on usage errors. Warnings and progress go to stderr only.
inline int run(const RunConfig& cfg) {
    try {
        switch (cfg.command) {
            case RunConfig::Command::Augment: return cli_detail::run_augment(cfg);
            case RunConfig::Command::Eval: return cli_detail::run_eval(cfg);
            case RunConfig::Command::Stats: return cli_detail::run_stats(cfg);
            case RunConfig::Command::Probs: return cli_detail::run_probs(cfg);
            case RunConfig::Command::Diagnose: return cli_detail::run_diagnose(cfg);
        }
        return kExitUsage;
    } catch (const cli_detail::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace fusemr
