#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fusemr/clusters.hpp"
#include "fusemr/corpus.hpp"
#include "fusemr/metrics.hpp"
#include "fusemr/rewrite.hpp"
#include "fusemr/tokens.hpp"

namespace fusemr {

// ---------------------------------------------------------------------------
// Variant probability distributions
// ---------------------------------------------------------------------------

/// Externally supplied model probabilities over one example's reference set,
/// with the normalized distribution, its natural-log entropy and the raw
/// probability mass.
struct VariantDistribution {
    std::string example_id;
    std::vector<double> raw_probs;
    std::vector<double> normalized;
    double entropy = 0.0;
    double mass = 0.0;

    static VariantDistribution from_probs(std::string id, std::vector<double> probs) {
        VariantDistribution d;
        d.example_id = std::move(id);
        d.raw_probs = std::move(probs);
        for (double p : d.raw_probs) d.mass += p;
        d.normalized.assign(d.raw_probs.size(), 0.0);
        if (d.mass > 0.0) {
            for (std::size_t i = 0; i < d.raw_probs.size(); ++i)
                d.normalized[i] = d.raw_probs[i] / d.mass;
            for (double q : d.normalized)
                if (q > 0.0) d.entropy -= q * std::log(q);
        }
        return d;
    }
};

// ---------------------------------------------------------------------------
// Corpus distributions
// ---------------------------------------------------------------------------

struct DistributionRow {
    std::string key;
    std::size_t count = 0;
    double percent = 0.0;
};

class DistributionCounter {
  public:
    void add(std::string key) { ++counts_[std::move(key)]; ++total_; }

    std::size_t total() const { return total_; }

    /// Rows sorted by count (desc, then key), truncated to top_k.
    std::vector<DistributionRow> rows(std::size_t top_k = SIZE_MAX) const {
        std::vector<DistributionRow> out;
        out.reserve(counts_.size());
        for (const auto& [key, count] : counts_)
            out.push_back({key, count, total_ ? 100.0 * count / total_ : 0.0});
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.key < b.key;
        });
        if (out.size() > top_k) out.resize(top_k);
        return out;
    }

  private:
    std::map<std::string, std::size_t> counts_;
    std::size_t total_ = 0;
};

/// Tallies generated rows (rule_id != "original") by the comma-stripped,
/// case-folded substituted marker.
class MarkerDistribution {
  public:
    void add(const AugmentedRow& row) {
        if (row.rule_id == "original") return;
        Tokens lemma = fold(strip_commas(row.connective));
        counter_.add(lemma.empty() ? "(none)" : join(lemma));
    }
    std::vector<DistributionRow> rows(std::size_t top_k = SIZE_MAX) const {
        return counter_.rows(top_k);
    }
    std::size_t total() const { return counter_.total(); }

  private:
    DistributionCounter counter_;
};

/// Tallies generated rows by discourse phenomenon.
class PhenomenonDistribution {
  public:
    void add(const AugmentedRow& row) {
        if (row.rule_id == "original") return;
        counter_.add(std::string(phenomenon_name(row.phenomenon)));
    }
    std::vector<DistributionRow> rows(std::size_t top_k = SIZE_MAX) const {
        return counter_.rows(top_k);
    }
    std::size_t total() const { return counter_.total(); }

  private:
    DistributionCounter counter_;
};

// ---------------------------------------------------------------------------
// Two-model probability comparison
// ---------------------------------------------------------------------------

struct ProbComparison {
    std::size_t n_examples = 0;
    double mean_entropy_a = 0.0;
    double mean_entropy_b = 0.0;
    double mean_mass_a = 0.0;
    double mean_mass_b = 0.0;
    double frac_entropy_a_gt_b = 0.0;
    double frac_mass_a_gt_b = 0.0;
};

/// Joins two models' distributions by example id and reports per-model mean
/// entropy and mass plus the fraction of examples where model A exceeds
/// model B. Pairs with differing variant counts are rejected.
inline ProbComparison probability_stats(const std::vector<VariantDistribution>& model_a,
                                        const std::vector<VariantDistribution>& model_b,
                                        ErrorLog& log) {
    std::unordered_map<std::string, const VariantDistribution*> by_id;
    for (const auto& d : model_a) by_id.emplace(d.example_id, &d);

    ProbComparison out;
    double entropy_a = 0, entropy_b = 0, mass_a = 0, mass_b = 0;
    std::size_t entropy_wins = 0, mass_wins = 0;
    std::unordered_set<std::string> matched;
    for (const auto& b : model_b) {
        auto it = by_id.find(b.example_id);
        if (it == by_id.end()) {
            log.warn(0, "example \"" + b.example_id + "\" only in model B; skipped");
            continue;
        }
        const VariantDistribution& a = *it->second;
        matched.insert(b.example_id);
        if (a.raw_probs.size() != b.raw_probs.size()) {
            log.error(0, RowErrorKind::MismatchedVariantCount,
                      "\"" + b.example_id + "\": " + std::to_string(a.raw_probs.size()) +
                          " vs " + std::to_string(b.raw_probs.size()));
            continue;
        }
        ++out.n_examples;
        entropy_a += a.entropy;
        entropy_b += b.entropy;
        mass_a += a.mass;
        mass_b += b.mass;
        if (a.entropy > b.entropy) ++entropy_wins;
        if (a.mass > b.mass) ++mass_wins;
    }
    for (const auto& a : model_a)
        if (!matched.count(a.example_id))
            log.warn(0, "example \"" + a.example_id + "\" only in model A; skipped");

    if (out.n_examples > 0) {
        out.mean_entropy_a = entropy_a / out.n_examples;
        out.mean_entropy_b = entropy_b / out.n_examples;
        out.mean_mass_a = mass_a / out.n_examples;
        out.mean_mass_b = mass_b / out.n_examples;
        out.frac_entropy_a_gt_b = static_cast<double>(entropy_wins) / out.n_examples;
        out.frac_mass_a_gt_b = static_cast<double>(mass_wins) / out.n_examples;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Token diff
// ---------------------------------------------------------------------------

/// One contiguous edit: a[pos_a, pos_a+len_a) was replaced by
/// b[pos_b, pos_b+len_b). len_a == 0 is an insertion, len_b == 0 a deletion.
struct DiffHunk {
    std::size_t pos_a = 0, len_a = 0;
    std::size_t pos_b = 0, len_b = 0;
};

/// Minimal token diff via longest common subsequence, case-folded.
inline std::vector<DiffHunk> token_diff(const Tokens& a, const Tokens& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<std::uint32_t>> lcs(n + 1, std::vector<std::uint32_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            lcs[i][j] = equal_folded(a[i], b[j]) ? lcs[i + 1][j + 1] + 1
                                                 : std::max(lcs[i + 1][j], lcs[i][j + 1]);

    std::vector<DiffHunk> hunks;
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && equal_folded(a[i], b[j])) {
            ++i;
            ++j;
            continue;
        }
        DiffHunk h{i, 0, j, 0};
        while (i < n || j < m) {
            if (i < n && j < m && equal_folded(a[i], b[j])) break;
            if (j >= m || (i < n && lcs[i + 1][j] >= lcs[i][j + 1])) {
                ++i;
                ++h.len_a;
            } else {
                ++j;
                ++h.len_b;
            }
        }
        hunks.push_back(h);
    }
    return hunks;
}

// ---------------------------------------------------------------------------
// Failure diagnosis
// ---------------------------------------------------------------------------

enum class DiffDiagnosis {
    CorrectVariant,
    PunctuationOnly,
    WithinClusterSwap,
    CrossClusterSwap,
    ContentDiff,
    Other,
};

inline std::string_view diagnosis_name(DiffDiagnosis d) {
    switch (d) {
        case DiffDiagnosis::CorrectVariant: return "CorrectVariant";
        case DiffDiagnosis::PunctuationOnly: return "PunctuationOnly";
        case DiffDiagnosis::WithinClusterSwap: return "WithinClusterSwap";
        case DiffDiagnosis::CrossClusterSwap: return "CrossClusterSwap";
        case DiffDiagnosis::ContentDiff: return "ContentDiff";
        case DiffDiagnosis::Other: return "Other";
    }
    return "?";
}

namespace detail {

// connective words outside the curated clusters, recognized so that swaps
// against cluster markers classify as marker-for-marker
inline bool is_aux_connective(const std::string& folded_phrase) {
    static const std::unordered_set<std::string> words = {
        "because", "since", "so", "while", "when", "as", "or", "nor", "and",
        "though", "unless", "whereas", "then", "also", "instead", "meanwhile",
        "otherwise", "besides", "thereby",
    };
    return words.count(folded_phrase) > 0;
}

struct MarkerRun {
    bool is_marker = false;
    std::optional<ClusterId> cluster;
    bool punct_only = false;
};

inline MarkerRun classify_run(const Tokens& run, const ConnectiveDictionaries& dicts) {
    MarkerRun out;
    Tokens stripped;
    for (const auto& t : run)
        if (!is_punct_token(t)) stripped.push_back(t);
    if (stripped.empty()) {
        out.punct_only = true;
        return out;
    }
    out.cluster = dicts.cluster_of(stripped);
    out.is_marker = out.cluster.has_value() || is_aux_connective(join(fold(stripped)));
    return out;
}

}  // namespace detail

/// Classifies a failed prediction by its token diff against the gold:
/// a generated variant, a punctuation-only difference, a single
/// marker-for-marker substitution inside or across clusters, a content
/// difference, or anything else. Categories are assigned in that order.
inline DiffDiagnosis diagnose(const FusionExample& ex, const VariantSet& variants,
                              const Tokens& prediction, const ConnectiveDictionaries& dicts,
                              bool ignore_case = false) {
    for (const auto& v : variants.variants)
        if (exact_match(prediction, v.fusion, ignore_case)) return DiffDiagnosis::CorrectVariant;

    const auto hunks = token_diff(ex.gold, prediction);
    if (hunks.empty()) return DiffDiagnosis::Other;  // case-only difference

    bool all_punct = true;
    for (const auto& h : hunks) {
        for (std::size_t i = 0; i < h.len_a; ++i)
            all_punct = all_punct && is_punct_token(ex.gold[h.pos_a + i]);
        for (std::size_t i = 0; i < h.len_b; ++i)
            all_punct = all_punct && is_punct_token(prediction[h.pos_b + i]);
    }
    if (all_punct) return DiffDiagnosis::PunctuationOnly;

    auto run_of = [](const Tokens& tokens, std::size_t pos, std::size_t len) {
        return Tokens(tokens.begin() + pos, tokens.begin() + pos + len);
    };

    if (hunks.size() == 1 && hunks[0].len_a > 0 && hunks[0].len_b > 0) {
        const auto gold_run =
            detail::classify_run(run_of(ex.gold, hunks[0].pos_a, hunks[0].len_a), dicts);
        const auto pred_run =
            detail::classify_run(run_of(prediction, hunks[0].pos_b, hunks[0].len_b), dicts);
        if (gold_run.is_marker && pred_run.is_marker) {
            if (gold_run.cluster && pred_run.cluster && *gold_run.cluster == *pred_run.cluster)
                return DiffDiagnosis::WithinClusterSwap;
            return DiffDiagnosis::CrossClusterSwap;
        }
    }

    for (const auto& h : hunks) {
        const auto ga = detail::classify_run(run_of(ex.gold, h.pos_a, h.len_a), dicts);
        const auto gb = detail::classify_run(run_of(prediction, h.pos_b, h.len_b), dicts);
        const bool a_ok = h.len_a == 0 || ga.punct_only || ga.is_marker;
        const bool b_ok = h.len_b == 0 || gb.punct_only || gb.is_marker;
        if (!a_ok || !b_ok) return DiffDiagnosis::ContentDiff;
    }
    return DiffDiagnosis::Other;
}

}  // namespace fusemr
