#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fusemr/corpus.hpp"
#include "fusemr/rewrite.hpp"
#include "fusemr/tokens.hpp"

namespace fusemr {

// ---------------------------------------------------------------------------
// Exact match
// ---------------------------------------------------------------------------

/// 1 iff the whitespace-normalized token sequences are equal. Case-sensitive
/// unless ignore_case is set.
inline int exact_match(const Tokens& prediction, const Tokens& reference,
                       bool ignore_case = false) {
    if (ignore_case) return equal_folded(prediction, reference) ? 1 : 0;
    return prediction == reference ? 1 : 0;
}

// ---------------------------------------------------------------------------
// SARI
// ---------------------------------------------------------------------------

struct SariScore {
    double keep_f1 = 0.0;
    double add_f1 = 0.0;
    double del_precision = 0.0;
    double total = 0.0;
};

namespace detail {

// multiset of n-grams, keyed by tokens joined with an unprintable separator
using NgramCounts = std::unordered_map<std::string, long long>;

inline NgramCounts ngram_counts(const Tokens& tokens, std::size_t n) {
    NgramCounts counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (std::size_t j = 0; j < n; ++j) {
            if (j) key += '\x1f';
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

inline long long total(const NgramCounts& c) {
    long long t = 0;
    for (const auto& [k, v] : c) t += v;
    return t;
}

inline NgramCounts intersect(const NgramCounts& a, const NgramCounts& b) {
    NgramCounts out;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it != b.end()) out[k] = std::min(v, it->second);
    }
    return out;
}

inline NgramCounts subtract(const NgramCounts& a, const NgramCounts& b) {
    NgramCounts out;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        long long rest = v - (it != b.end() ? it->second : 0);
        if (rest > 0) out[k] = rest;
    }
    return out;
}

// empty denominator counts as vacuous success
inline double vacuous_ratio(long long num, long long den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 1.0;
}

inline double f1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace detail

/// SARI against a single reference, n-grams of order 1..4 over multisets.
/// The source is the concatenation of the two input sentences. Kept and
/// added n-grams score F1, deleted n-grams score precision; each component
/// is averaged over n and the three components average into the total.
inline SariScore sari(const Tokens& s1, const Tokens& s2, const Tokens& prediction,
                      const Tokens& reference, bool ignore_case = false) {
    Tokens src = concat(s1, s2);
    Tokens pred = prediction;
    Tokens ref = reference;
    if (ignore_case) {
        src = fold(src);
        pred = fold(pred);
        ref = fold(ref);
    }

    constexpr std::size_t kMaxOrder = 4;
    double keep_sum = 0.0, add_sum = 0.0, del_sum = 0.0;
    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
        const auto S = detail::ngram_counts(src, n);
        const auto P = detail::ngram_counts(pred, n);
        const auto R = detail::ngram_counts(ref, n);

        const auto kept_p = detail::intersect(S, P);
        const auto kept_r = detail::intersect(S, R);
        const long long kept_match = detail::total(detail::intersect(kept_p, kept_r));
        keep_sum += detail::f1(detail::vacuous_ratio(kept_match, detail::total(kept_p)),
                               detail::vacuous_ratio(kept_match, detail::total(kept_r)));

        const auto added_p = detail::subtract(P, S);
        const auto added_r = detail::subtract(R, S);
        const long long add_match = detail::total(detail::intersect(added_p, added_r));
        add_sum += detail::f1(detail::vacuous_ratio(add_match, detail::total(added_p)),
                              detail::vacuous_ratio(add_match, detail::total(added_r)));

        const auto deleted_p = detail::subtract(S, P);
        const auto deleted_r = detail::subtract(S, R);
        const long long del_match = detail::total(detail::intersect(deleted_p, deleted_r));
        del_sum += detail::vacuous_ratio(del_match, detail::total(deleted_p));
    }

    SariScore score;
    score.keep_f1 = keep_sum / kMaxOrder;
    score.add_f1 = add_sum / kMaxOrder;
    score.del_precision = del_sum / kMaxOrder;
    score.total = (score.keep_f1 + score.add_f1 + score.del_precision) / 3.0;
    return score;
}

// ---------------------------------------------------------------------------
// Corpus evaluation
// ---------------------------------------------------------------------------

struct PerExampleScore {
    std::string id;
    int exact = 0;
    double sari = 0.0;
    int mr_exact = 0;
    double mr_sari = 0.0;
    int best_variant_index = -1;  // 0 = gold, i >= 1 = variants[i-1]
};

struct EvalReport {
    std::size_t n_examples = 0;
    double exact = 0.0;
    double sari = 0.0;
    double mr_exact = 0.0;
    double mr_sari = 0.0;
    std::vector<PerExampleScore> per_example;
};

/// Scores one example. The reference set is the gold fusion followed by
/// the variants; single-reference scores use the gold, multi-reference
/// scores take the maximum over the whole set. A null prediction scores
/// zero everywhere.
inline PerExampleScore score_example(const FusionExample& ex, const std::vector<Variant>& variants,
                                     const Tokens* prediction, bool ignore_case = false) {
    PerExampleScore s;
    s.id = ex.id;
    if (!prediction) return s;

    s.exact = exact_match(*prediction, ex.gold, ignore_case);
    s.sari = sari(ex.s1, ex.s2, *prediction, ex.gold, ignore_case).total;

    s.mr_exact = s.exact;
    s.mr_sari = s.sari;
    s.best_variant_index = 0;
    for (std::size_t i = 0; i < variants.size(); ++i) {
        const Tokens& ref = variants[i].fusion;
        if (exact_match(*prediction, ref, ignore_case)) s.mr_exact = 1;
        const double v = sari(ex.s1, ex.s2, *prediction, ref, ignore_case).total;
        if (v > s.mr_sari) {
            s.mr_sari = v;
            s.best_variant_index = static_cast<int>(i) + 1;
        }
    }
    return s;
}

class EvalAccumulator {
  public:
    explicit EvalAccumulator(bool keep_rows = true) : keep_rows_(keep_rows) {}

    void add(PerExampleScore s) {
        ++n_;
        exact_ += s.exact;
        sari_ += s.sari;
        mr_exact_ += s.mr_exact;
        mr_sari_ += s.mr_sari;
        if (keep_rows_) rows_.push_back(std::move(s));
    }

    EvalReport finish() {
        EvalReport r;
        r.n_examples = n_;
        if (n_ > 0) {
            r.exact = exact_ / n_;
            r.sari = sari_ / n_;
            r.mr_exact = mr_exact_ / n_;
            r.mr_sari = mr_sari_ / n_;
        }
        r.per_example = std::move(rows_);
        return r;
    }

  private:
    bool keep_rows_;
    std::size_t n_ = 0;
    double exact_ = 0.0, sari_ = 0.0, mr_exact_ = 0.0, mr_sari_ = 0.0;
    std::vector<PerExampleScore> rows_;
};

struct EvalOptions {
    bool ignore_case = false;
};

/// Batch evaluation of variant sets against predictions joined by id.
/// Missing predictions score zero and are reported as warnings; prediction
/// ids without a matching example are reported as errors.
inline EvalReport evaluate(const std::vector<VariantSet>& corpus,
                           const std::vector<PredictionRecord>& predictions, EvalOptions options,
                           ErrorLog& log) {
    std::unordered_map<std::string, const PredictionRecord*> by_id;
    for (const auto& p : predictions) {
        if (!by_id.emplace(p.id, &p).second)
            log.warn(0, "duplicate prediction id \"" + p.id + "\"; keeping the first");
    }

    std::unordered_map<std::string, bool> used;
    EvalAccumulator acc;
    for (const auto& set : corpus) {
        auto it = by_id.find(set.example.id);
        const PredictionRecord* rec = it == by_id.end() ? nullptr : it->second;
        if (!rec) {
            log.warn(0, "missing prediction for example \"" + set.example.id +
                            "\"; scoring zero");
        } else {
            used[set.example.id] = true;
            if (rec->variant_probs &&
                rec->variant_probs->size() != set.variants.size() + 1)
                log.warn(0, "example \"" + set.example.id + "\": " +
                                std::to_string(rec->variant_probs->size()) +
                                " probabilities for " +
                                std::to_string(set.variants.size() + 1) + " references");
        }
        acc.add(score_example(set.example, set.variants, rec ? &rec->prediction : nullptr,
                              options.ignore_case));
    }
    for (const auto& p : predictions)
        if (!used.count(p.id))
            log.error(0, RowErrorKind::UnmatchedPrediction, "\"" + p.id + "\"");
    return acc.finish();
}

}  // namespace fusemr
