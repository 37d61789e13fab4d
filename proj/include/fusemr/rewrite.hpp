#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fusemr/clusters.hpp"
#include "fusemr/corpus.hpp"
#include "fusemr/tokens.hpp"

namespace fusemr {

// ---------------------------------------------------------------------------
// Splice with capitalization repair
// ---------------------------------------------------------------------------

namespace detail {

/// True when a case-folded match of `token` occurs capitalized somewhere in
/// `text` that is not a sentence start. Used to keep proper nouns
/// capitalized when an edit moves them off a sentence boundary.
inline bool capitalized_elsewhere(const Tokens& text, const std::string& token) {
    for (std::size_t i = 1; i < text.size(); ++i) {
        if (is_period(text[i - 1])) continue;
        if (equal_folded(text[i], token) && starts_upper(text[i])) return true;
    }
    return false;
}

/// Replaces text[pos, pos+len) with `repl` and repairs token case around the
/// edit: replacement tokens that land at a sentence start are capitalized,
/// and the token following the edit is re-cased when the edit changes
/// whether it starts a sentence.
inline Tokens splice_repaired(const Tokens& text, std::size_t pos, std::size_t len,
                              const Tokens& repl) {
    Tokens out;
    out.reserve(text.size() - len + repl.size());
    out.insert(out.end(), text.begin(), text.begin() + pos);
    const std::size_t repl_start = out.size();
    out.insert(out.end(), repl.begin(), repl.end());
    const std::size_t follow = out.size();
    out.insert(out.end(), text.begin() + pos + len, text.end());

    for (std::size_t i = repl_start; i < follow; ++i)
        if (i == 0 || is_period(out[i - 1])) out[i] = capitalized(out[i]);

    if (follow < out.size()) {
        const bool was_initial = len > 0 && is_period(text[pos + len - 1]);
        const bool is_initial = follow == 0 || is_period(out[follow - 1]);
        if (was_initial && !is_initial) {
            if (!capitalized_elsewhere(text, out[follow]))
                out[follow] = lowercased_first(out[follow]);
        } else if (!was_initial && is_initial) {
            out[follow] = capitalized(out[follow]);
        }
    }
    return out;
}

/// Rejects edits that leave two sentence-level punctuation tokens adjacent
/// at a seam (e.g. ". ." or ", ,").
inline bool seams_ok(const Tokens& out, std::size_t repl_start, std::size_t repl_len) {
    auto heavy = [&](std::size_t i) { return is_period(out[i]) || is_comma(out[i]); };
    if (repl_start > 0 && repl_start < out.size() && heavy(repl_start - 1) && heavy(repl_start))
        return false;
    const std::size_t end = repl_start + repl_len;
    if (end > 0 && end < out.size() && heavy(end - 1) && heavy(end)) return false;
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rewrite primitives
// ---------------------------------------------------------------------------

/// Substitutes the first case-folded occurrence of `find` in `text` with
/// `repl`, repairing sentence-boundary capitalization. Returns nullopt when
/// there is no occurrence or the edit would corrupt punctuation.
inline std::optional<Tokens> replace_once(const Tokens& text, const Tokens& find,
                                          const Tokens& repl) {
    auto pos = find_folded(text, find);
    if (!pos) return std::nullopt;
    Tokens out = detail::splice_repaired(text, *pos, find.size(), repl);
    if (!detail::seams_ok(out, *pos, repl.size())) return std::nullopt;
    return out;
}

/// Removes the first case-folded occurrence of `target` from `text`.
inline std::optional<Tokens> delete_once(const Tokens& text, const Tokens& target) {
    auto pos = find_folded(text, target);
    if (!pos) return std::nullopt;
    Tokens out = detail::splice_repaired(text, *pos, target.size(), {});
    if (!detail::seams_ok(out, *pos, 0)) return std::nullopt;
    return out;
}

/// Concatenation; empty operands are identities.
inline Tokens concat(const Tokens& left, const Tokens& right) {
    Tokens out = left;
    out.insert(out.end(), right.begin(), right.end());
    return out;
}

inline Tokens concat(std::string_view left, const Tokens& right) {
    return concat(tokenize(left), right);
}

// ---------------------------------------------------------------------------
// Variant sets
// ---------------------------------------------------------------------------

struct Variant {
    Tokens fusion;
    std::string rule_id;
    Tokens marker;  // the substituted marker, in dictionary form
};

struct VariantSet {
    FusionExample example;
    std::vector<Variant> variants;
};

namespace detail {

class VariantBuilder {
  public:
    VariantBuilder(const FusionExample& ex, std::size_t max_variants)
        : set_{ex, {}}, max_(max_variants) {}

    void add(std::optional<Tokens> fusion, const char* rule_id, Tokens marker) {
        if (!fusion || set_.variants.size() >= max_) return;
        if (equal_folded(*fusion, set_.example.gold)) return;
        for (const auto& v : set_.variants)
            if (equal_folded(v.fusion, *fusion)) return;
        set_.variants.push_back({std::move(*fusion), rule_id, std::move(marker)});
    }

    VariantSet take() { return std::move(set_); }

  private:
    VariantSet set_;
    std::size_t max_;
};

/// The family's trailing-comma candidates: the dictionary entries followed
/// by trailing-comma forms of the plain entries not already present. The
/// extra forms cover connectives whose comma variant is attested only in
/// the plain dictionary (e.g. "yet ,").
inline std::vector<Tokens> right_comma_pool(const std::vector<Tokens>& plain,
                                            const std::vector<Tokens>& right_comma) {
    std::vector<Tokens> pool = right_comma;
    for (const auto& m : plain) {
        Tokens candidate = m;
        candidate.push_back(",");
        bool present = false;
        for (const auto& p : pool)
            if (equal_folded(strip_commas(p), m)) { present = true; break; }
        if (!present) pool.push_back(std::move(candidate));
    }
    return pool;
}

inline bool has_internal_period(const Tokens& t) {
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (is_period(t[i])) return true;
    return false;
}

inline const std::vector<Tokens>* same_shape_partition(const HatSet& hat, const Tokens& marker) {
    if (ConnectiveDictionaries::contains(hat.plain, marker)) return &hat.plain;
    if (ConnectiveDictionaries::contains(hat.right_comma, marker)) return &hat.right_comma;
    return nullptr;
}

}  // namespace detail

constexpr std::size_t kUnlimitedVariants = std::numeric_limits<std::size_t>::max();

/// Generates the deduplicated, deterministically ordered variant set for one
/// example: every rewrite rule whose detection predicate holds is applied
/// once per eligible target marker, followed by punctuation-only variants of
/// the annotated connective. Rules reference only the connective's own
/// cluster, fire only when the connective occurs exactly once in the gold
/// fusion, and never alter the input sentences (the forward-connective
/// rebuild consumes them instead). Variants equal to the gold are dropped.
inline VariantSet expand_variants(const FusionExample& ex, const ConnectiveDictionaries& dicts,
                                  std::size_t max_variants = kUnlimitedVariants) {
    const auto contains = ConnectiveDictionaries::contains;
    detail::VariantBuilder out(ex, max_variants);
    const Tokens& t = ex.gold;

    Tokens ci;
    std::optional<ClusterId> cluster;
    if (ex.connective && !ex.connective->empty()) {
        ci = *ex.connective;
        cluster = dicts.cluster_of(ci);
        if (cluster && count_folded(t, ci) != 1) cluster.reset();
    }
    const auto p = ex.phenomenon;

    if (cluster == ClusterId::Conjunction) {
        const HatSet hat = dicts.hat_set(ClusterId::Conjunction);
        // conjunction.1: swap within the same punctuation shape
        if (const auto* part = detail::same_shape_partition(hat, ci))
            for (const auto& c : *part)
                if (!equal_folded(c, ci)) out.add(replace_once(t, ci, c), "conjunction.1", c);
        const bool in_hat = detail::same_shape_partition(hat, ci) != nullptr;
        const Tokens dot_ci = concat(".", ci);
        const bool after_period = find_folded(t, dot_ci).has_value();
        // conjunction.2: sentence-initial marker gains a trailing comma
        if (in_hat && after_period)
            for (const auto& c : dicts.c_a_comma)
                if (!equal_folded(c, ci)) out.add(replace_once(t, ci, c), "conjunction.2", c);
        // conjunction.3: merge the two sentences with a leading-comma marker
        if (in_hat && after_period && t.size() < 40)
            for (const auto& c : dicts.c_comma_a)
                out.add(replace_once(t, dot_ci, c), "conjunction.3", c);
    }

    if (cluster == ClusterId::Comparison) {
        const HatSet hat = dicts.hat_set(ClusterId::Comparison);
        const auto right_pool = detail::right_comma_pool(dicts.c_q, dicts.c_q_comma);
        // comparison.1: swap within the same punctuation shape
        if (const auto* part = detail::same_shape_partition(hat, ci))
            for (const auto& c : *part)
                if (!equal_folded(c, ci)) out.add(replace_once(t, ci, c), "comparison.1", c);
        const bool ci_right = contains(dicts.c_q_comma, ci);
        const bool ci_left = contains(dicts.c_comma_q, ci);
        // comparison.2: split a coordinated sentence at the marker
        if (!ci_right && p == DiscoursePhenomenon::SentenceCoordination)
            for (const auto& c : right_pool)
                if (!equal_folded(c, ci))
                    out.add(replace_once(t, ci, concat(".", c)), "comparison.2", c);
        // comparison.3: inner marker gains a leading comma
        if (!ci_left && p == DiscoursePhenomenon::InnerConnective)
            for (const auto& c : dicts.c_comma_q) {
                const Tokens lemma = strip_commas(c);
                if (shape_of(c) == MarkerShape::LeftComma &&
                    (lemma == Tokens{"but"} || lemma == Tokens{"yet"}))
                    out.add(replace_once(t, ci, c), "comparison.3", c);
            }
        // comparison.4: split at an inner marker
        if (!ci_right && p == DiscoursePhenomenon::InnerConnective)
            for (const auto& c : right_pool)
                if (!equal_folded(c, ci))
                    out.add(replace_once(t, ci, concat(".", c)), "comparison.4", c);
        // comparison.5: sentence-initial marker gains a trailing comma
        if (!ci_right && p == DiscoursePhenomenon::DiscourseConnective)
            for (const auto& c : right_pool)
                if (!equal_folded(c, ci)) out.add(replace_once(t, ci, c), "comparison.5", c);
        // comparison.6: merge the two sentences with ", although"
        if (!ci_left && p == DiscoursePhenomenon::DiscourseConnective) {
            const Tokens c = tokenize(", although");
            out.add(replace_once(t, concat(".", ci), c), "comparison.6", c);
        }
        // comparison.7: rebuild a fronted "although" fusion from the inputs
        if (equal_folded(ci, Tokens{"although"}) && p == DiscoursePhenomenon::ForwardConnective &&
            count_folded(ex.s1, Tokens{"."}) == 1) {
            for (const auto& c : dicts.c_comma_q) {
                auto base = delete_once(ex.s1, Tokens{"."});
                if (!base || ex.s2.empty()) continue;
                Tokens tail = ex.s2;
                if (!detail::capitalized_elsewhere(t, tail.front()))
                    tail.front() = lowercased_first(tail.front());
                out.add(concat(concat(*base, c), tail), "comparison.7", c);
            }
        }
    }

    if (cluster == ClusterId::Cause) {
        const HatSet hat = dicts.hat_set(ClusterId::Cause);
        // cause.1: swap within the same punctuation shape
        if (const auto* part = detail::same_shape_partition(hat, ci))
            for (const auto& c : *part)
                if (!equal_folded(c, ci)) out.add(replace_once(t, ci, c), "cause.1", c);
        // cause.2: move an inner marker to the following sentence boundary
        if (contains(dicts.c_e, ci) && detail::has_internal_period(t) &&
            !find_folded(t, concat(".", ci)))
            if (auto base = delete_once(t, ci))
                for (const auto& c : dicts.c_e_comma)
                    out.add(replace_once(*base, Tokens{"."}, concat(".", c)), "cause.2", c);
    }

    // relative.1: drop the pronoun+copula prefix, leaving an apposition
    if (p == DiscoursePhenomenon::RelativeClause) {
        for (std::size_t pos = 0; pos < t.size(); ++pos) {
            for (const auto& expr : dicts.e_r) {
                if (!match_at(t, pos, expr)) continue;
                for (const auto& prefix : dicts.p_r) {
                    if (expr.size() <= prefix.size() ||
                        !std::equal(prefix.begin(), prefix.end(), expr.begin()))
                        continue;
                    Tokens spliced = detail::splice_repaired(t, pos, prefix.size(), {});
                    if (!detail::seams_ok(spliced, pos, 0)) break;
                    Tokens marker(expr.begin() + prefix.size(), expr.end());
                    out.add(std::move(spliced), "relative.1", std::move(marker));
                    break;
                }
                break;  // at most one expression matches a given position
            }
        }
    }

    // punct.1: punctuation-only variants of the annotated connective
    if (cluster)
        for (const auto& v : dicts.punctuation_variants(ci))
            if (!equal_folded(v, ci)) out.add(replace_once(t, ci, v), "punct.1", v);

    return out.take();
}

/// Expands an augmented row group back into a variant set. Row 0 must be
/// the original.
inline VariantSet group_to_variant_set(const std::vector<AugmentedRow>& group) {
    VariantSet set;
    bool have_original = false;
    for (const auto& row : group) {
        if (row.rule_id == "original" && !have_original) {
            set.example.id = row.id;
            set.example.s1 = row.s1;
            set.example.s2 = row.s2;
            set.example.gold = row.fusion;
            set.example.phenomenon = row.phenomenon;
            if (!row.connective.empty()) set.example.connective = row.connective;
            have_original = true;
        } else {
            set.variants.push_back({row.fusion, row.rule_id, row.connective});
        }
    }
    if (!have_original && !group.empty()) {
        // tolerate files written without the original row
        set.example.id = group.front().id;
        set.example.s1 = group.front().s1;
        set.example.s2 = group.front().s2;
        set.example.gold = group.front().fusion;
        set.example.phenomenon = group.front().phenomenon;
    }
    return set;
}

/// Emits one variant set as augmented rows: the original gold first (when
/// requested), then the variants in order. Returns the row count.
inline std::size_t write_variant_set(AugmentedWriter& writer, const VariantSet& set,
                                     bool seed_original = true) {
    std::size_t rows = 0;
    if (seed_original) {
        AugmentedRow row;
        row.id = set.example.id;
        row.s1 = set.example.s1;
        row.s2 = set.example.s2;
        row.fusion = set.example.gold;
        row.phenomenon = set.example.phenomenon;
        if (set.example.connective) row.connective = *set.example.connective;
        row.rule_id = "original";
        row.variant_index = 0;
        writer.write_row(row);
        ++rows;
    }
    std::size_t index = 1;
    for (const auto& v : set.variants) {
        AugmentedRow row;
        row.id = set.example.id;
        row.s1 = set.example.s1;
        row.s2 = set.example.s2;
        row.fusion = v.fusion;
        row.phenomenon = set.example.phenomenon;
        row.connective = v.marker;
        row.rule_id = v.rule_id;
        row.variant_index = index++;
        writer.write_row(row);
        ++rows;
    }
    return rows;
}

}  // namespace fusemr
