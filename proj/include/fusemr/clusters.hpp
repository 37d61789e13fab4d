#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusemr/tokens.hpp"

namespace fusemr {

enum class ClusterId { Conjunction, Comparison, Cause, RelativeClause };

inline std::string_view cluster_name(ClusterId id) {
    switch (id) {
        case ClusterId::Conjunction: return "Conjunction";
        case ClusterId::Comparison: return "Comparison";
        case ClusterId::Cause: return "Cause";
        case ClusterId::RelativeClause: return "RelativeClause";
    }
    return "?";
}

struct UnsupportedFamily : std::invalid_argument {
    explicit UnsupportedFamily(ClusterId id)
        : std::invalid_argument("family has no hat set: " + std::string(cluster_name(id))) {}
};

struct UnknownMarker : std::invalid_argument {
    explicit UnknownMarker(const Tokens& marker)
        : std::invalid_argument("marker not in any cluster: \"" + join(marker) + "\"") {}
};

/// The plain and trailing-comma partitions of one connective family,
/// kept separate so callers can restrict swaps to the same punctuation shape.
struct HatSet {
    std::vector<Tokens> plain;
    std::vector<Tokens> right_comma;
};

/// The curated connective dictionaries. Entries are lowercase token
/// sequences with commas as their own tokens. Immutable after load.
class ConnectiveDictionaries {
  public:
    std::vector<Tokens> c_a;        // plain conjunction markers
    std::vector<Tokens> c_a_comma;  // conjunction, trailing comma
    std::vector<Tokens> c_comma_a;  // conjunction, leading comma
    std::vector<Tokens> c_q;        // plain comparison markers
    std::vector<Tokens> c_q_comma;  // comparison, trailing comma
    std::vector<Tokens> c_comma_q;  // comparison, leading comma
    std::vector<Tokens> c_e;        // plain cause markers
    std::vector<Tokens> c_e_comma;  // cause, trailing comma
    std::vector<Tokens> e_r;        // relative-clause expressions
    std::vector<Tokens> p_r;        // relative-clause pronoun+copula prefixes

    static ConnectiveDictionaries builtin();
    static ConnectiveDictionaries load_json(const std::string& path);

    /// Cluster owning the case-folded, comma-stripped lemma of `marker`,
    /// if any. Total function.
    std::optional<ClusterId> cluster_of(const Tokens& marker) const {
        const Tokens lemma = fold(strip_commas(marker));
        if (lemma.empty()) return std::nullopt;
        if (lemma_in(lemma, {&c_a, &c_a_comma, &c_comma_a})) return ClusterId::Conjunction;
        if (lemma_in(lemma, {&c_q, &c_q_comma, &c_comma_q})) return ClusterId::Comparison;
        if (lemma_in(lemma, {&c_e, &c_e_comma})) return ClusterId::Cause;
        if (lemma_in(lemma, {&e_r, &p_r})) return ClusterId::RelativeClause;
        return std::nullopt;
    }

    /// Plain + trailing-comma dictionaries of a semantic family.
    HatSet hat_set(ClusterId family) const {
        switch (family) {
            case ClusterId::Conjunction: return {c_a, c_a_comma};
            case ClusterId::Comparison: return {c_q, c_q_comma};
            case ClusterId::Cause: return {c_e, c_e_comma};
            case ClusterId::RelativeClause: break;
        }
        throw UnsupportedFamily(family);
    }

    /// All dictionary entries whose comma-stripped form equals `marker`'s.
    std::vector<Tokens> punctuation_variants(const Tokens& marker) const {
        if (!cluster_of(marker)) throw UnknownMarker(marker);
        const Tokens lemma = fold(strip_commas(marker));
        std::vector<Tokens> out;
        for (const auto* dict : all_dicts())
            for (const auto& entry : *dict)
                if (strip_commas(entry) == lemma && !contains(out, entry)) out.push_back(entry);
        return out;
    }

    static bool contains(const std::vector<Tokens>& dict, const Tokens& marker) {
        for (const auto& entry : dict)
            if (equal_folded(entry, marker)) return true;
        return false;
    }

    std::vector<const std::vector<Tokens>*> all_dicts() const {
        return {&c_a, &c_a_comma, &c_comma_a, &c_q,      &c_q_comma,
                &c_comma_q, &c_e, &c_e_comma, &e_r, &p_r};
    }

  private:
    static bool lemma_in(const Tokens& lemma,
                         std::initializer_list<const std::vector<Tokens>*> dicts) {
        for (const auto* dict : dicts)
            for (const auto& entry : *dict)
                if (strip_commas(entry) == lemma) return true;
        return false;
    }
};

namespace detail {

inline std::vector<Tokens> to_markers(std::initializer_list<std::string_view> entries) {
    std::vector<Tokens> out;
    out.reserve(entries.size());
    for (auto e : entries) out.push_back(tokenize(e));
    return out;
}

}  // namespace detail

inline ConnectiveDictionaries ConnectiveDictionaries::builtin() {
    using detail::to_markers;
    ConnectiveDictionaries d;
    d.c_a = to_markers({"furthermore", "moreover", "additionally"});
    d.c_a_comma = to_markers({"furthermore ,", "plus ,", "additionally ,", "moreover ,"});
    d.c_comma_a = to_markers({", and"});
    d.c_q = to_markers({"however", "yet", "but", "nevertheless", "although"});
    d.c_q_comma = to_markers({"however ,", "still ,", "although ,", "nevertheless ,"});
    // "although" is listed upstream in the leading-comma set without a comma;
    // kept as-is.
    d.c_comma_q = to_markers({", yet", ", but", "although"});
    d.c_e = to_markers({"hence", "therefore", "consequently"});
    d.c_e_comma =
        to_markers({"as a result ,", "hence ,", "thus ,", "consequently ,", "therefore ,"});
    d.e_r = to_markers({
        "who is a",        "who is not a",     "who is an",        "who are an",
        "who are a",       "who is the",       "who is not an",    "who are not a",
        "who are the",     "which is a",       "which is an",      "who are not an",
        "who is not the",  "who are not the",  "which is not a",   "which are an",
        "which are a",     "which is the",     "which is not an",  "which are not a",
        "which are not an", "which are the",   "which is not the", "which are not the",
    });
    d.p_r = to_markers({"who is", "who are", "which is", "which are"});
    return d;
}

/// Loads dictionary overrides from a JSON file with one key per dictionary
/// name (C_a, C_a_comma, C_comma_a, C_q, C_q_comma, C_comma_q, C_e,
/// C_e_comma, E_r, P_r); values are arrays of marker strings. Missing keys
/// fall back to the builtin sets.
inline ConnectiveDictionaries ConnectiveDictionaries::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dictionary file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("bad dictionary file " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error("bad dictionary file " + path + ": not an object");

    ConnectiveDictionaries d = builtin();
    auto assign = [&](const char* key, std::vector<Tokens>& target) {
        if (!doc.contains(key)) return;
        const auto& arr = doc.at(key);
        if (!arr.is_array())
            throw std::runtime_error(std::string("dictionary key is not an array: ") + key);
        target.clear();
        for (const auto& item : arr) target.push_back(fold(tokenize(item.get<std::string>())));
    };
    assign("C_a", d.c_a);
    assign("C_a_comma", d.c_a_comma);
    assign("C_comma_a", d.c_comma_a);
    assign("C_q", d.c_q);
    assign("C_q_comma", d.c_q_comma);
    assign("C_comma_q", d.c_comma_q);
    assign("C_e", d.c_e);
    assign("C_e_comma", d.c_e_comma);
    assign("E_r", d.e_r);
    assign("P_r", d.p_r);
    return d;
}

}  // namespace fusemr
