#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fusemr {

/// A token sequence. Corpus text is assumed pre-tokenized; tokens never
/// contain whitespace.
using Tokens = std::vector<std::string>;

inline Tokens tokenize(std::string_view text) {
    Tokens out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) out.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::string join(const Tokens& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

/// ASCII-only case folding; non-ASCII bytes pass through untouched.
inline std::string fold(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline Tokens fold(const Tokens& tokens) {
    Tokens out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(fold(t));
    return out;
}

inline bool equal_folded(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

inline bool equal_folded(const Tokens& a, const Tokens& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!equal_folded(a[i], b[i])) return false;
    return true;
}

inline bool match_at(const Tokens& hay, std::size_t pos, const Tokens& needle) {
    if (needle.empty() || pos + needle.size() > hay.size()) return false;
    for (std::size_t i = 0; i < needle.size(); ++i)
        if (!equal_folded(hay[pos + i], needle[i])) return false;
    return true;
}

/// First case-folded occurrence of `needle` in `hay` at or after `from`.
inline std::optional<std::size_t> find_folded(const Tokens& hay, const Tokens& needle,
                                              std::size_t from = 0) {
    if (needle.empty() || hay.size() < needle.size()) return std::nullopt;
    for (std::size_t pos = from; pos + needle.size() <= hay.size(); ++pos)
        if (match_at(hay, pos, needle)) return pos;
    return std::nullopt;
}

inline std::size_t count_folded(const Tokens& hay, const Tokens& needle) {
    std::size_t count = 0;
    std::size_t from = 0;
    while (auto pos = find_folded(hay, needle, from)) {
        ++count;
        from = *pos + 1;
    }
    return count;
}

inline bool starts_upper(const std::string& token) {
    return !token.empty() && std::isupper(static_cast<unsigned char>(token[0]));
}

inline std::string capitalized(std::string token) {
    if (!token.empty())
        token[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
    return token;
}

inline std::string lowercased_first(std::string token) {
    if (!token.empty())
        token[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(token[0])));
    return token;
}

inline bool is_punct_token(const std::string& token) {
    return token.size() == 1 &&
           (token[0] == '.' || token[0] == ',' || token[0] == ';' || token[0] == ':' ||
            token[0] == '!' || token[0] == '?');
}

inline bool is_comma(const std::string& token) { return token == ","; }
inline bool is_period(const std::string& token) { return token == "."; }

/// Marker with all comma tokens removed (the bare connective lemma).
inline Tokens strip_commas(const Tokens& marker) {
    Tokens out;
    for (const auto& t : marker)
        if (!is_comma(t)) out.push_back(t);
    return out;
}

enum class MarkerShape { Plain, RightComma, LeftComma, Other };

inline MarkerShape shape_of(const Tokens& marker) {
    if (marker.empty()) return MarkerShape::Other;
    const bool leading = is_comma(marker.front());
    const bool trailing = is_comma(marker.back());
    std::size_t commas = 0;
    for (const auto& t : marker) commas += is_comma(t);
    if (commas == 0) return MarkerShape::Plain;
    if (commas == 1 && trailing) return MarkerShape::RightComma;
    if (commas == 1 && leading) return MarkerShape::LeftComma;
    return MarkerShape::Other;
}

}  // namespace fusemr
