#pragma once

#include <array>
#include <cstddef>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusemr/tokens.hpp"

namespace fusemr {

// ---------------------------------------------------------------------------
// Discourse phenomena
// ---------------------------------------------------------------------------

enum class DiscoursePhenomenon {
    VpCoordination,
    InnerConnective,
    InnerConnectiveAnaphora,
    SentenceCoordination,
    SentenceCoordinationAnaphora,
    ForwardConnective,
    DiscourseConnective,
    DiscourseConnectiveAnaphora,
    Apposition,
    RelativeClause,
    Cataphora,
    None,
    Anaphora,
};

inline constexpr std::size_t kPhenomenonCount = 13;

inline const std::array<std::pair<DiscoursePhenomenon, std::string_view>, kPhenomenonCount>&
phenomenon_names() {
    static const std::array<std::pair<DiscoursePhenomenon, std::string_view>, kPhenomenonCount>
        names = {{
            {DiscoursePhenomenon::VpCoordination, "VP-coordination"},
            {DiscoursePhenomenon::InnerConnective, "Inner-connective"},
            {DiscoursePhenomenon::InnerConnectiveAnaphora, "Inner-connective+A"},
            {DiscoursePhenomenon::SentenceCoordination, "Sentence-coordination"},
            {DiscoursePhenomenon::SentenceCoordinationAnaphora, "Sentence-coordination+A"},
            {DiscoursePhenomenon::ForwardConnective, "Forward-connective"},
            {DiscoursePhenomenon::DiscourseConnective, "Discourse-connective"},
            {DiscoursePhenomenon::DiscourseConnectiveAnaphora, "Discourse-connective+A"},
            {DiscoursePhenomenon::Apposition, "Apposition"},
            {DiscoursePhenomenon::RelativeClause, "Relative-clause"},
            {DiscoursePhenomenon::Cataphora, "Cataphora"},
            {DiscoursePhenomenon::None, "None"},
            {DiscoursePhenomenon::Anaphora, "Anaphora"},
        }};
    return names;
}

inline std::string_view phenomenon_name(DiscoursePhenomenon p) {
    for (const auto& [value, name] : phenomenon_names())
        if (value == p) return name;
    return "?";
}

/// Case-insensitive parse of one of the 13 canonical labels.
inline std::optional<DiscoursePhenomenon> parse_phenomenon(std::string_view label) {
    for (const auto& [value, name] : phenomenon_names())
        if (equal_folded(label, name)) return value;
    return std::nullopt;
}

inline bool phenomenon_implies_connective(DiscoursePhenomenon p) {
    switch (p) {
        case DiscoursePhenomenon::InnerConnective:
        case DiscoursePhenomenon::InnerConnectiveAnaphora:
        case DiscoursePhenomenon::SentenceCoordination:
        case DiscoursePhenomenon::SentenceCoordinationAnaphora:
        case DiscoursePhenomenon::ForwardConnective:
        case DiscoursePhenomenon::DiscourseConnective:
        case DiscoursePhenomenon::DiscourseConnectiveAnaphora:
            return true;
        default:
            return false;
    }
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

/// One corpus row: input sentence pair, gold fusion, phenomenon, connective.
struct FusionExample {
    std::string id;
    Tokens s1;
    Tokens s2;
    Tokens gold;
    DiscoursePhenomenon phenomenon = DiscoursePhenomenon::None;
    std::optional<Tokens> connective;
};

struct PredictionRecord {
    std::string id;
    Tokens prediction;
    std::optional<std::vector<double>> variant_probs;
};

/// One row of an augmented file. variant_index 0 with rule_id "original"
/// is the source gold; higher indices are generated variants.
struct AugmentedRow {
    std::string id;
    Tokens s1;
    Tokens s2;
    Tokens fusion;
    DiscoursePhenomenon phenomenon = DiscoursePhenomenon::None;
    Tokens connective;
    std::string rule_id;
    std::size_t variant_index = 0;
};

// ---------------------------------------------------------------------------
// Row-level errors
// ---------------------------------------------------------------------------

enum class RowErrorKind {
    MissingColumn,
    UnknownPhenomenon,
    EmptyField,
    MalformedLine,
    NegativeProbability,
    UnmatchedPrediction,
    MismatchedVariantCount,
    IoError,
};

inline std::string_view row_error_name(RowErrorKind kind) {
    switch (kind) {
        case RowErrorKind::MissingColumn: return "MissingColumn";
        case RowErrorKind::UnknownPhenomenon: return "UnknownPhenomenon";
        case RowErrorKind::EmptyField: return "EmptyField";
        case RowErrorKind::MalformedLine: return "MalformedLine";
        case RowErrorKind::NegativeProbability: return "NegativeProbability";
        case RowErrorKind::UnmatchedPrediction: return "UnmatchedPrediction";
        case RowErrorKind::MismatchedVariantCount: return "MismatchedVariantCount";
        case RowErrorKind::IoError: return "IoError";
    }
    return "?";
}

struct RowError {
    std::size_t line = 0;
    RowErrorKind kind = RowErrorKind::MalformedLine;
    std::string detail;
};

struct StrictParseError : std::runtime_error {
    RowError error;
    explicit StrictParseError(RowError e)
        : std::runtime_error("line " + std::to_string(e.line) + ": " +
                             std::string(row_error_name(e.kind)) + ": " + e.detail),
          error(std::move(e)) {}
};

/// Collects per-row errors and warnings. Errors abort only in strict mode;
/// warnings never abort.
class ErrorLog {
  public:
    explicit ErrorLog(bool strict = false) : strict_(strict) {}

    void error(std::size_t line, RowErrorKind kind, std::string detail) {
        RowError e{line, kind, std::move(detail)};
        if (strict_) throw StrictParseError(std::move(e));
        errors_.push_back(std::move(e));
        if (callback_) callback_(errors_.back(), false);
    }

    void warn(std::size_t line, std::string detail) {
        RowError e{line, RowErrorKind::MalformedLine, std::move(detail)};
        warnings_.push_back(std::move(e));
        if (callback_) callback_(warnings_.back(), true);
    }

    const std::vector<RowError>& errors() const { return errors_; }
    const std::vector<RowError>& warnings() const { return warnings_; }
    bool strict() const { return strict_; }

    /// Optional live sink, e.g. for printing warnings to stderr as they occur.
    void set_callback(std::function<void(const RowError&, bool)> cb) {
        callback_ = std::move(cb);
    }

  private:
    bool strict_;
    std::vector<RowError> errors_;
    std::vector<RowError> warnings_;
    std::function<void(const RowError&, bool)> callback_;
};

// ---------------------------------------------------------------------------
// Column layout
// ---------------------------------------------------------------------------

enum class CorpusFormat { Tsv, Jsonl };

inline CorpusFormat parse_format(std::string_view name) {
    if (equal_folded(name, "tsv")) return CorpusFormat::Tsv;
    if (equal_folded(name, "jsonl")) return CorpusFormat::Jsonl;
    throw std::invalid_argument("unknown format: " + std::string(name));
}

/// TSV column indices. The default matches the public DiscoFuse layout,
/// where the fused text is split over two leading columns (the second may
/// be empty). `gold` overrides the two-part layout with a single fused
/// column; `id` is optional and defaults to the 1-based line number.
struct ColumnMap {
    int gold1 = 0;
    int gold2 = 1;
    int gold = -1;
    int s1 = 2;
    int s2 = 3;
    int phenomenon = 4;
    int connective = 5;
    int id = -1;

    int max_index() const {
        int m = -1;
        for (int v : {gold1, gold2, gold, s1, s2, phenomenon, connective, id})
            if (v > m) m = v;
        return m;
    }

    static ColumnMap discofuse() { return {}; }

    /// Layout written by the augment command.
    static ColumnMap augmented() {
        ColumnMap m;
        m.id = 0;
        m.s1 = 1;
        m.s2 = 2;
        m.gold = 3;
        m.gold1 = -1;
        m.gold2 = -1;
        m.phenomenon = 4;
        m.connective = 5;
        return m;
    }

    /// Parses "key=index,key=index,..." or a preset name
    /// ("discofuse", "augmented"). Keys: id, gold, gold1, gold2, s1, s2,
    /// phenomenon/phen, connective/conn.
    static ColumnMap parse(std::string_view spec);
};

inline ColumnMap ColumnMap::parse(std::string_view spec) {
    if (spec.empty() || equal_folded(spec, "discofuse")) return discofuse();
    if (equal_folded(spec, "augmented")) return augmented();
    ColumnMap m;
    m.gold1 = m.gold2 = m.gold = m.s1 = m.s2 = m.phenomenon = m.connective = m.id = -1;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(',', start);
        if (end == std::string_view::npos) end = spec.size();
        std::string_view part = spec.substr(start, end - start);
        start = end + 1;
        if (part.empty()) continue;
        std::size_t eq = part.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("bad column spec entry: " + std::string(part));
        std::string key = fold(part.substr(0, eq));
        int value = 0;
        try {
            value = std::stoi(std::string(part.substr(eq + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad column index in: " + std::string(part));
        }
        if (value < 0) throw std::invalid_argument("negative column index in: " + std::string(part));
        if (key == "gold1") m.gold1 = value;
        else if (key == "gold2") m.gold2 = value;
        else if (key == "gold") m.gold = value;
        else if (key == "s1") m.s1 = value;
        else if (key == "s2") m.s2 = value;
        else if (key == "phenomenon" || key == "phen") m.phenomenon = value;
        else if (key == "connective" || key == "conn") m.connective = value;
        else if (key == "id") m.id = value;
        else throw std::invalid_argument("unknown column key: " + key);
    }
    if (m.s1 < 0 || m.s2 < 0 || m.phenomenon < 0)
        throw std::invalid_argument("column spec must map s1, s2 and phenomenon");
    if (m.gold < 0 && m.gold1 < 0)
        throw std::invalid_argument("column spec must map gold or gold1");
    return m;
}

// ---------------------------------------------------------------------------
// Dataset reader
// ---------------------------------------------------------------------------

inline std::vector<std::string> split_tsv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

inline std::string chomp(std::string line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    return line;
}

/// Streaming reader for fusion corpora. Holds one row at a time.
class DatasetReader {
  public:
    DatasetReader(const std::string& path, CorpusFormat format, ErrorLog& log,
                  ColumnMap columns = ColumnMap::discofuse())
        : owned_(std::make_unique<std::ifstream>(path)),
          in_(*owned_),
          format_(format),
          columns_(columns),
          log_(log) {
        if (!*owned_) throw std::runtime_error("cannot open corpus file: " + path);
    }

    DatasetReader(std::istream& in, CorpusFormat format, ErrorLog& log,
                  ColumnMap columns = ColumnMap::discofuse())
        : in_(in), format_(format), columns_(columns), log_(log) {}

    /// Next well-formed example, or nullopt at end of stream. Malformed
    /// rows are reported to the error log and skipped.
    std::optional<FusionExample> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            line = chomp(std::move(line));
            if (line.empty()) continue;
            std::optional<FusionExample> ex =
                format_ == CorpusFormat::Tsv ? parse_tsv_row(line) : parse_jsonl_row(line);
            if (ex) return ex;
        }
        return std::nullopt;
    }

    std::size_t line_number() const { return line_no_; }

  private:
    std::optional<FusionExample> parse_tsv_row(const std::string& line) {
        auto fields = split_tsv(line);
        const int needed = columns_.max_index();
        if (static_cast<int>(fields.size()) <= needed) {
            if (line_no_ == 1 && looks_like_header(fields)) return std::nullopt;
            log_.error(line_no_, RowErrorKind::MissingColumn,
                       "expected at least " + std::to_string(needed + 1) + " columns, got " +
                           std::to_string(fields.size()));
            return std::nullopt;
        }
        if (line_no_ == 1 && looks_like_header(fields)) return std::nullopt;

        FusionExample ex;
        ex.id = columns_.id >= 0 ? fields[columns_.id] : std::to_string(line_no_);
        ex.s1 = tokenize(fields[columns_.s1]);
        ex.s2 = tokenize(fields[columns_.s2]);
        if (columns_.gold >= 0) {
            ex.gold = tokenize(fields[columns_.gold]);
        } else {
            ex.gold = tokenize(fields[columns_.gold1]);
            if (columns_.gold2 >= 0) {
                Tokens part2 = tokenize(fields[columns_.gold2]);
                ex.gold.insert(ex.gold.end(), part2.begin(), part2.end());
            }
        }
        auto phen = parse_phenomenon(fields[columns_.phenomenon]);
        if (!phen) {
            log_.error(line_no_, RowErrorKind::UnknownPhenomenon,
                       "\"" + fields[columns_.phenomenon] + "\"");
            return std::nullopt;
        }
        ex.phenomenon = *phen;
        if (columns_.connective >= 0) {
            Tokens conn = tokenize(fields[columns_.connective]);
            if (!conn.empty()) ex.connective = std::move(conn);
        }
        return finish_example(std::move(ex));
    }

    std::optional<FusionExample> parse_jsonl_row(const std::string& line) {
        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            log_.error(line_no_, RowErrorKind::MalformedLine, "invalid JSON object");
            return std::nullopt;
        }
        auto text = [&](const char* key) -> std::optional<std::string> {
            if (!doc.contains(key) || !doc.at(key).is_string()) return std::nullopt;
            return doc.at(key).get<std::string>();
        };
        FusionExample ex;
        ex.id = text("id").value_or(std::to_string(line_no_));
        auto s1 = text("s1"), s2 = text("s2"), gold = text("gold");
        if (!s1 || !s2 || !gold) {
            log_.error(line_no_, RowErrorKind::MissingColumn, "need s1, s2 and gold keys");
            return std::nullopt;
        }
        ex.s1 = tokenize(*s1);
        ex.s2 = tokenize(*s2);
        ex.gold = tokenize(*gold);
        auto label = text("phenomenon");
        auto phen = label ? parse_phenomenon(*label) : std::nullopt;
        if (!phen) {
            log_.error(line_no_, RowErrorKind::UnknownPhenomenon,
                       "\"" + label.value_or("") + "\"");
            return std::nullopt;
        }
        ex.phenomenon = *phen;
        if (auto conn = text("connective"); conn && !conn->empty())
            ex.connective = tokenize(*conn);
        return finish_example(std::move(ex));
    }

    std::optional<FusionExample> finish_example(FusionExample ex) {
        const char* empty = ex.s1.empty() ? "s1" : ex.s2.empty() ? "s2"
                                                : ex.gold.empty() ? "gold" : nullptr;
        if (empty) {
            log_.error(line_no_, RowErrorKind::EmptyField, empty);
            return std::nullopt;
        }
        if (!ex.connective && phenomenon_implies_connective(ex.phenomenon))
            log_.warn(line_no_, "phenomenon " + std::string(phenomenon_name(ex.phenomenon)) +
                                    " without a connective; passed through");
        if (ex.connective && count_folded(ex.gold, *ex.connective) == 0)
            log_.warn(line_no_, "connective \"" + join(*ex.connective) +
                                    "\" does not occur in the fusion; passed through");
        return ex;
    }

    bool looks_like_header(const std::vector<std::string>& fields) const {
        if (columns_.phenomenon >= static_cast<int>(fields.size())) return false;
        const std::string cell = fold(fields[columns_.phenomenon]);
        return cell == "discourse_type" || cell == "phenomenon" || cell == "type";
    }

    std::unique_ptr<std::ifstream> owned_;
    std::istream& in_;
    CorpusFormat format_;
    ColumnMap columns_;
    ErrorLog& log_;
    std::size_t line_no_ = 0;
};

// ---------------------------------------------------------------------------
// Prediction reader
// ---------------------------------------------------------------------------

/// Streaming reader for prediction files: JSON lines with keys id,
/// prediction and an optional probabilities array.
class PredictionReader {
  public:
    PredictionReader(const std::string& path, ErrorLog& log)
        : owned_(std::make_unique<std::ifstream>(path)), in_(*owned_), log_(log) {
        if (!*owned_) throw std::runtime_error("cannot open predictions file: " + path);
    }

    PredictionReader(std::istream& in, ErrorLog& log) : in_(in), log_(log) {}

    std::optional<PredictionRecord> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            line = chomp(std::move(line));
            if (line.empty()) continue;
            if (auto rec = parse_line(line)) return rec;
        }
        return std::nullopt;
    }

  private:
    std::optional<PredictionRecord> parse_line(const std::string& line) {
        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            log_.error(line_no_, RowErrorKind::MalformedLine, "invalid JSON object");
            return std::nullopt;
        }
        PredictionRecord rec;
        if (doc.contains("probabilities")) {
            const auto& arr = doc.at("probabilities");
            if (!arr.is_array()) {
                log_.error(line_no_, RowErrorKind::MalformedLine, "probabilities is not an array");
                return std::nullopt;
            }
            std::vector<double> probs;
            for (const auto& v : arr) {
                if (!v.is_number()) {
                    log_.error(line_no_, RowErrorKind::MalformedLine,
                               "non-numeric probability");
                    return std::nullopt;
                }
                double p = v.get<double>();
                if (p < 0.0) {
                    log_.error(line_no_, RowErrorKind::NegativeProbability, std::to_string(p));
                    return std::nullopt;
                }
                if (p > 1.0)
                    log_.warn(line_no_, "probability above 1: " + std::to_string(p));
                probs.push_back(p);
            }
            rec.variant_probs = std::move(probs);
        }
        if (!doc.contains("id") || !doc.at("id").is_string() || !doc.contains("prediction") ||
            !doc.at("prediction").is_string()) {
            log_.error(line_no_, RowErrorKind::MalformedLine,
                       "need string keys id and prediction");
            return std::nullopt;
        }
        rec.id = doc.at("id").get<std::string>();
        rec.prediction = tokenize(doc.at("prediction").get<std::string>());
        return rec;
    }

    std::unique_ptr<std::ifstream> owned_;
    std::istream& in_;
    ErrorLog& log_;
    std::size_t line_no_ = 0;
};

// ---------------------------------------------------------------------------
// Augmented-file reader
// ---------------------------------------------------------------------------

/// Reads augmented files (TSV or JSONL) row by row or grouped by example.
class AugmentedReader {
  public:
    AugmentedReader(const std::string& path, CorpusFormat format, ErrorLog& log)
        : owned_(std::make_unique<std::ifstream>(path)), in_(*owned_), format_(format), log_(log) {
        if (!*owned_) throw std::runtime_error("cannot open augmented file: " + path);
    }

    AugmentedReader(std::istream& in, CorpusFormat format, ErrorLog& log)
        : in_(in), format_(format), log_(log) {}

    std::optional<AugmentedRow> next_row() {
        if (pending_) {
            auto row = std::move(*pending_);
            pending_.reset();
            return row;
        }
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            line = chomp(std::move(line));
            if (line.empty()) continue;
            if (auto row = parse_row(line)) return row;
        }
        return std::nullopt;
    }

    /// All consecutive rows sharing one id, in variant_index order as stored.
    std::optional<std::vector<AugmentedRow>> next_group() {
        auto first = next_row();
        if (!first) return std::nullopt;
        std::vector<AugmentedRow> group;
        group.push_back(std::move(*first));
        while (auto row = next_row()) {
            if (row->id != group.front().id) {
                pending_ = std::move(row);
                break;
            }
            group.push_back(std::move(*row));
        }
        return group;
    }

  private:
    std::optional<AugmentedRow> parse_row(const std::string& line) {
        if (format_ == CorpusFormat::Tsv) return parse_tsv(line);
        return parse_jsonl(line);
    }

    std::optional<AugmentedRow> parse_tsv(const std::string& line) {
        auto fields = split_tsv(line);
        if (fields.size() < 8) {
            if (line_no_ == 1 && fields.size() > 4 && fold(fields[4]) == "phenomenon")
                return std::nullopt;
            log_.error(line_no_, RowErrorKind::MissingColumn,
                       "expected 8 columns, got " + std::to_string(fields.size()));
            return std::nullopt;
        }
        if (line_no_ == 1 && fold(fields[4]) == "phenomenon") return std::nullopt;
        auto phen = parse_phenomenon(fields[4]);
        if (!phen) {
            log_.error(line_no_, RowErrorKind::UnknownPhenomenon, "\"" + fields[4] + "\"");
            return std::nullopt;
        }
        AugmentedRow row;
        row.id = fields[0];
        row.s1 = tokenize(fields[1]);
        row.s2 = tokenize(fields[2]);
        row.fusion = tokenize(fields[3]);
        row.phenomenon = *phen;
        row.connective = tokenize(fields[5]);
        row.rule_id = fields[6];
        try {
            row.variant_index = static_cast<std::size_t>(std::stoul(fields[7]));
        } catch (const std::exception&) {
            log_.error(line_no_, RowErrorKind::MalformedLine,
                       "bad variant_index: " + fields[7]);
            return std::nullopt;
        }
        return row;
    }

    std::optional<AugmentedRow> parse_jsonl(const std::string& line) {
        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            log_.error(line_no_, RowErrorKind::MalformedLine, "invalid JSON object");
            return std::nullopt;
        }
        try {
            AugmentedRow row;
            row.id = doc.at("id").get<std::string>();
            row.s1 = tokenize(doc.at("s1").get<std::string>());
            row.s2 = tokenize(doc.at("s2").get<std::string>());
            row.fusion = tokenize(doc.at("fusion").get<std::string>());
            auto phen = parse_phenomenon(doc.at("phenomenon").get<std::string>());
            if (!phen) {
                log_.error(line_no_, RowErrorKind::UnknownPhenomenon,
                           doc.at("phenomenon").get<std::string>());
                return std::nullopt;
            }
            row.phenomenon = *phen;
            row.connective = tokenize(doc.value("connective", std::string()));
            row.rule_id = doc.at("rule_id").get<std::string>();
            row.variant_index = doc.at("variant_index").get<std::size_t>();
            return row;
        } catch (const nlohmann::json::exception& e) {
            log_.error(line_no_, RowErrorKind::MalformedLine, e.what());
            return std::nullopt;
        }
    }

    std::unique_ptr<std::ifstream> owned_;
    std::istream& in_;
    CorpusFormat format_;
    ErrorLog& log_;
    std::size_t line_no_ = 0;
    std::optional<AugmentedRow> pending_;
};

// ---------------------------------------------------------------------------
// Augmented-file writer
// ---------------------------------------------------------------------------

/// Writes augmented rows. The TSV layout is
/// id, s1, s2, fusion, phenomenon, connective, rule_id, variant_index.
class AugmentedWriter {
  public:
    AugmentedWriter(std::ostream& out, CorpusFormat format) : out_(out), format_(format) {}

    void write_row(const AugmentedRow& row) {
        if (format_ == CorpusFormat::Tsv) {
            out_ << row.id << '\t' << join(row.s1) << '\t' << join(row.s2) << '\t'
                 << join(row.fusion) << '\t' << phenomenon_name(row.phenomenon) << '\t'
                 << join(row.connective) << '\t' << row.rule_id << '\t' << row.variant_index
                 << '\n';
        } else {
            nlohmann::ordered_json doc;
            doc["id"] = row.id;
            doc["s1"] = join(row.s1);
            doc["s2"] = join(row.s2);
            doc["fusion"] = join(row.fusion);
            doc["phenomenon"] = phenomenon_name(row.phenomenon);
            doc["connective"] = join(row.connective);
            doc["rule_id"] = row.rule_id;
            doc["variant_index"] = row.variant_index;
            out_ << doc.dump() << '\n';
        }
        ++rows_;
    }

    std::size_t rows_written() const { return rows_; }

  private:
    std::ostream& out_;
    CorpusFormat format_;
    std::size_t rows_ = 0;
};

}  // namespace fusemr
