#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fcr {

// ---------------------------------------------------------------------------
// Constituents
// ---------------------------------------------------------------------------

enum class TokenKind { Operator, Identifier, Number };

std::string_view to_string(TokenKind kind) noexcept;

struct Token {
    TokenKind kind;
    std::string text;

    friend bool operator==(const Token&, const Token&) = default;
};

/// The operators, identifiers and numbers of one formula.
///
/// Tokens are kept in document order as a single sequence, so the three
/// per-kind lists partition the emitted tokens by construction. Consumers pick
/// either the multiset views (`operators()`, `content_tokens()`, ...) or the
/// de-duplicated first-occurrence views (`unique_*`).
struct ConstituentSet {
    std::vector<Token> tokens;

    std::vector<std::string> operators() const { return of_kind(TokenKind::Operator); }
    std::vector<std::string> identifiers() const { return of_kind(TokenKind::Identifier); }
    std::vector<std::string> numbers() const { return of_kind(TokenKind::Number); }

    std::vector<std::string> unique_operators() const;
    std::vector<std::string> unique_identifiers() const;
    std::vector<std::string> unique_numbers() const;

    /// Operators and identifiers in document order, numbers dropped.
    std::vector<std::string> content_tokens() const;
    /// De-duplicated `content_tokens()`, first occurrence wins.
    std::vector<std::string> unique_content_tokens() const;

    bool contains(std::string_view text) const;
    bool empty() const noexcept { return tokens.empty(); }

    friend bool operator==(const ConstituentSet&, const ConstituentSet&) = default;

private:
    std::vector<std::string> of_kind(TokenKind kind) const;
};

// ---------------------------------------------------------------------------
// Formula
// ---------------------------------------------------------------------------

bool is_qid(std::string_view s) noexcept;

/// One representation of a formula concept, plus where it came from.
struct Formula {
    std::string id;
    std::string latex;
    std::optional<std::string> label;
    std::optional<std::string> concept_qid;
    std::string doc_id;
    std::optional<std::string> context;
    // Position of the formula inside `context`; the middle when absent.
    std::optional<std::size_t> context_offset;
    // Present for formulas ingested from MathML, where the markup already
    // classifies the tokens.
    std::optional<ConstituentSet> constituents;

    friend bool operator==(const Formula&, const Formula&) = default;
};

/// Throws InvalidFormula when the latex is blank or the concept QID is malformed.
void validate(const Formula& formula);

/// Whitespace removed, `\left`/`\right` sizing dropped. Used for duplicate
/// grouping and string matching.
std::string canonical_latex(std::string_view latex);

// ---------------------------------------------------------------------------
// Annotations
// ---------------------------------------------------------------------------

struct Annotation {
    std::string name;
    std::string qid;

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Token meanings: every alternative seen for a token, and the one chosen for
/// each (formula, token) occurrence.
class AnnotationMap {
public:
    /// Records the annotation as an alternative of `token` (alternatives are kept
    /// ordered by QID) and resolves
    /// (formula_id, token) to its QID. Throws AnnotationFormatError on a bad QID.
    void add(const std::string& formula_id, const std::string& token, const std::string& name,
             const std::string& qid);

    const std::vector<Annotation>& alternatives(const std::string& token) const;
    std::optional<std::string> resolve(const std::string& formula_id, const std::string& token) const;

    bool has_formula(const std::string& formula_id) const;
    bool empty() const noexcept { return resolution_.empty(); }
    std::size_t token_count() const noexcept { return alternatives_.size(); }
    std::size_t resolution_count() const noexcept { return resolution_.size(); }

    /// Resolved QIDs for `formula_id` in constituent order, duplicates removed.
    /// Tokens without a resolution are skipped.
    std::vector<std::string> resolved_qids(const std::string& formula_id,
                                           const ConstituentSet& constituents) const;

    /// Tokens resolved for `formula_id` that do not occur in `constituents`.
    std::vector<std::string> dangling_tokens(const std::string& formula_id,
                                             const ConstituentSet& constituents) const;

    const std::map<std::string, std::vector<Annotation>>& all_alternatives() const noexcept {
        return alternatives_;
    }
    /// (formula id, token) -> chosen annotation.
    const std::map<std::pair<std::string, std::string>, Annotation>& all_resolutions() const noexcept {
        return resolution_;
    }

    friend bool operator==(const AnnotationMap&, const AnnotationMap&) = default;

private:
    std::map<std::string, std::vector<Annotation>> alternatives_;
    std::map<std::pair<std::string, std::string>, Annotation> resolution_;
};

// ---------------------------------------------------------------------------
// Discovery / retrieval records
// ---------------------------------------------------------------------------

/// An exact-string formula group: `count` occurrences (d) spread over
/// `documents` distinct documents (D).
struct DuplicateRecord {
    std::string latex;
    std::size_t count = 0;
    std::size_t documents = 0;
    std::string first_id;

    friend bool operator==(const DuplicateRecord&, const DuplicateRecord&) = default;
};

enum class Axis { Content, Semantics };
enum class Method { Tfidf, Embedding };

struct EncodingKind {
    Axis axis = Axis::Content;
    Method method = Method::Tfidf;

    friend bool operator==(const EncodingKind&, const EncodingKind&) = default;
    friend auto operator<=>(const EncodingKind&, const EncodingKind&) = default;
};

/// "content-tfidf", "content-embed", "semantics-tfidf", "semantics-embed".
std::string to_string(EncodingKind kind);
std::optional<EncodingKind> parse_encoding_kind(std::string_view name);

/// The four encodings in report order: content/embedding, content/tfidf,
/// semantics/embedding, semantics/tfidf.
const std::vector<EncodingKind>& all_encoding_kinds();

struct KnnConfig {
    std::size_t k = 9;
    std::size_t context_window = 500;
    std::size_t min_len = 10;
    std::size_t max_len = 30;
    std::size_t min_docs = 2;

    /// Throws InvalidConfig.
    void validate() const;
};

struct RankingReport {
    std::optional<double> mr; // absent when no query found a relevant result
    double mrr = 0.0;
    std::map<int, double> topk_recall;
    std::vector<std::optional<int>> per_query_ranks;
};

// ---------------------------------------------------------------------------
// Similarity / clustering results
// ---------------------------------------------------------------------------

enum class Measure { Fuzzy, CosineTfidf, CosineEmbedding, QidOverlap };

std::string_view to_string(Measure measure) noexcept;
std::optional<Measure> parse_measure(std::string_view name);

/// Square, symmetric, row-major.
struct SimilarityMatrix {
    std::vector<std::string> labels;
    std::vector<double> values;
    Measure measure = Measure::Fuzzy;
    // Set by sort_matrix: position i of the output shows input row permutation[i].
    std::vector<std::size_t> permutation;

    std::size_t size() const noexcept { return labels.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * labels.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * labels.size() + j]; }
};

struct ClusterReport {
    std::vector<int> assignments; // aligned with the input points
    double purity = 0.0;
    std::optional<double> mean_centroid_distance;
    int k = 0;
    std::size_t iterations = 0;
    std::vector<double> wcss_trace; // within-cluster sum of squares after each Lloyd step
};

} // namespace fcr
