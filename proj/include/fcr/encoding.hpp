#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fcr/corpus_model.hpp"
#include "fcr/tex_tokenizer.hpp"

namespace fcr {

using Vector = std::vector<double>;
using Document = std::vector<std::string>;

// ---------------------------------------------------------------------------
// TF-IDF: raw term counts weighted by idf(t) = ln((1 + n) / (1 + df(t))) + 1,
// then L2-normalized.
// ---------------------------------------------------------------------------

struct TfidfModel {
    std::map<std::string, std::size_t> vocabulary; // token -> column, columns in token order
    std::vector<double> idf;
    std::size_t doc_count = 0;

    std::size_t dimension() const noexcept { return idf.size(); }
};

/// Throws EmptyCorpus when no document has a token.
TfidfModel fit_tfidf(std::span<const Document> documents);

/// Out-of-vocabulary tokens are ignored; the zero vector comes back when
/// nothing is in the vocabulary.
Vector encode_tfidf(const TfidfModel& model, const Document& document);

// ---------------------------------------------------------------------------
// Paragraph vectors (PV-DBOW with negative sampling)
// ---------------------------------------------------------------------------

struct EmbeddingParams {
    std::size_t dim = 50;
    std::size_t epochs = 100;
    double learning_rate = 0.025;
    double min_learning_rate = 0.0001;
    std::size_t negative_samples = 5;
    std::size_t infer_epochs = 100;

    /// Throws BadHyperparameter.
    void validate() const;
};

struct EmbeddingModel {
    EmbeddingParams params;
    std::uint64_t seed = 0;
    std::map<std::string, std::size_t> vocabulary;
    std::vector<std::size_t> token_counts;    // per vocabulary row
    std::vector<Vector> token_vectors;        // output weights, one row per vocabulary token
    std::vector<Vector> doc_vectors;          // unit length, one row per training document
};

/// Deterministic for fixed (documents, params, seed). Throws EmptyCorpus when
/// fewer than two documents are given or no document has a token.
EmbeddingModel train_embedding(std::span<const Document> documents, const EmbeddingParams& params,
                               std::uint64_t seed);

/// Infers a vector for an unseen document against the frozen token vectors.
/// Returns the zero vector when no token is in the vocabulary.
Vector encode_embedding(const EmbeddingModel& model, const Document& document);

// ---------------------------------------------------------------------------
// Encoding spaces over a corpus
// ---------------------------------------------------------------------------

/// Whether a content document repeats constituents (multiset) or lists each
/// one once, in first-occurrence order (set).
enum class ContentView { Set, Multiset };

struct EncodingOptions {
    std::uint64_t seed = 42;
    ContentView content_view = ContentView::Set;
    EmbeddingParams embedding;
    const TokenClassTable* table = nullptr; // builtin table when null
};

struct EncodingSpace {
    EncodingKind kind;
    std::vector<std::string> ids;
    std::vector<Vector> vectors;
    std::shared_ptr<const TfidfModel> tfidf;         // set for tfidf spaces
    std::shared_ptr<const EmbeddingModel> embedding; // set for embedding spaces

    std::size_t size() const noexcept { return ids.size(); }
    std::size_t dimension() const noexcept { return vectors.empty() ? 0 : vectors.front().size(); }
    /// Row of `id`; throws UnknownFormula.
    std::size_t index_of(const std::string& id) const;
    const Vector& vector_of(const std::string& id) const { return vectors[index_of(id)]; }

    /// The rows of `row_ids`, in that order, sharing the fitted model.
    EncodingSpace select(std::span<const std::string> row_ids) const;
};

/// Constituents from the formula's MathML when ingested, otherwise from its LaTeX.
ConstituentSet constituents_of(const Formula& formula, const TokenClassTable& table = TokenClassTable::builtin());

/// Operators and identifiers in document order; numbers are dropped.
Document content_document(const Formula& formula, ContentView view = ContentView::Set,
                          const TokenClassTable& table = TokenClassTable::builtin());

/// Resolved QIDs in constituent order. Throws MissingAnnotation when there are none.
Document semantics_document(const Formula& formula, const AnnotationMap& annotations,
                            const TokenClassTable& table = TokenClassTable::builtin());

/// Semantics axes throw MissingAnnotation naming the first unannotated formula.
EncodingSpace build_encoding_space(std::span<const Formula> corpus, const AnnotationMap& annotations,
                                   EncodingKind kind, const EncodingOptions& options = {});

} // namespace fcr
