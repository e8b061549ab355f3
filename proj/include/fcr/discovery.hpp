#pragma once

#include <array>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fcr/corpus_model.hpp"
#include "fcr/encoding.hpp"

namespace fcr {

/// Exact-string groups (canonical LaTeX) with min_len <= length <= max_len and
/// at least min_docs distinct documents, by d, then D (both descending), then
/// LaTeX.
std::vector<DuplicateRecord> rank_duplicates(std::span<const Formula> corpus, const KnnConfig& config);

/// An equation in the narrow sense: an "=" with two non-empty, different
/// sides that are not both a lone identifier.
bool is_equation(std::string_view latex);

struct Neighbor {
    std::string id;
    double distance = 0.0; // 1 - cosine

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// The k nearest formulas to `query` by cosine distance, nearest first, ties
/// by id. The query and any formula of `corpus` with the same canonical LaTeX
/// are skipped; k is capped at what remains. Throws UnknownFormula.
std::vector<Neighbor> knn_candidates(const EncodingSpace& space, const std::string& query, std::size_t k,
                                     std::span<const Formula> corpus = {});

/// Per-encoding share of accepted retrievals, aligned with
/// all_encoding_kinds(): s_e = found_e / sum of found. All zero when nothing
/// was accepted.
std::array<double, 4> attribute_success(const std::array<std::size_t, 4>& accepted_found);

/// Unigrams and bigrams of the prose within +-window characters of `offset`
/// (lowercased, stopwords dropped), by frequency, then distance to `offset`,
/// then longer n-gram first, then alphabetically.
std::vector<std::string> extract_name_candidates(std::string_view context, std::size_t offset, std::size_t window,
                                                 std::size_t top_n = 5);

/// Judgments: query id -> ids accepted as equivalent representations.
using Judgments = std::map<std::string, std::set<std::string>>;

/// Same-label formulas as the accepted set of each labelled formula.
Judgments judgments_from_labels(std::span<const Formula> corpus);

struct KnnResult {
    std::string query;
    DuplicateRecord record;
    std::map<EncodingKind, std::vector<Neighbor>> neighbors; // only the encodings that could be built
    std::set<std::string> accepted;
    std::array<double, 4> success{};
    std::vector<std::string> names;
};

struct DiscoveryOptions {
    KnnConfig config;
    EncodingOptions encoding;
    bool equations_only = false;
    bool seed_all = false; // query every formula instead of the duplicate ranking
    std::size_t top_names = 5;
};

/// Runs duplicate ranking, then kNN in every encoding that can be built (the
/// semantics encodings need annotations for every formula), judged against
/// `judgments`.
std::vector<KnnResult> discover(std::span<const Formula> corpus, const AnnotationMap& annotations,
                                const Judgments& judgments, const DiscoveryOptions& options = {});

/// One row per result: formula, name candidate, d/D, one s column per
/// encoding, a sample accepted neighbor.
std::string discovery_csv(std::span<const KnnResult> results, std::span<const Formula> corpus);

} // namespace fcr
