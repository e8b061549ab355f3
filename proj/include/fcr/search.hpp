#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fcr/corpus_model.hpp"
#include "fcr/tex_tokenizer.hpp"

namespace fcr {

struct SearchHit {
    std::string id;
    double score = 0.0;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

class SearchIndex {
public:
    std::size_t size() const noexcept { return formulas_.size(); }
    bool contains(const std::string& id) const { return formulas_.count(id) > 0; }
    const Formula& formula(const std::string& id) const;

    /// Ids sharing the canonical form of `latex`, sorted.
    std::vector<std::string> exact(std::string_view latex) const;
    /// Ids whose constituents contain `token`, sorted.
    const std::vector<std::string>& postings(const std::string& token) const;

    /// Formulas in insertion order.
    const std::vector<std::string>& ids() const noexcept { return order_; }
    const std::string& canonical(const std::string& id) const { return canonical_.at(id); }
    const std::vector<std::string>& unique_constituents(const std::string& id) const { return unique_.at(id); }

private:
    friend SearchIndex build_index(std::span<const Formula>, const TokenClassTable&);

    std::map<std::string, Formula> formulas_;
    std::vector<std::string> order_;
    std::map<std::string, std::string> canonical_;
    std::map<std::string, std::vector<std::string>> by_latex_;
    std::map<std::string, std::vector<std::string>> by_constituent_;
    std::map<std::string, std::vector<std::string>> unique_;
};

/// Throws DuplicateId.
SearchIndex build_index(std::span<const Formula> corpus, const TokenClassTable& table = TokenClassTable::builtin());

/// Partial-ratio score between canonical strings, best first; ties go to the
/// shorter candidate, then the smaller id. Exact canonical matches come first.
/// Throws EmptyQuery.
std::vector<SearchHit> query_by_latex(const SearchIndex& index, std::string_view latex, std::size_t topk);

/// Jaccard score over de-duplicated operators and identifiers, best first; ties
/// go to the larger intersection, then the smaller id. Zero scores are dropped.
/// Throws EmptyQuery when the query has no operator or identifier.
std::vector<SearchHit> query_by_constituents(const SearchIndex& index, const ConstituentSet& query, std::size_t topk);

double jaccard(std::span<const std::string> a, std::span<const std::string> b);

/// MRR with missing ranks counted as 0, MR over found queries, and Top-k
/// recall for each k. Throws EmptyBatch.
RankingReport ranking_metrics(std::span<const std::optional<int>> per_query_ranks, std::span<const int> ks);

/// Position (1-based) of the first hit in `relevant`, if any.
std::optional<int> first_relevant_rank(std::span<const SearchHit> hits, std::span<const std::string> relevant);

std::string ranking_report_csv(const RankingReport& report);

} // namespace fcr
