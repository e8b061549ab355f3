#include "fcr/search.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fcr/encoding.hpp"
#include "fcr/error.hpp"
#include "fcr/similarity.hpp"

namespace fcr {

namespace {

void truncate(std::vector<SearchHit>& hits, std::size_t topk) {
    if (hits.size() > topk) hits.resize(topk);
}

} // namespace

const Formula& SearchIndex::formula(const std::string& id) const {
    auto it = formulas_.find(id);
    if (it == formulas_.end()) throw Error(ErrorCode::UnknownFormula, "formula '" + id + "' is not indexed");
    return it->second;
}

std::vector<std::string> SearchIndex::exact(std::string_view latex) const {
    auto it = by_latex_.find(canonical_latex(latex));
    return it == by_latex_.end() ? std::vector<std::string>{} : it->second;
}

const std::vector<std::string>& SearchIndex::postings(const std::string& token) const {
    static const std::vector<std::string> none;
    auto it = by_constituent_.find(token);
    return it == by_constituent_.end() ? none : it->second;
}

SearchIndex build_index(std::span<const Formula> corpus, const TokenClassTable& table) {
    SearchIndex index;
    for (const auto& f : corpus) {
        if (!index.formulas_.emplace(f.id, f).second) {
            throw Error(ErrorCode::DuplicateId, "formula id '" + f.id + "' occurs twice");
        }
        index.order_.push_back(f.id);
        const auto canonical = canonical_latex(f.latex);
        index.canonical_[f.id] = canonical;
        index.by_latex_[canonical].push_back(f.id);
        auto unique = constituents_of(f, table).unique_content_tokens();
        for (const auto& token : unique) index.by_constituent_[token].push_back(f.id);
        index.unique_[f.id] = std::move(unique);
    }
    for (auto& [key, ids] : index.by_latex_) std::sort(ids.begin(), ids.end());
    for (auto& [key, ids] : index.by_constituent_) std::sort(ids.begin(), ids.end());
    return index;
}

std::vector<SearchHit> query_by_latex(const SearchIndex& index, std::string_view latex, std::size_t topk) {
    const auto query = canonical_latex(latex);
    if (query.empty()) throw Error(ErrorCode::EmptyQuery, "empty LaTeX query");

    struct Scored {
        SearchHit hit;
        bool exact;
        std::size_t length;
    };
    std::vector<Scored> scored;
    for (const auto& id : index.ids()) {
        const auto& candidate = index.canonical(id);
        const bool exact = candidate == query;
        scored.push_back({{id, exact ? 100.0 : static_cast<double>(partial_ratio(query, candidate))}, exact,
                          candidate.size()});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.exact != b.exact) return a.exact;
        if (a.hit.score != b.hit.score) return a.hit.score > b.hit.score;
        if (a.length != b.length) return a.length < b.length;
        return a.hit.id < b.hit.id;
    });
    std::vector<SearchHit> hits;
    for (auto& s : scored) hits.push_back(std::move(s.hit));
    truncate(hits, topk);
    return hits;
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
    const std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::size_t shared = 0;
    for (const auto& x : sa) shared += sb.count(x);
    const std::size_t total = sa.size() + sb.size() - shared;
    return total == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(total);
}

std::vector<SearchHit> query_by_constituents(const SearchIndex& index, const ConstituentSet& query, std::size_t topk) {
    const auto q = query.unique_content_tokens();
    if (q.empty()) throw Error(ErrorCode::EmptyQuery, "query has no operators or identifiers");

    // Only formulas sharing a token can score above zero.
    std::map<std::string, std::size_t> shared;
    for (const auto& token : q) {
        for (const auto& id : index.postings(token)) ++shared[id];
    }
    struct Scored {
        SearchHit hit;
        std::size_t intersection;
    };
    std::vector<Scored> scored;
    for (const auto& [id, inter] : shared) {
        const std::size_t uni = q.size() + index.unique_constituents(id).size() - inter;
        scored.push_back({{id, static_cast<double>(inter) / static_cast<double>(uni)}, inter});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.hit.score != b.hit.score) return a.hit.score > b.hit.score;
        if (a.intersection != b.intersection) return a.intersection > b.intersection;
        return a.hit.id < b.hit.id;
    });
    std::vector<SearchHit> hits;
    for (auto& s : scored) hits.push_back(std::move(s.hit));
    truncate(hits, topk);
    return hits;
}

RankingReport ranking_metrics(std::span<const std::optional<int>> per_query_ranks, std::span<const int> ks) {
    if (per_query_ranks.empty()) throw Error(ErrorCode::EmptyBatch, "no queries to score");
    RankingReport report;
    report.per_query_ranks.assign(per_query_ranks.begin(), per_query_ranks.end());
    double reciprocal = 0.0, rank_sum = 0.0;
    std::size_t found = 0;
    for (const auto& rank : per_query_ranks) {
        if (!rank) continue;
        if (*rank < 1) throw Error(ErrorCode::InvalidConfig, "ranks start at 1");
        reciprocal += 1.0 / *rank;
        rank_sum += *rank;
        ++found;
    }
    const double n = static_cast<double>(per_query_ranks.size());
    report.mrr = reciprocal / n;
    if (found > 0) report.mr = rank_sum / static_cast<double>(found);
    for (int k : ks) {
        const auto hits = std::count_if(per_query_ranks.begin(), per_query_ranks.end(),
                                        [k](const auto& r) { return r && *r <= k; });
        report.topk_recall[k] = static_cast<double>(hits) / n;
    }
    return report;
}

std::optional<int> first_relevant_rank(std::span<const SearchHit> hits, std::span<const std::string> relevant) {
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (std::find(relevant.begin(), relevant.end(), hits[i].id) != relevant.end()) return static_cast<int>(i + 1);
    }
    return std::nullopt;
}

std::string ranking_report_csv(const RankingReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "queries,MR,MRR";
    for (const auto& [k, v] : report.topk_recall) out << ",Top" << k;
    out << '\n' << report.per_query_ranks.size() << ',';
    if (report.mr) out << *report.mr;
    out << ',' << report.mrr;
    for (const auto& [k, v] : report.topk_recall) out << ',' << v;
    out << '\n';
    return out.str();
}

} // namespace fcr
