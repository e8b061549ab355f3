#pragma once

// Brute-force reference implementations and randomized agreement checks,
// shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "fcr/discovery.hpp"
#include "fcr/learn.hpp"
#include "fcr/search.hpp"
#include "fcr/similarity.hpp"

namespace oracles {

struct Tally {
    int instances = 0;
    int mismatches = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++instances;
        if (!ok && mismatches++ == 0) first_failure = what;
    }
    bool ok() const { return mismatches == 0; }
};

inline bool close(double a, double b) { return std::abs(a - b) <= 1e-9; }

// -- partial ratio ----------------------------------------------------------

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
        }
    }
    return d[a.size()][b.size()];
}

inline int partial_ratio(const std::string& a, const std::string& b) {
    const std::string& s = a.size() <= b.size() ? a : b;
    const std::string& t = a.size() <= b.size() ? b : a;
    if (s.empty()) return t.empty() ? 100 : 0;
    int best = 0;
    for (std::size_t start = 0; start + s.size() <= t.size(); ++start) {
        const double dist = static_cast<double>(edit_distance(s, t.substr(start, s.size())));
        best = std::max(best, static_cast<int>(std::floor(100.0 * (1.0 - dist / s.size()) + 0.5)));
    }
    return best;
}

inline std::string random_text(std::mt19937_64& rng, std::size_t max_len, const std::string& alphabet) {
    std::string s(rng() % (max_len + 1), ' ');
    for (char& c : s) c = alphabet[rng() % alphabet.size()];
    return s;
}

inline Tally check_partial_ratio(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (int i = 0; i < n; ++i) {
        const auto a = random_text(rng, 10, "ab=\\{}");
        const auto b = random_text(rng, 16, "ab=\\{}");
        t.record(fcr::partial_ratio(a, b) == partial_ratio(a, b), "partial_ratio(" + a + ", " + b + ")");
    }
    return t;
}

// -- ranking metrics ---------------------------------------------------------

struct Ranking {
    double mrr;
    std::optional<double> mr;
    std::map<int, double> topk;
};

inline Ranking ranking(const std::vector<std::optional<int>>& ranks, const std::vector<int>& ks) {
    Ranking r{0.0, std::nullopt, {}};
    std::vector<int> found;
    for (const auto& x : ranks) {
        if (x) found.push_back(*x);
    }
    for (int x : found) r.mrr += 1.0 / x;
    r.mrr /= static_cast<double>(ranks.size());
    if (!found.empty()) {
        double s = 0;
        for (int x : found) s += x;
        r.mr = s / static_cast<double>(found.size());
    }
    for (int k : ks) {
        int within = 0;
        for (int x : found) within += x <= k ? 1 : 0;
        r.topk[k] = static_cast<double>(within) / static_cast<double>(ranks.size());
    }
    return r;
}

inline Tally check_ranking_metrics(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::vector<int> ks{1, 3, 10};
    Tally t;
    for (int i = 0; i < n; ++i) {
        std::vector<std::optional<int>> ranks(1 + rng() % 12);
        for (auto& r : ranks) {
            if (rng() % 4 != 0) r = 1 + static_cast<int>(rng() % 15);
        }
        const auto got = fcr::ranking_metrics(ranks, ks);
        const auto want = ranking(ranks, ks);
        bool ok = close(got.mrr, want.mrr) && got.mr.has_value() == want.mr.has_value();
        if (ok && got.mr) ok = close(*got.mr, *want.mr);
        for (int k : ks) ok = ok && close(got.topk_recall.at(k), want.topk.at(k));
        t.record(ok, "ranking instance " + std::to_string(i));
    }
    return t;
}

// -- purity ---------------------------------------------------------------------

inline double purity(const std::vector<int>& assignments, const std::vector<std::string>& labels) {
    std::vector<int> clusters = assignments;
    std::sort(clusters.begin(), clusters.end());
    clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
    double sum = 0.0;
    for (int c : clusters) {
        std::size_t size = 0, best = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (assignments[i] != c) continue;
            ++size;
            std::size_t same = 0;
            for (std::size_t j = 0; j < labels.size(); ++j) same += assignments[j] == c && labels[j] == labels[i];
            best = std::max(best, same);
        }
        sum += static_cast<double>(best) / static_cast<double>(size);
    }
    return sum / static_cast<double>(clusters.size());
}

inline Tally check_purity(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (int i = 0; i < n; ++i) {
        const std::size_t size = 1 + rng() % 20;
        std::vector<int> assignments(size);
        std::vector<std::string> labels(size);
        for (std::size_t j = 0; j < size; ++j) {
            assignments[j] = static_cast<int>(rng() % 5);
            labels[j] = std::string(1, static_cast<char>('A' + rng() % 4));
        }
        t.record(close(fcr::purity(assignments, labels), purity(assignments, labels)), "purity instance " + std::to_string(i));
    }
    return t;
}

// -- Jaccard scoring ---------------------------------------------------------------

inline double jaccard(std::vector<std::string> a, std::vector<std::string> b) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<std::string> both, either;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(either));
    return either.empty() ? 0.0 : static_cast<double>(both.size()) / static_cast<double>(either.size());
}

// Every indexed formula scored, zero scores dropped, ordered by score, then
// intersection, then id.
inline std::vector<fcr::SearchHit> constituent_search(const std::vector<fcr::Formula>& corpus,
                                                      const std::vector<std::string>& query) {
    std::vector<std::tuple<double, std::size_t, std::string>> scored;
    for (const auto& f : corpus) {
        const auto tokens = fcr::constituents_of(f).content_tokens();
        const double s = jaccard(query, tokens);
        if (s <= 0.0) continue;
        std::size_t inter = 0;
        std::vector<std::string> uq = query;
        std::sort(uq.begin(), uq.end());
        uq.erase(std::unique(uq.begin(), uq.end()), uq.end());
        for (const auto& x : uq) inter += std::find(tokens.begin(), tokens.end(), x) != tokens.end();
        scored.emplace_back(-s, inter, f.id);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });
    std::vector<fcr::SearchHit> hits;
    for (const auto& [neg, inter, id] : scored) hits.push_back({id, -neg});
    return hits;
}

inline std::vector<fcr::Formula> random_formulas(std::mt19937_64& rng, std::size_t count) {
    static const std::vector<std::string> pieces{"x", "y", "a", "b", "=", "+", "-", "\\psi", "\\partial", "m", "c"};
    std::vector<fcr::Formula> out;
    for (std::size_t i = 0; i < count; ++i) {
        fcr::Formula f;
        f.id = "f" + std::to_string(i);
        const std::size_t len = 1 + rng() % 6;
        for (std::size_t j = 0; j < len; ++j) f.latex += pieces[rng() % pieces.size()] + " ";
        f.doc_id = "d" + std::to_string(rng() % 4);
        out.push_back(f);
    }
    return out;
}

inline Tally check_jaccard(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    static const std::vector<std::string> alphabet{"x", "y", "a", "b", "=", "+", "-", "\\psi", "\\partial", "m", "c"};
    Tally t;
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> a(rng() % 6), b(rng() % 6);
        for (auto& x : a) x = alphabet[rng() % alphabet.size()];
        for (auto& x : b) x = alphabet[rng() % alphabet.size()];
        bool ok = close(fcr::jaccard(a, b), jaccard(a, b));

        const auto corpus = random_formulas(rng, 1 + rng() % 8);
        std::vector<std::string> query(1 + rng() % 4);
        for (auto& x : query) x = alphabet[rng() % alphabet.size()];
        fcr::ConstituentSet cs;
        for (const auto& x : query) {
            const bool op = x == "=" || x == "+" || x == "-" || x == "\\partial";
            cs.tokens.push_back({op ? fcr::TokenKind::Operator : fcr::TokenKind::Identifier, x});
        }
        const auto index = fcr::build_index(corpus);
        const auto got = fcr::query_by_constituents(index, cs, corpus.size());
        const auto want = constituent_search(corpus, query);
        ok = ok && got.size() == want.size();
        for (std::size_t j = 0; ok && j < got.size(); ++j) ok = got[j].id == want[j].id && close(got[j].score, want[j].score);
        t.record(ok, "jaccard instance " + std::to_string(i));
    }
    return t;
}

// -- duplicate ranking ----------------------------------------------------------

inline std::vector<fcr::DuplicateRecord> duplicates(const std::vector<fcr::Formula>& corpus, const fcr::KnnConfig& config) {
    std::vector<fcr::DuplicateRecord> out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto key = fcr::canonical_latex(corpus[i].latex);
        bool seen = false;
        for (std::size_t j = 0; j < i; ++j) seen = seen || fcr::canonical_latex(corpus[j].latex) == key;
        if (seen) continue;
        std::size_t count = 0;
        std::vector<std::string> docs;
        for (const auto& f : corpus) {
            if (fcr::canonical_latex(f.latex) != key) continue;
            ++count;
            if (std::find(docs.begin(), docs.end(), f.doc_id) == docs.end()) docs.push_back(f.doc_id);
        }
        if (key.size() < config.min_len || key.size() > config.max_len || docs.size() < config.min_docs) continue;
        out.push_back({key, count, docs.size(), corpus[i].id});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::make_tuple(b.count, b.documents, a.latex) < std::make_tuple(a.count, a.documents, b.latex);
    });
    return out;
}

inline Tally check_duplicates(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (int i = 0; i < n; ++i) {
        const std::size_t pool_size = 1 + rng() % 5;
        const auto pool = random_formulas(rng, pool_size);
        std::vector<fcr::Formula> corpus;
        const std::size_t size = 1 + rng() % 15;
        for (std::size_t j = 0; j < size; ++j) {
            auto f = pool[rng() % pool.size()];
            f.id = "g" + std::to_string(j);
            f.doc_id = "d" + std::to_string(rng() % 4);
            corpus.push_back(f);
        }
        fcr::KnnConfig config;
        config.min_len = rng() % 6;
        config.max_len = config.min_len + rng() % 20;
        config.min_docs = 1 + rng() % 3;
        t.record(fcr::rank_duplicates(corpus, config) == duplicates(corpus, config),
                 "duplicate instance " + std::to_string(i));
    }
    return t;
}

} // namespace oracles
