// Runs the ten acceptance criteria against the bundled corpus and prints one
// PASS/FAIL line per criterion. Criterion numbers given as arguments restrict
// the run to those. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "fcr/encoding.hpp"
#include "fcr/learn.hpp"
#include "fcr/search.hpp"
#include "fcr/similarity.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fcr;
using test_support::bundled_annotations;
using test_support::bundled_corpus;
using test_support::labels_of;
using test_support::subset30;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

EncodingSpace content_tfidf(const std::vector<Formula>& corpus, std::uint64_t seed = kSeed) {
    EncodingOptions options;
    options.seed = seed;
    return build_encoding_space(corpus, bundled_annotations(), {Axis::Content, Method::Tfidf}, options);
}

Outcome classification() {
    const auto& corpus = bundled_corpus();
    const auto accuracy = cross_validate(content_tfidf(corpus).vectors, labels_of(corpus), 10, kSeed);
    return {accuracy >= 0.80, fmt("10-fold accuracy %.4f (need >= 0.80)", accuracy)};
}

Outcome clustering() {
    const auto corpus = subset30();
    const auto labels = labels_of(corpus);
    const auto report = kmeans(content_tfidf(corpus).vectors, 3, kSeed);
    const auto consistent = majority_consistent(report.assignments, labels);
    const auto p = purity(report.assignments, labels);
    return {consistent >= 27 && p >= 0.90, fmt("%zu/30 majority-consistent, purity %.4f (need >= 27, >= 0.90)", consistent, p)};
}

Outcome fuzzy_assignment() {
    const auto corpus = subset30();
    const auto labels = labels_of(corpus);
    const auto predicted = assign_by_similarity(similarity_matrix(corpus, Measure::Fuzzy), labels);
    int correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) correct += predicted[i] == labels[i];
    return {correct >= 26, fmt("%d/30 assigned to their own class (need >= 26)", correct)};
}

Outcome mean_similarity() {
    const auto& corpus = bundled_corpus();
    const auto space = content_tfidf(corpus);
    SimilarityInputs inputs;
    inputs.space = &space;
    const auto mean = off_diagonal_mean(similarity_matrix(corpus, Measure::CosineTfidf, inputs));
    return {mean >= 0.1 && mean <= 0.3, fmt("mean off-diagonal cosine %.4f (need 0.2 +/- 0.1)", mean)};
}

Outcome block_structure() {
    const auto corpus = subset30();
    const auto m = similarity_matrix(corpus, Measure::Fuzzy);
    double block = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (std::size_t j = 0; j < corpus.size(); ++j) {
            if (i != j && corpus[i].label == "EFE" && corpus[j].label == "EFE") {
                block += m.at(i, j);
                ++cells;
            }
        }
    }
    block /= cells;
    const auto global = off_diagonal_mean(m);
    return {block > global, fmt("EFE block mean %.2f, global mean %.2f", block, global)};
}

Outcome retrieval() {
    const auto& corpus = bundled_corpus();
    const auto index = build_index(corpus);
    const std::vector<int> ks{1, 10};
    std::vector<std::optional<int>> self_ranks, cross_ranks;
    for (const auto& f : corpus) {
        const auto hits = query_by_latex(index, f.latex, corpus.size());
        const std::vector<std::string> self{f.id};
        self_ranks.push_back(first_relevant_rank(hits, self));
        std::vector<std::string> others;
        for (const auto& g : corpus) {
            if (g.label == f.label && g.id != f.id) others.push_back(g.id);
        }
        cross_ranks.push_back(first_relevant_rank(hits, others));
    }
    const auto self = ranking_metrics(self_ranks, ks);
    const auto cross = ranking_metrics(cross_ranks, ks);
    const double top1 = self.topk_recall.at(1);
    const double mrr = self.mrr;
    const double top10 = cross.topk_recall.at(10);
    return {top1 == 1.0 && mrr == 1.0 && top10 >= 0.60,
            fmt("self Top1 %.4f MRR %.4f; cross Top10 %.4f (need 1, 1, >= 0.60)", top1, mrr, top10)};
}

Outcome metric_oracles() {
    const std::map<std::string, oracles::Tally> tallies{
        {"ranking_metrics", oracles::check_ranking_metrics(500, 701)},
        {"purity", oracles::check_purity(500, 702)},
        {"jaccard", oracles::check_jaccard(500, 703)},
        {"partial_ratio", oracles::check_partial_ratio(500, 704)},
        {"duplicates", oracles::check_duplicates(500, 705)},
    };
    bool pass = true;
    std::string detail;
    for (const auto& [name, t] : tallies) {
        pass = pass && t.ok() && t.instances >= 500;
        detail += fmt("%s %d/%d", name.c_str(), t.instances - t.mismatches, t.instances);
        if (!t.ok()) detail += " (" + t.first_failure + ")";
        detail += "; ";
    }
    detail.resize(detail.size() - 2);
    return {pass, detail};
}

Outcome sweep_trends() {
    const auto& corpus = bundled_corpus();
    const std::vector<EncodingSpace> spaces{content_tfidf(corpus)};
    const auto evaluation = subset_evaluation(corpus, spaces, 3, 10, kSeed);
    const EncodingKind kind{Axis::Content, Method::Tfidf};
    std::map<int, double> purity_at, accuracy_at;
    for (const auto& row : evaluation.rows) {
        (row.metric == "purity" ? purity_at : accuracy_at)[row.classes] = row.mean.at(kind);
    }
    double lo = 1.0, hi = 0.0;
    for (const auto& [n, a] : accuracy_at) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    const bool pass = purity_at.at(10) < purity_at.at(3) && hi - lo < 0.10;
    return {pass, fmt("purity N=3 %.4f -> N=10 %.4f; accuracy range %.4f..%.4f (spread %.4f, need < 0.10)",
                      purity_at.at(3), purity_at.at(10), lo, hi, hi - lo)};
}

Outcome encoding_ordinal() {
    const auto corpus = subset30();
    int wins = 0;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        EncodingOptions options;
        options.seed = seed;
        std::map<EncodingKind, double> distance;
        for (const auto& kind : all_encoding_kinds()) {
            const auto space = build_encoding_space(corpus, bundled_annotations(), kind, options);
            const auto report = kmeans(space.vectors, 3, seed);
            distance[kind] = centroid_mean_distance(pca2(space.vectors), report.assignments);
        }
        const EncodingKind content_embed{Axis::Content, Method::Embedding};
        EncodingKind best = content_embed;
        for (const auto& [kind, d] : distance) {
            if (d > distance[best]) best = kind;
        }
        wins += best == content_embed;
        detail += fmt("%s%.2f/%s=%.2f", seed == 1 ? "" : " ", distance[content_embed], to_string(best).c_str(),
                      distance[best]);
    }
    return {wins >= 7, fmt("content-embed largest in %d/10 seeds (need >= 7); per seed content-embed/best: ", wins) + detail};
}

Outcome determinism() {
    const auto corpus = subset30();
    const auto labels = labels_of(corpus);
    std::vector<std::string> differing;

    EncodingOptions options;
    options.seed = 7;
    const EncodingKind embed{Axis::Content, Method::Embedding};
    const auto e1 = build_encoding_space(corpus, bundled_annotations(), embed, options);
    const auto e2 = build_encoding_space(corpus, bundled_annotations(), embed, options);
    if (e1.vectors != e2.vectors || e1.embedding->token_vectors != e2.embedding->token_vectors) {
        differing.push_back("embedding");
    }

    const auto vectors = content_tfidf(corpus).vectors;
    const auto k1 = kmeans(vectors, 3, 7);
    const auto k2 = kmeans(vectors, 3, 7);
    if (k1.assignments != k2.assignments || k1.wcss_trace != k2.wcss_trace) differing.push_back("k-means");

    const auto s1 = train_svm(vectors, labels, {}, 7);
    const auto s2 = train_svm(vectors, labels, {}, 7);
    if (s1.classes != s2.classes || s1.weights != s2.weights) differing.push_back("svm");
    if (cross_validate(vectors, labels, 5, 7) != cross_validate(vectors, labels, 5, 7)) differing.push_back("cv");

    if (stratified_folds(labels, 10, 7) != stratified_folds(labels, 10, 7)) differing.push_back("folds");

    std::string detail = "embedding, k-means, svm, cv, folds identical across two runs";
    if (!differing.empty()) {
        detail = "differs:";
        for (const auto& d : differing) detail += " " + d;
    }
    return {differing.empty(), detail};
}

struct Criterion {
    int number;
    const char* name;
    double time_limit; // seconds; 0 when the criterion sets none
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "classification accuracy", 30, classification},
        {2, "three-class clustering", 5, clustering},
        {3, "fuzzy concept assignment", 5, fuzzy_assignment},
        {4, "mean pairwise similarity", 0, mean_similarity},
        {5, "similarity block structure", 0, block_structure},
        {6, "search retrieval", 0, retrieval},
        {7, "metric oracles", 0, metric_oracles},
        {8, "subset sweep trends", 180, sweep_trends},
        {9, "content embedding separation", 0, encoding_ordinal},
        {10, "determinism", 0, determinism},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0, ran = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.contains(c.number)) continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0 && seconds >= c.time_limit) {
            outcome.pass = false;
            outcome.detail += fmt("; exceeded %.0f s", c.time_limit);
        }
        failures += !outcome.pass;
        std::printf("%s C%-2d %-30s %s [%.2f s]\n", outcome.pass ? "PASS" : "FAIL", c.number, c.name,
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
    return failures;
}
