#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fcr/error.hpp"
#include "fcr/similarity.hpp"
#include "test_support.hpp"

using namespace fcr;
using test_support::bundled_annotations;
using test_support::bundled_corpus;

namespace {

// Textbook dynamic program over the full table.
std::size_t levenshtein_oracle(const std::string& a, const std::string& b) {
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

int partial_ratio_oracle(const std::string& a, const std::string& b) {
    const std::string& s = a.size() <= b.size() ? a : b;
    const std::string& t = a.size() <= b.size() ? b : a;
    if (s.empty()) return t.empty() ? 100 : 0;
    int best = 0;
    for (std::size_t start = 0; start + s.size() <= t.size(); ++start) {
        const double dist = static_cast<double>(levenshtein_oracle(s, t.substr(start, s.size())));
        best = std::max(best, static_cast<int>(std::floor(100.0 * (1.0 - dist / s.size()) + 0.5)));
    }
    return best;
}

std::string random_string(std::mt19937_64& rng, std::size_t max_len) {
    std::string s(rng() % (max_len + 1), ' ');
    for (char& c : s) c = "abc=\\{}"[rng() % 7];
    return s;
}

SimilarityMatrix matrix_of(std::vector<std::string> labels, std::vector<double> values) {
    SimilarityMatrix m;
    m.labels = std::move(labels);
    m.values = std::move(values);
    return m;
}

} // namespace

TEST_CASE("cosine examples") {
    const std::vector<double> v{0.3, -2.0, 5.0};
    CHECK(cosine(v, v) == doctest::Approx(1.0));
    CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
    CHECK(cosine(std::vector<double>{1, 1}, std::vector<double>{1, 0}) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 0}) == 0.0);
    CHECK_THROWS_AS(cosine(std::vector<double>{1}, std::vector<double>{1, 0}), Error);
}

TEST_CASE("partial ratio examples") {
    CHECK(partial_ratio("abc", "abc") == 100);
    CHECK(partial_ratio("abc", "xxabcxx") == 100);
    CHECK(partial_ratio("xxabcxx", "abc") == 100);
    CHECK(partial_ratio("abcd", "abXd") == 75);
    CHECK(partial_ratio("", "") == 100);
    CHECK(partial_ratio("", "a") == 0);
}

TEST_CASE("levenshtein and partial ratio agree with brute force") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = random_string(rng, 9);
        const auto b = random_string(rng, 14);
        REQUIRE(levenshtein(a, b) == levenshtein_oracle(a, b));
        REQUIRE(partial_ratio(a, b) == partial_ratio_oracle(a, b));
        REQUIRE(partial_ratio(a, b) == partial_ratio(b, a));
    }
}

TEST_CASE("qid overlap") {
    const auto& corpus = bundled_corpus();
    const auto& ann = bundled_annotations();
    CHECK(qid_overlap(corpus[0], corpus[0], ann) == 7);

    AnnotationMap m;
    Formula a{.id = "a", .latex = "x=y"};
    Formula b{.id = "b", .latex = "u=v"};
    m.add("a", "x", "x", "Q1");
    m.add("a", "y", "y", "Q2");
    m.add("b", "u", "u", "Q3");
    m.add("b", "v", "v", "Q4");
    CHECK(qid_overlap(a, b, m) == 0);

    Formula c{.id = "c", .latex = "z=1"};
    CHECK_THROWS_AS(qid_overlap(a, c, m), Error);
}

TEST_CASE("qid overlap of two KGE variants under a shared resolution") {
    // psi, t, \partial and \nabla resolve identically; c and m resolve differently.
    Formula a{.id = "a", .latex = "\\partial_t^2 \\psi - c^2 \\nabla^2 \\psi = 0"};
    Formula b{.id = "b", .latex = "\\partial_t^2 \\psi - \\nabla^2 \\psi + m^2 \\psi = 0"};
    AnnotationMap m;
    for (const auto* id : {"a", "b"}) {
        m.add(id, "\\psi", "wave function", "Q2362761");
        m.add(id, "t", "time", "Q11471");
        m.add(id, "\\partial", "partial derivative", "Q186475");
        m.add(id, "\\nabla", "nabla", "Q334508");
    }
    m.add("a", "c", "speed of light", "Q2111");
    m.add("b", "m", "mass", "Q11423");
    CHECK(qid_overlap(a, b, m) == 4);
}

TEST_CASE("single-formula fuzzy matrix") {
    const std::vector<Formula> one{bundled_corpus()[5]};
    const auto m = similarity_matrix(one, Measure::Fuzzy);
    CHECK(m.size() == 1);
    CHECK(m.at(0, 0) == 100.0);
}

TEST_CASE("similarity matrices need their inputs") {
    CHECK_THROWS_AS(similarity_matrix(bundled_corpus(), Measure::QidOverlap), Error);
    CHECK_THROWS_AS(similarity_matrix(bundled_corpus(), Measure::CosineTfidf), Error);
}

TEST_CASE("fuzzy matrix over the three-class subset") {
    const auto corpus = test_support::subset30();
    const auto m = similarity_matrix(corpus, Measure::Fuzzy);
    REQUIRE(m.size() == 30);
    for (std::size_t i = 0; i < 30; ++i) {
        CHECK(m.at(i, i) == 100.0);
        for (std::size_t j = 0; j < 30; ++j) {
            CHECK(m.at(i, j) == m.at(j, i));
            CHECK(m.at(i, j) == partial_ratio(canonical_latex(corpus[i].latex), canonical_latex(corpus[j].latex)));
        }
    }
    double efe = 0.0;
    for (std::size_t i = 10; i < 20; ++i) {
        for (std::size_t j = 10; j < 20; ++j) {
            if (i != j) efe += m.at(i, j);
        }
    }
    CHECK(efe / 90.0 > off_diagonal_mean(m));
}

TEST_CASE("assignment by summed similarity") {
    SimilarityMatrix m;
    m.labels = {"a", "b", "c", "d"};
    // Row 0 is close to c and d (class y) only through one strong link each.
    m.values = {1.0, 0.1, 0.5, 0.5,
                0.1, 1.0, 0.2, 0.2,
                0.5, 0.2, 1.0, 0.9,
                0.5, 0.2, 0.9, 1.0};
    const std::vector<std::string> labels{"x", "x", "y", "y"};
    CHECK(assign_by_similarity(m, labels) == std::vector<std::string>{"y", "y", "y", "y"});

    // The diagonal is ignored: a singleton class never attracts its own member.
    const std::vector<std::string> singleton{"x", "z", "y", "y"};
    CHECK(assign_by_similarity(m, singleton)[1] == "y");
    CHECK_THROWS_AS(assign_by_similarity(m, std::vector<std::string>{"x"}), Error);
}

TEST_CASE("fuzzy assignment recovers the three classes") {
    const auto corpus = test_support::subset30();
    const auto labels = test_support::labels_of(corpus);
    const auto predicted = assign_by_similarity(similarity_matrix(corpus, Measure::Fuzzy), labels);
    int correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) correct += predicted[i] == labels[i];
    CHECK(correct >= 26);
}

TEST_CASE("content tfidf cosine over the full corpus") {
    const auto& corpus = bundled_corpus();
    const auto space = build_encoding_space(corpus, bundled_annotations(), {Axis::Content, Method::Tfidf});
    const SimilarityInputs inputs{.space = &space};
    const auto m = similarity_matrix(corpus, Measure::CosineTfidf, inputs);
    CHECK(m.size() == 100);
    CHECK(m.at(3, 3) == doctest::Approx(1.0));
    CHECK(m.at(3, 40) == doctest::Approx(cosine(space.vectors[3], space.vectors[40])));
    const double mean = off_diagonal_mean(m);
    CHECK(mean >= 0.1);
    CHECK(mean <= 0.3);

    const auto pooled = class_pooled_matrix(m, test_support::labels_of(corpus));
    CHECK(pooled.size() == 10);
    CHECK(pooled.labels.front() == "KGE");
}

TEST_CASE("class pooling of a block-constant matrix") {
    const std::vector<std::string> labels{"A", "A", "B", "B", "B"};
    SimilarityMatrix m = matrix_of({"1", "2", "3", "4", "5"}, std::vector<double>(25));
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) m.at(i, j) = i == j ? 1.0 : (labels[i] == labels[j] ? 0.9 : 0.1);
    }
    const auto pooled = class_pooled_matrix(m, labels);
    CHECK(pooled.labels == std::vector<std::string>{"A", "B"});
    CHECK(pooled.at(0, 0) == doctest::Approx(0.9));
    CHECK(pooled.at(1, 1) == doctest::Approx(0.9));
    CHECK(pooled.at(0, 1) == doctest::Approx(0.1));
    CHECK(pooled.at(1, 0) == doctest::Approx(0.1));
}

TEST_CASE("a singleton class keeps its diagonal") {
    const auto m = matrix_of({"x", "y"}, {0.7, 0.2, 0.2, 0.4});
    const auto pooled = class_pooled_matrix(m, std::vector<std::string>{"P", "Q"});
    CHECK(pooled.at(0, 0) == doctest::Approx(0.7));
    CHECK(pooled.at(1, 1) == doctest::Approx(0.4));
    CHECK(pooled.at(0, 1) == doctest::Approx(0.2));
}

TEST_CASE("sorting by row mean") {
    const auto sorted = matrix_of({"a", "b", "c"}, {3, 2, 2, 2, 2, 1, 2, 1, 1});
    CHECK(sort_matrix(sorted).permutation == std::vector<std::size_t>{0, 1, 2});

    const auto reversed = matrix_of({"a", "b", "c"}, {1, 1, 2, 1, 2, 2, 2, 2, 3});
    const auto out = sort_matrix(reversed);
    CHECK(out.permutation == std::vector<std::size_t>{2, 1, 0});
    CHECK(out.labels == std::vector<std::string>{"c", "b", "a"});
    CHECK(out.at(0, 0) == 3);
    CHECK(out.at(2, 0) == 2);
}

TEST_CASE("sorting agrees with an independent sort of row means") {
    const auto& corpus = bundled_corpus();
    const auto space = build_encoding_space(corpus, bundled_annotations(), {Axis::Content, Method::Tfidf});
    const SimilarityInputs inputs{.space = &space};
    const auto m = similarity_matrix(corpus, Measure::CosineTfidf, inputs);
    const auto out = sort_matrix(m);

    std::vector<double> means(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) means[i] += m.at(i, j);
        means[i] /= static_cast<double>(m.size());
    }
    std::vector<std::size_t> order(m.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return means[a] > means[b]; });
    CHECK(out.permutation == order);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) REQUIRE(out.at(i, j) == m.at(order[i], order[j]));
    }
}

TEST_CASE("matrix csv") {
    const auto m = matrix_of({"a", "b,c"}, {1, 0.5, 0.5, 1});
    const auto csv = matrix_to_csv(m);
    CHECK(csv.rfind("label,a,\"b,c\"\n", 0) == 0);
    CHECK(csv.find("\"b,c\",0.5,1\n") != std::string::npos);
}
