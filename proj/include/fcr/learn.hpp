#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fcr/corpus_model.hpp"
#include "fcr/encoding.hpp"

namespace fcr {

using Point2 = std::array<double, 2>;

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

/// Centered data projected on the two leading covariance eigenvectors. Each
/// component is oriented so that its largest-magnitude coordinate is positive.
/// Throws DegenerateData for fewer than two points, fewer than two dimensions
/// or zero variance.
std::vector<Point2> pca2(std::span<const Vector> vectors);

// ---------------------------------------------------------------------------
// Clustering
// ---------------------------------------------------------------------------

struct KmeansParams {
    std::size_t max_iterations = 300;
    std::size_t restarts = 50; // best of this many seeded k-means++ runs, by final WCSS
};

/// k-means++ seeding, then Lloyd steps until the assignment stops changing.
/// An emptied cluster is re-seeded at the point farthest from its centroid.
/// Throws TooManyClusters when k > n, EmptyInput when n == 0.
ClusterReport kmeans(std::span<const Vector> vectors, int k, std::uint64_t seed, const KmeansParams& params = {});

/// Unweighted mean over non-empty clusters of the dominant label's share.
/// Throws EmptyInput.
double purity(std::span<const int> assignments, std::span<const std::string> labels);

/// Mean Euclidean distance over unordered pairs of cluster centroids.
/// Throws Undefined with fewer than two non-empty clusters.
double centroid_mean_distance(std::span<const Point2> points, std::span<const int> assignments);

/// Points correctly placed when every cluster predicts its majority label.
std::size_t majority_consistent(std::span<const int> assignments, std::span<const std::string> labels);

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

struct SvmParams {
    double lambda = 1e-3;
    std::size_t epochs = 200;
};

/// One-vs-rest linear SVMs. The bias is folded in as a constant feature.
struct SvmModel {
    std::vector<std::string> classes; // sorted
    std::vector<Vector> weights;      // per class, dimension + 1 (last entry is the bias)
    SvmParams params;
    std::uint64_t seed = 0;

    std::vector<double> margins(std::span<const double> x) const;
    /// Largest margin; ties go to the lexicographically smallest label.
    const std::string& predict(std::span<const double> x) const;
};

/// Pegasos-style stochastic subgradient descent on the hinge loss.
/// Throws DegenerateLabels for fewer than two classes, DimensionMismatch for
/// ragged input.
SvmModel train_svm(std::span<const Vector> vectors, std::span<const std::string> labels, const SvmParams& params,
                   std::uint64_t seed);

/// Fold index of every sample; each class is shuffled and dealt round-robin.
/// Throws StratificationError when a class has fewer members than folds.
std::vector<int> stratified_folds(std::span<const std::string> labels, int folds, std::uint64_t seed);

/// Mean accuracy over stratified folds.
double cross_validate(std::span<const Vector> vectors, std::span<const std::string> labels, int folds,
                      std::uint64_t seed, const SvmParams& params = {});

// ---------------------------------------------------------------------------
// Class-subset sweep
// ---------------------------------------------------------------------------

struct SubsetRow {
    int classes = 0;
    std::size_t choices = 0;
    std::string metric; // "accuracy" or "purity"
    std::map<EncodingKind, double> mean;
};

struct SubsetEvaluation {
    std::vector<EncodingKind> encodings;
    std::vector<SubsetRow> rows;
};

std::size_t binomial(std::size_t n, std::size_t k);

/// For N in [n_min, n_max] and every N-class subset of the corpus labels:
/// N-fold CV accuracy and k-means (k = N) purity in each space, averaged per N.
/// Spaces must cover every corpus formula.
SubsetEvaluation subset_evaluation(std::span<const Formula> corpus, std::span<const EncodingSpace> spaces, int n_min,
                                   int n_max, std::uint64_t seed, const SvmParams& svm = {},
                                   const KmeansParams& kmeans_params = {});

std::string subset_evaluation_csv(const SubsetEvaluation& evaluation);

} // namespace fcr
