#include "fcr/learn.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "fcr/error.hpp"

namespace fcr {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Decorrelates derived seeds (splitmix64 finalizer).
std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double squared_distance(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void check_rectangular(std::span<const Vector> vectors) {
    for (const auto& v : vectors) {
        if (v.size() != vectors.front().size()) throw Error(ErrorCode::DimensionMismatch, "vectors differ in length");
    }
}

struct Lloyd {
    std::vector<int> assignments;
    std::vector<Vector> centroids;
    std::vector<double> trace;
    std::size_t iterations = 0;
    double wcss = 0.0;
};

std::vector<Vector> plus_plus_seeds(std::span<const Vector> x, int k, std::mt19937_64& rng) {
    const std::size_t n = x.size();
    std::vector<Vector> centers;
    centers.push_back(x[static_cast<std::size_t>(rng() % n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x[i], centers[0]);
    while (centers.size() < static_cast<std::size_t>(k)) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<std::size_t>(rng() % n);
        }
        centers.push_back(x[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(x[i], centers.back()));
    }
    return centers;
}

int nearest(const Vector& p, const std::vector<Vector>& centroids) {
    int best = 0;
    double best_d = squared_distance(p, centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d = squared_distance(p, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

void update_centroids(std::span<const Vector> x, Lloyd& state) {
    const std::size_t k = state.centroids.size();
    const std::size_t dim = x.front().size();
    std::vector<std::size_t> sizes(k, 0);
    for (auto& c : state.centroids) c.assign(dim, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto& c = state.centroids[static_cast<std::size_t>(state.assignments[i])];
        for (std::size_t j = 0; j < dim; ++j) c[j] += x[i][j];
        ++sizes[static_cast<std::size_t>(state.assignments[i])];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] == 0) continue;
        for (double& v : state.centroids[c]) v /= static_cast<double>(sizes[c]);
    }

    // Re-seed emptied clusters at the point farthest from its own centroid,
    // taken from a cluster that can spare it.
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0) continue;
        std::size_t far = x.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto own = static_cast<std::size_t>(state.assignments[i]);
            if (sizes[own] < 2) continue;
            const double d = squared_distance(x[i], state.centroids[own]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far == x.size()) continue;
        const auto old = static_cast<std::size_t>(state.assignments[far]);
        state.assignments[far] = static_cast<int>(c);
        --sizes[old];
        sizes[c] = 1;
        state.centroids[c] = x[far];
        auto& oc = state.centroids[old];
        oc.assign(dim, 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (static_cast<std::size_t>(state.assignments[i]) != old) continue;
            for (std::size_t j = 0; j < dim; ++j) oc[j] += x[i][j];
        }
        for (double& v : oc) v /= static_cast<double>(sizes[old]);
    }
}

double within_cluster_ss(std::span<const Vector> x, const Lloyd& state) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += squared_distance(x[i], state.centroids[static_cast<std::size_t>(state.assignments[i])]);
    }
    return s;
}

Lloyd run_lloyd(std::span<const Vector> x, int k, std::uint64_t seed, std::size_t max_iterations) {
    std::mt19937_64 rng(seed);
    Lloyd state;
    state.centroids = plus_plus_seeds(x, k, rng);
    state.assignments.assign(x.size(), -1);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const int c = nearest(x[i], state.centroids);
            if (c != state.assignments[i]) {
                state.assignments[i] = c;
                changed = true;
            }
        }
        if (!changed) break;
        ++state.iterations;
        update_centroids(x, state);
        state.trace.push_back(within_cluster_ss(x, state));
    }
    state.wcss = within_cluster_ss(x, state);
    return state;
}

struct SparseRow {
    std::vector<std::size_t> index;
    std::vector<double> value;
};

// Features plus a trailing constant 1 for the bias.
std::vector<SparseRow> to_sparse(std::span<const Vector> vectors) {
    std::vector<SparseRow> rows;
    rows.reserve(vectors.size());
    for (const auto& v : vectors) {
        SparseRow r;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] != 0.0) {
                r.index.push_back(i);
                r.value.push_back(v[i]);
            }
        }
        r.index.push_back(v.size());
        r.value.push_back(1.0);
        rows.push_back(std::move(r));
    }
    return rows;
}

// Pegasos for one binary problem; w is kept as scale * v.
Vector pegasos(const std::vector<SparseRow>& rows, const std::vector<double>& y, std::size_t dim, const SvmParams& params,
               std::uint64_t seed) {
    Vector v(dim, 0.0);
    double scale = 1.0;
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (auto i : order) {
            ++t;
            const double eta = 1.0 / (params.lambda * static_cast<double>(t));
            const auto& r = rows[i];
            double margin = 0.0;
            for (std::size_t j = 0; j < r.index.size(); ++j) margin += v[r.index[j]] * r.value[j];
            margin *= scale * y[i];

            const double shrink = 1.0 - eta * params.lambda;
            if (shrink <= 0.0) {
                std::fill(v.begin(), v.end(), 0.0);
                scale = 1.0;
            } else {
                scale *= shrink;
            }
            if (margin < 1.0) {
                const double step = eta * y[i] / scale;
                for (std::size_t j = 0; j < r.index.size(); ++j) v[r.index[j]] += step * r.value[j];
            }
            if (scale < 1e-9) {
                for (double& x : v) x *= scale;
                scale = 1.0;
            }
        }
    }
    for (double& x : v) x *= scale;
    return v;
}

} // namespace

std::vector<Point2> pca2(std::span<const Vector> vectors) {
    if (vectors.size() < 2) throw Error(ErrorCode::DegenerateData, "PCA needs at least two points");
    check_rectangular(vectors);
    const auto n = static_cast<Eigen::Index>(vectors.size());
    const auto d = static_cast<Eigen::Index>(vectors.front().size());
    if (d < 2) throw Error(ErrorCode::DegenerateData, "PCA needs at least two dimensions");

    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = vectors[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    x.rowwise() -= x.colwise().mean();
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::DegenerateData, "eigen decomposition failed");
    const auto& values = solver.eigenvalues();
    if (!(values(d - 1) > 1e-12 * std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff()))) {
        throw Error(ErrorCode::DegenerateData, "data has no variance");
    }

    Eigen::MatrixXd components(d, 2);
    for (int c = 0; c < 2; ++c) {
        Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - c);
        Eigen::Index arg = 0;
        for (Eigen::Index j = 1; j < d; ++j) {
            if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
        }
        if (v(arg) < 0) v = -v;
        components.col(c) = v;
    }
    const Eigen::MatrixXd projected = x * components;
    std::vector<Point2> out(vectors.size());
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = {projected(i, 0), projected(i, 1)};
    return out;
}

ClusterReport kmeans(std::span<const Vector> vectors, int k, std::uint64_t seed, const KmeansParams& params) {
    if (vectors.empty()) throw Error(ErrorCode::EmptyInput, "no points to cluster");
    if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
    if (static_cast<std::size_t>(k) > vectors.size()) {
        throw Error(ErrorCode::TooManyClusters,
                    "k = " + std::to_string(k) + " exceeds " + std::to_string(vectors.size()) + " points");
    }
    check_rectangular(vectors);

    Lloyd best;
    const std::size_t runs = std::max<std::size_t>(params.restarts, 1);
    for (std::size_t r = 0; r < runs; ++r) {
        Lloyd run = run_lloyd(vectors, k, r == 0 ? seed : mix(seed, r), params.max_iterations);
        if (r == 0 || run.wcss < best.wcss) best = std::move(run);
    }
    ClusterReport report;
    report.assignments = std::move(best.assignments);
    report.k = k;
    report.iterations = best.iterations;
    report.wcss_trace = std::move(best.trace);
    return report;
}

double purity(std::span<const int> assignments, std::span<const std::string> labels) {
    if (assignments.empty()) throw Error(ErrorCode::EmptyInput, "empty clustering");
    if (assignments.size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "one label per point");
    std::map<int, std::map<std::string, std::size_t>> table;
    for (std::size_t i = 0; i < assignments.size(); ++i) ++table[assignments[i]][labels[i]];
    double sum = 0.0;
    for (const auto& [cluster, counts] : table) {
        std::size_t size = 0, top = 0;
        for (const auto& [label, n] : counts) {
            size += n;
            top = std::max(top, n);
        }
        sum += static_cast<double>(top) / static_cast<double>(size);
    }
    return sum / static_cast<double>(table.size());
}

std::size_t majority_consistent(std::span<const int> assignments, std::span<const std::string> labels) {
    std::map<int, std::map<std::string, std::size_t>> table;
    for (std::size_t i = 0; i < assignments.size(); ++i) ++table[assignments[i]][labels[i]];
    std::size_t total = 0;
    for (const auto& [cluster, counts] : table) {
        std::size_t top = 0;
        for (const auto& [label, n] : counts) top = std::max(top, n);
        total += top;
    }
    return total;
}

double centroid_mean_distance(std::span<const Point2> points, std::span<const int> assignments) {
    if (points.size() != assignments.size()) throw Error(ErrorCode::DimensionMismatch, "one assignment per point");
    std::map<int, std::array<double, 3>> acc; // x sum, y sum, count
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto& a = acc[assignments[i]];
        a[0] += points[i][0];
        a[1] += points[i][1];
        a[2] += 1.0;
    }
    if (acc.size() < 2) throw Error(ErrorCode::Undefined, "centroid distance needs at least two clusters");
    std::vector<Point2> centroids;
    for (const auto& [c, a] : acc) centroids.push_back({a[0] / a[2], a[1] / a[2]});
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < centroids.size(); ++i) {
        for (std::size_t j = i + 1; j < centroids.size(); ++j) {
            sum += std::hypot(centroids[i][0] - centroids[j][0], centroids[i][1] - centroids[j][1]);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

std::vector<double> SvmModel::margins(std::span<const double> x) const {
    std::vector<double> out;
    for (const auto& w : weights) {
        if (x.size() + 1 != w.size()) throw Error(ErrorCode::DimensionMismatch, "feature dimension differs from model");
        double m = w.back();
        for (std::size_t j = 0; j < x.size(); ++j) m += w[j] * x[j];
        out.push_back(m);
    }
    return out;
}

const std::string& SvmModel::predict(std::span<const double> x) const {
    const auto m = margins(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < m.size(); ++c) {
        if (m[c] > m[best]) best = c;
    }
    return classes[best];
}

SvmModel train_svm(std::span<const Vector> vectors, std::span<const std::string> labels, const SvmParams& params,
                   std::uint64_t seed) {
    if (vectors.size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "one label per vector");
    if (!(params.lambda > 0.0) || params.epochs == 0) {
        throw Error(ErrorCode::BadHyperparameter, "SVM needs lambda > 0 and at least one epoch");
    }
    const std::set<std::string> classes(labels.begin(), labels.end());
    if (classes.size() < 2) throw Error(ErrorCode::DegenerateLabels, "need at least two classes");
    check_rectangular(vectors);

    SvmModel model;
    model.classes.assign(classes.begin(), classes.end());
    model.params = params;
    model.seed = seed;
    const std::size_t dim = vectors.front().size() + 1;
    const auto rows = to_sparse(vectors);
    std::vector<double> y(labels.size());
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == model.classes[c] ? 1.0 : -1.0;
        model.weights.push_back(pegasos(rows, y, dim, params, mix(seed, c)));
    }
    return model;
}

std::vector<int> stratified_folds(std::span<const std::string> labels, int folds, std::uint64_t seed) {
    if (folds < 2) throw Error(ErrorCode::InvalidConfig, "need at least two folds");
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
    std::vector<int> fold_of(labels.size(), 0);
    std::mt19937_64 rng(seed);
    std::size_t offset = 0;
    for (auto& [label, idx] : members) {
        if (idx.size() < static_cast<std::size_t>(folds)) {
            throw Error(ErrorCode::StratificationError, "class '" + label + "' has " + std::to_string(idx.size()) +
                                                            " members, fewer than " + std::to_string(folds) + " folds");
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t p = 0; p < idx.size(); ++p) {
            fold_of[idx[p]] = static_cast<int>((offset + p) % static_cast<std::size_t>(folds));
        }
        offset += idx.size();
    }
    return fold_of;
}

double cross_validate(std::span<const Vector> vectors, std::span<const std::string> labels, int folds,
                      std::uint64_t seed, const SvmParams& params) {
    if (vectors.size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "one label per vector");
    const auto fold_of = stratified_folds(labels, folds, seed);
    double sum = 0.0;
    for (int f = 0; f < folds; ++f) {
        std::vector<Vector> train_x;
        std::vector<std::string> train_y;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            if (fold_of[i] != f) {
                train_x.push_back(vectors[i]);
                train_y.push_back(labels[i]);
            }
        }
        const auto model = train_svm(train_x, train_y, params, mix(seed, static_cast<std::uint64_t>(f)));
        std::size_t correct = 0, total = 0;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            if (fold_of[i] != f) continue;
            ++total;
            if (model.predict(vectors[i]) == labels[i]) ++correct;
        }
        sum += static_cast<double>(correct) / static_cast<double>(total);
    }
    return sum / folds;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

SubsetEvaluation subset_evaluation(std::span<const Formula> corpus, std::span<const EncodingSpace> spaces, int n_min,
                                   int n_max, std::uint64_t seed, const SvmParams& svm,
                                   const KmeansParams& kmeans_params) {
    std::vector<std::string> classes;
    std::vector<std::string> labels;
    for (const auto& f : corpus) {
        if (!f.label) throw Error(ErrorCode::MissingAnnotation, "formula '" + f.id + "' has no class label");
        labels.push_back(*f.label);
        if (std::find(classes.begin(), classes.end(), *f.label) == classes.end()) classes.push_back(*f.label);
    }
    if (n_min < 2 || n_max < n_min || static_cast<std::size_t>(n_max) > classes.size()) {
        throw Error(ErrorCode::InvalidConfig, "class counts must satisfy 2 <= n_min <= n_max <= " +
                                                  std::to_string(classes.size()));
    }

    // Row of each corpus formula in each space.
    std::vector<std::vector<std::size_t>> rows(spaces.size());
    for (std::size_t s = 0; s < spaces.size(); ++s) {
        for (const auto& f : corpus) rows[s].push_back(spaces[s].index_of(f.id));
    }

    SubsetEvaluation out;
    for (const auto& space : spaces) out.encodings.push_back(space.kind);

    std::uint64_t subset_no = 0;
    for (int n = n_min; n <= n_max; ++n) {
        SubsetRow accuracy{n, 0, "accuracy", {}};
        SubsetRow purity_row{n, 0, "purity", {}};
        std::vector<bool> mask(classes.size(), false);
        std::fill(mask.begin(), mask.begin() + n, true);
        do {
            std::set<std::string> chosen;
            for (std::size_t c = 0; c < classes.size(); ++c) {
                if (mask[c]) chosen.insert(classes[c]);
            }
            std::vector<std::size_t> members;
            std::vector<std::string> sub_labels;
            for (std::size_t i = 0; i < corpus.size(); ++i) {
                if (chosen.count(labels[i]) > 0) {
                    members.push_back(i);
                    sub_labels.push_back(labels[i]);
                }
            }
            const std::uint64_t subset_seed = mix(seed, subset_no++);
            for (std::size_t s = 0; s < spaces.size(); ++s) {
                std::vector<Vector> x;
                x.reserve(members.size());
                for (auto i : members) x.push_back(spaces[s].vectors[rows[s][i]]);
                accuracy.mean[spaces[s].kind] += cross_validate(x, sub_labels, n, subset_seed, svm);
                const auto report = kmeans(x, n, subset_seed, kmeans_params);
                purity_row.mean[spaces[s].kind] += purity(report.assignments, sub_labels);
            }
            ++accuracy.choices;
            ++purity_row.choices;
        } while (std::prev_permutation(mask.begin(), mask.end()));

        for (auto* row : {&accuracy, &purity_row}) {
            for (auto& [kind, v] : row->mean) v /= static_cast<double>(row->choices);
            out.rows.push_back(*row);
        }
    }
    return out;
}

std::string subset_evaluation_csv(const SubsetEvaluation& evaluation) {
    std::ostringstream out;
    out.precision(6);
    out << "Classes,Choices,Metric";
    for (const auto& kind : evaluation.encodings) out << ',' << to_string(kind);
    out << '\n';
    for (const auto& row : evaluation.rows) {
        out << row.classes << ',' << row.choices << ',' << row.metric;
        for (const auto& kind : evaluation.encodings) out << ',' << row.mean.at(kind);
        out << '\n';
    }
    return out.str();
}

} // namespace fcr
