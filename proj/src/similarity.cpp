#include "fcr/similarity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "fcr/csv.hpp"
#include "fcr/error.hpp"

namespace fcr {

namespace {

// Levenshtein distance, abandoning the computation once every cell of a row
// reaches `limit` (the result is then reported as `limit`).
std::size_t bounded_levenshtein(std::string_view a, std::string_view b, std::size_t limit) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        std::size_t row_min = cur[0];
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
            row_min = std::min(row_min, cur[j]);
        }
        if (row_min >= limit) return limit;
        std::swap(prev, cur);
    }
    return std::min(prev[b.size()], limit);
}

int ratio_score(std::size_t distance, std::size_t length) {
    const double r = 100.0 * (1.0 - static_cast<double>(distance) / static_cast<double>(std::max<std::size_t>(length, 1)));
    return static_cast<int>(std::lround(r));
}

bool is_cosine(Measure m) { return m == Measure::CosineTfidf || m == Measure::CosineEmbedding; }

} // namespace

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) return 0.0;
    return std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    return bounded_levenshtein(a, b, std::max(a.size(), b.size()) + 1);
}

int partial_ratio(std::string_view a, std::string_view b) {
    std::string_view s = a.size() <= b.size() ? a : b;
    std::string_view t = a.size() <= b.size() ? b : a;
    if (s.empty()) return t.empty() ? 100 : 0;

    const std::size_t m = s.size();
    // Equal-length strings: |histogram difference| / 2 bounds the distance from below.
    std::array<int, 256> diff{};
    for (unsigned char c : s) ++diff[c];
    for (std::size_t i = 0; i < m; ++i) --diff[static_cast<unsigned char>(t[i])];
    std::size_t l1 = 0;
    for (int d : diff) l1 += static_cast<std::size_t>(std::abs(d));

    std::size_t best = m + 1;
    for (std::size_t start = 0;; ++start) {
        const std::size_t lower = (l1 + 1) / 2;
        if (lower < best) best = std::min(best, bounded_levenshtein(s, t.substr(start, m), best));
        if (best == 0 || start + m >= t.size()) break;
        // Slide: t[start] leaves, t[start + m] enters.
        auto update = [&](unsigned char c, int delta) {
            l1 -= static_cast<std::size_t>(std::abs(diff[c]));
            diff[c] += delta;
            l1 += static_cast<std::size_t>(std::abs(diff[c]));
        };
        update(static_cast<unsigned char>(t[start]), +1);
        update(static_cast<unsigned char>(t[start + m]), -1);
    }
    return ratio_score(best, m);
}

std::size_t qid_overlap(const Formula& a, const Formula& b, const AnnotationMap& annotations) {
    const auto qa = semantics_document(a, annotations);
    const auto qb = semantics_document(b, annotations);
    const std::set<std::string> sa(qa.begin(), qa.end());
    return static_cast<std::size_t>(std::count_if(qb.begin(), qb.end(), [&](const auto& q) { return sa.count(q) > 0; }));
}

SimilarityMatrix similarity_matrix(std::span<const Formula> corpus, Measure measure, const SimilarityInputs& inputs) {
    const std::size_t n = corpus.size();
    SimilarityMatrix m;
    m.measure = measure;
    for (const auto& f : corpus) m.labels.push_back(f.id);
    m.values.assign(n * n, 0.0);

    std::vector<std::size_t> rows;
    std::vector<std::string> canonical;
    std::vector<std::set<std::string>> qids;
    if (is_cosine(measure)) {
        if (inputs.space == nullptr) throw Error(ErrorCode::InvalidConfig, "cosine similarity needs an encoding space");
        for (const auto& f : corpus) rows.push_back(inputs.space->index_of(f.id));
    } else if (measure == Measure::Fuzzy) {
        for (const auto& f : corpus) canonical.push_back(canonical_latex(f.latex));
    } else {
        if (inputs.annotations == nullptr) throw Error(ErrorCode::InvalidConfig, "QID overlap needs annotations");
        for (const auto& f : corpus) {
            const auto doc = semantics_document(f, *inputs.annotations);
            qids.emplace_back(doc.begin(), doc.end());
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double v = 0.0;
            switch (measure) {
            case Measure::Fuzzy: v = i == j ? 100.0 : partial_ratio(canonical[i], canonical[j]); break;
            case Measure::CosineTfidf:
            case Measure::CosineEmbedding: {
                const auto& a = inputs.space->vectors[rows[i]];
                const auto& b = inputs.space->vectors[rows[j]];
                v = i == j ? (cosine(a, a) == 0.0 ? 0.0 : 1.0) : cosine(a, b);
                break;
            }
            case Measure::QidOverlap: {
                std::size_t shared = 0;
                for (const auto& q : qids[i]) shared += qids[j].count(q);
                v = static_cast<double>(shared);
                break;
            }
            }
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return m;
}

SimilarityMatrix class_pooled_matrix(const SimilarityMatrix& m, std::span<const std::string> labels) {
    if (labels.size() != m.size()) {
        throw Error(ErrorCode::DimensionMismatch, "one class label per matrix row is required");
    }
    std::vector<std::string> classes;
    std::vector<std::size_t> class_of(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = std::find(classes.begin(), classes.end(), labels[i]);
        if (it == classes.end()) it = classes.insert(classes.end(), labels[i]);
        class_of[i] = static_cast<std::size_t>(it - classes.begin());
    }

    const std::size_t c = classes.size();
    std::vector<double> sum(c * c, 0.0);
    std::vector<std::size_t> count(c * c, 0);
    std::vector<double> singleton_diag(c, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        singleton_diag[class_of[i]] = m.at(i, i);
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (i == j) continue;
            const std::size_t cell = class_of[i] * c + class_of[j];
            sum[cell] += m.at(i, j);
            ++count[cell];
        }
    }

    SimilarityMatrix out;
    out.labels = classes;
    out.measure = m.measure;
    out.values.assign(c * c, 0.0);
    for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t b = 0; b < c; ++b) {
            const std::size_t cell = a * c + b;
            out.values[cell] = count[cell] > 0 ? sum[cell] / static_cast<double>(count[cell]) : singleton_diag[a];
        }
    }
    return out;
}

SimilarityMatrix sort_matrix(const SimilarityMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> mean(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) mean[i] += m.at(i, j);
        mean[i] /= static_cast<double>(n);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mean[a] > mean[b]; });

    SimilarityMatrix out;
    out.measure = m.measure;
    out.permutation = order;
    out.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        out.labels.push_back(m.labels[order[i]]);
        for (std::size_t j = 0; j < n; ++j) out.values[i * n + j] = m.at(order[i], order[j]);
    }
    return out;
}

double off_diagonal_mean(const SimilarityMatrix& m) {
    const std::size_t n = m.size();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) sum += m.at(i, j);
        }
    }
    return sum / static_cast<double>(n * (n - 1));
}

std::vector<std::string> assign_by_similarity(const SimilarityMatrix& m, std::span<const std::string> labels) {
    const std::size_t n = m.size();
    if (labels.size() != n) throw Error(ErrorCode::InvalidConfig, "one label per matrix row is required");
    std::vector<std::string> classes;
    for (const auto& l : labels) {
        if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
    }
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sums(classes.size(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto c = std::find(classes.begin(), classes.end(), labels[j]) - classes.begin();
            sums[c] += m.at(i, j);
        }
        out.push_back(classes[std::max_element(sums.begin(), sums.end()) - sums.begin()]);
    }
    return out;
}

std::string matrix_to_csv(const SimilarityMatrix& m) {
    std::ostringstream out;
    out.precision(17);
    out << "label";
    for (const auto& l : m.labels) out << ',' << csv_field(l);
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << csv_field(m.labels[i]);
        for (std::size_t j = 0; j < m.size(); ++j) out << ',' << m.at(i, j);
        out << '\n';
    }
    return out.str();
}

} // namespace fcr
