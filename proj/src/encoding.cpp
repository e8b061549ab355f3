#include "fcr/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fcr/error.hpp"

namespace fcr {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void normalize(Vector& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Unigram^0.75 noise distribution, sampled by inverse CDF.
class NoiseTable {
public:
    explicit NoiseTable(const std::vector<std::size_t>& counts) {
        double total = 0.0;
        for (auto c : counts) {
            total += std::pow(static_cast<double>(c), 0.75);
            cdf_.push_back(total);
        }
        for (double& c : cdf_) c /= total;
    }

    std::size_t sample(std::mt19937_64& rng) const {
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), uniform01(rng));
        return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    }

private:
    std::vector<double> cdf_;
};

// One PV-DBOW step: the document vector predicts `target` against sampled
// noise tokens. Output rows are only updated when `train_outputs` is set.
void dbow_step(Vector& doc, std::size_t target, std::vector<Vector>& outputs, const NoiseTable& noise,
               std::size_t negatives, double lr, bool train_outputs, std::mt19937_64& rng, Vector& grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t s = 0; s <= negatives; ++s) {
        std::size_t row = target;
        double label = 1.0;
        if (s > 0) {
            row = noise.sample(rng);
            if (row == target) continue;
            label = 0.0;
        }
        Vector& out = outputs[row];
        const double g = (label - sigmoid(dot(doc, out))) * lr;
        for (std::size_t i = 0; i < doc.size(); ++i) grad[i] += g * out[i];
        if (train_outputs) {
            for (std::size_t i = 0; i < doc.size(); ++i) out[i] += g * doc[i];
        }
    }
    for (std::size_t i = 0; i < doc.size(); ++i) doc[i] += grad[i];
}

std::vector<std::size_t> rows_of(const std::map<std::string, std::size_t>& vocabulary, const Document& document) {
    std::vector<std::size_t> rows;
    for (const auto& token : document) {
        if (auto it = vocabulary.find(token); it != vocabulary.end()) rows.push_back(it->second);
    }
    return rows;
}

Vector random_doc_vector(std::size_t dim, std::mt19937_64& rng) {
    Vector v(dim);
    for (double& x : v) x = (uniform01(rng) - 0.5) / static_cast<double>(dim);
    return v;
}

const TokenClassTable& table_or_builtin(const EncodingOptions& options) {
    return options.table ? *options.table : TokenClassTable::builtin();
}

} // namespace

TfidfModel fit_tfidf(std::span<const Document> documents) {
    TfidfModel model;
    std::map<std::string, std::size_t> df;
    for (const auto& doc : documents) {
        std::vector<std::string> unique(doc.begin(), doc.end());
        std::sort(unique.begin(), unique.end());
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        for (const auto& t : unique) ++df[t];
    }
    if (df.empty()) throw Error(ErrorCode::EmptyCorpus, "no tokens in any document");

    model.doc_count = documents.size();
    const double n = static_cast<double>(model.doc_count);
    for (const auto& [token, count] : df) {
        model.vocabulary.emplace(token, model.idf.size());
        model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return model;
}

Vector encode_tfidf(const TfidfModel& model, const Document& document) {
    Vector v(model.dimension(), 0.0);
    for (const auto& token : document) {
        if (auto it = model.vocabulary.find(token); it != model.vocabulary.end()) v[it->second] += 1.0;
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= model.idf[i];
    normalize(v);
    return v;
}

void EmbeddingParams::validate() const {
    if (dim < 2) throw Error(ErrorCode::BadHyperparameter, "embedding dim must be at least 2");
    if (epochs == 0) throw Error(ErrorCode::BadHyperparameter, "epochs must be positive");
    if (!(learning_rate > 0.0) || min_learning_rate < 0.0 || min_learning_rate > learning_rate) {
        throw Error(ErrorCode::BadHyperparameter, "learning rates must satisfy 0 <= min <= start, start > 0");
    }
}

EmbeddingModel train_embedding(std::span<const Document> documents, const EmbeddingParams& params,
                               std::uint64_t seed) {
    params.validate();
    if (documents.size() < 2) throw Error(ErrorCode::EmptyCorpus, "embedding needs at least two documents");

    EmbeddingModel model;
    model.params = params;
    model.seed = seed;
    for (const auto& doc : documents) {
        for (const auto& token : doc) model.vocabulary.emplace(token, 0);
    }
    if (model.vocabulary.empty()) throw Error(ErrorCode::EmptyCorpus, "no tokens in any document");
    std::size_t next = 0;
    for (auto& [token, row] : model.vocabulary) row = next++;

    model.token_counts.assign(model.vocabulary.size(), 0);
    std::vector<std::vector<std::size_t>> rows;
    std::size_t total_tokens = 0;
    for (const auto& doc : documents) {
        rows.push_back(rows_of(model.vocabulary, doc));
        for (auto r : rows.back()) ++model.token_counts[r];
        total_tokens += rows.back().size();
    }
    const NoiseTable noise(model.token_counts);

    std::mt19937_64 rng(seed);
    model.doc_vectors.reserve(documents.size());
    for (std::size_t d = 0; d < documents.size(); ++d) model.doc_vectors.push_back(random_doc_vector(params.dim, rng));
    model.token_vectors.assign(model.vocabulary.size(), Vector(params.dim, 0.0));

    std::vector<std::size_t> order(documents.size());
    std::iota(order.begin(), order.end(), 0);
    Vector grad(params.dim);
    const double steps = static_cast<double>(params.epochs * total_tokens);
    std::size_t done = 0;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (auto d : order) {
            for (auto target : rows[d]) {
                const double lr = params.learning_rate -
                                  (params.learning_rate - params.min_learning_rate) * static_cast<double>(done) / steps;
                dbow_step(model.doc_vectors[d], target, model.token_vectors, noise, params.negative_samples, lr, true,
                          rng, grad);
                ++done;
            }
        }
    }

    for (std::size_t d = 0; d < documents.size(); ++d) {
        if (rows[d].empty()) {
            model.doc_vectors[d].assign(params.dim, 0.0);
        } else {
            normalize(model.doc_vectors[d]);
        }
    }
    return model;
}

Vector encode_embedding(const EmbeddingModel& model, const Document& document) {
    const std::size_t dim = model.params.dim;
    const auto rows = rows_of(model.vocabulary, document);
    if (rows.empty()) return Vector(dim, 0.0);

    const NoiseTable noise(model.token_counts);
    std::mt19937_64 rng(model.seed ^ 0x9e3779b97f4a7c15ULL);
    Vector doc = random_doc_vector(dim, rng);
    // The output rows stay frozen; a scratch copy keeps the model const.
    auto outputs = model.token_vectors;
    Vector grad(dim);
    const std::size_t epochs = std::max<std::size_t>(model.params.infer_epochs, 1);
    const double steps = static_cast<double>(epochs * rows.size());
    std::size_t done = 0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        for (auto target : rows) {
            const double lr = model.params.learning_rate - (model.params.learning_rate - model.params.min_learning_rate) *
                                                               static_cast<double>(done) / steps;
            dbow_step(doc, target, outputs, noise, model.params.negative_samples, lr, false, rng, grad);
            ++done;
        }
    }
    normalize(doc);
    return doc;
}

std::size_t EncodingSpace::index_of(const std::string& id) const {
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw Error(ErrorCode::UnknownFormula, "formula '" + id + "' is not in the space");
    return static_cast<std::size_t>(it - ids.begin());
}

EncodingSpace EncodingSpace::select(std::span<const std::string> row_ids) const {
    EncodingSpace out;
    out.kind = kind;
    out.tfidf = tfidf;
    out.embedding = embedding;
    for (const auto& id : row_ids) {
        out.ids.push_back(id);
        out.vectors.push_back(vector_of(id));
    }
    return out;
}

ConstituentSet constituents_of(const Formula& formula, const TokenClassTable& table) {
    if (formula.constituents) return *formula.constituents;
    return tokenize_latex(formula.latex, table);
}

Document content_document(const Formula& formula, ContentView view, const TokenClassTable& table) {
    const auto cs = constituents_of(formula, table);
    return view == ContentView::Set ? cs.unique_content_tokens() : cs.content_tokens();
}

Document semantics_document(const Formula& formula, const AnnotationMap& annotations, const TokenClassTable& table) {
    auto qids = annotations.resolved_qids(formula.id, constituents_of(formula, table));
    if (qids.empty()) {
        throw Error(ErrorCode::MissingAnnotation, "formula '" + formula.id + "' has no resolved QID");
    }
    return qids;
}

EncodingSpace build_encoding_space(std::span<const Formula> corpus, const AnnotationMap& annotations,
                                   EncodingKind kind, const EncodingOptions& options) {
    const auto& table = table_or_builtin(options);
    std::vector<Document> docs;
    docs.reserve(corpus.size());
    for (const auto& f : corpus) {
        docs.push_back(kind.axis == Axis::Content ? content_document(f, options.content_view, table)
                                                  : semantics_document(f, annotations, table));
    }

    EncodingSpace space;
    space.kind = kind;
    for (const auto& f : corpus) space.ids.push_back(f.id);
    if (kind.method == Method::Tfidf) {
        auto model = std::make_shared<TfidfModel>(fit_tfidf(docs));
        for (const auto& doc : docs) space.vectors.push_back(encode_tfidf(*model, doc));
        space.tfidf = std::move(model);
    } else {
        auto model = std::make_shared<EmbeddingModel>(train_embedding(docs, options.embedding, options.seed));
        space.vectors = model->doc_vectors;
        space.embedding = std::move(model);
    }
    return space;
}

} // namespace fcr
