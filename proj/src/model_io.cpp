#include "fcr/model_io.hpp"

#include "fcr/error.hpp"
#include "fcr/io.hpp"

namespace fcr {

namespace {

constexpr const char* kSpaceFormat = "fcr.encoding-space";

std::vector<std::string> rows_in_order(const std::map<std::string, std::size_t>& vocabulary) {
    std::vector<std::string> tokens(vocabulary.size());
    for (const auto& [token, row] : vocabulary) tokens.at(row) = token;
    return tokens;
}

std::map<std::string, std::size_t> vocabulary_of(const std::vector<std::string>& tokens) {
    std::map<std::string, std::size_t> vocabulary;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!vocabulary.emplace(tokens[i], i).second) {
            throw Error(ErrorCode::ModelFormatError, "token '" + tokens[i] + "' listed twice");
        }
    }
    return vocabulary;
}

void require_rows(const std::vector<Vector>& rows, std::size_t count, std::size_t width, const char* what) {
    if (rows.size() != count) throw Error(ErrorCode::ModelFormatError, std::string(what) + ": wrong row count");
    for (const auto& r : rows) {
        if (r.size() != width) throw Error(ErrorCode::ModelFormatError, std::string(what) + ": wrong row width");
    }
}

} // namespace

void to_json(Json& j, const TfidfModel& m) {
    j = Json{{"tokens", rows_in_order(m.vocabulary)}, {"idf", m.idf}, {"doc_count", m.doc_count}};
}

void from_json(const Json& j, TfidfModel& m) {
    m.vocabulary = vocabulary_of(j.at("tokens").get<std::vector<std::string>>());
    m.idf = j.at("idf").get<std::vector<double>>();
    m.doc_count = j.at("doc_count").get<std::size_t>();
    if (m.idf.size() != m.vocabulary.size()) throw Error(ErrorCode::ModelFormatError, "idf length differs from vocabulary");
}

void to_json(Json& j, const EmbeddingParams& p) {
    j = Json{{"dim", p.dim},
             {"epochs", p.epochs},
             {"learning_rate", p.learning_rate},
             {"min_learning_rate", p.min_learning_rate},
             {"negative_samples", p.negative_samples},
             {"infer_epochs", p.infer_epochs}};
}

void from_json(const Json& j, EmbeddingParams& p) {
    p.dim = j.at("dim").get<std::size_t>();
    p.epochs = j.at("epochs").get<std::size_t>();
    p.learning_rate = j.at("learning_rate").get<double>();
    p.min_learning_rate = j.at("min_learning_rate").get<double>();
    p.negative_samples = j.at("negative_samples").get<std::size_t>();
    p.infer_epochs = j.at("infer_epochs").get<std::size_t>();
}

void to_json(Json& j, const EmbeddingModel& m) {
    j = Json{{"params", m.params},
             {"seed", m.seed},
             {"tokens", rows_in_order(m.vocabulary)},
             {"token_counts", m.token_counts},
             {"token_vectors", m.token_vectors},
             {"doc_vectors", m.doc_vectors}};
}

void from_json(const Json& j, EmbeddingModel& m) {
    m.params = j.at("params").get<EmbeddingParams>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.vocabulary = vocabulary_of(j.at("tokens").get<std::vector<std::string>>());
    m.token_counts = j.at("token_counts").get<std::vector<std::size_t>>();
    m.token_vectors = j.at("token_vectors").get<std::vector<Vector>>();
    m.doc_vectors = j.at("doc_vectors").get<std::vector<Vector>>();
    if (m.token_counts.size() != m.vocabulary.size()) {
        throw Error(ErrorCode::ModelFormatError, "token counts differ from vocabulary");
    }
    require_rows(m.token_vectors, m.vocabulary.size(), m.params.dim, "token_vectors");
    require_rows(m.doc_vectors, m.doc_vectors.size(), m.params.dim, "doc_vectors");
}

Json encoding_space_to_json(const EncodingSpace& space) {
    Json model = Json::object();
    if (space.tfidf) model["tfidf"] = *space.tfidf;
    if (space.embedding) model["embedding"] = *space.embedding;
    return Json{{"format", kSpaceFormat},   {"version", kModelFormatVersion}, {"kind", space.kind},
                {"ids", space.ids},         {"vectors", space.vectors},       {"model", model}};
}

EncodingSpace encoding_space_from_json(const Json& j) {
    try {
        if (j.value("format", std::string{}) != kSpaceFormat) {
            throw Error(ErrorCode::ModelFormatError, "not an encoding space file");
        }
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion) {
            throw Error(ErrorCode::ModelFormatError, "unsupported encoding space version " + std::to_string(version));
        }
        EncodingSpace space;
        space.kind = j.at("kind").get<EncodingKind>();
        space.ids = j.at("ids").get<std::vector<std::string>>();
        space.vectors = j.at("vectors").get<std::vector<Vector>>();
        require_rows(space.vectors, space.ids.size(), space.dimension(), "vectors");
        const auto& model = j.at("model");
        if (model.contains("tfidf")) space.tfidf = std::make_shared<TfidfModel>(model.at("tfidf").get<TfidfModel>());
        if (model.contains("embedding")) {
            space.embedding = std::make_shared<EmbeddingModel>(model.at("embedding").get<EmbeddingModel>());
        }
        return space;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ModelFormatError, std::string("malformed encoding space: ") + e.what());
    }
}

void save_encoding_space(const std::filesystem::path& path, const EncodingSpace& space) {
    write_file(path, encoding_space_to_json(space).dump() + "\n");
}

EncodingSpace load_encoding_space(const std::filesystem::path& path) {
    const auto text = read_file(path);
    const auto j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ModelFormatError, path.string() + ": not valid JSON");
    return encoding_space_from_json(j);
}

std::map<std::string, std::vector<std::string>> parse_id_lists(std::string_view json) {
    const auto j = Json::parse(json, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorCode::CorpusFormatError, "expected a JSON object of id lists");
    }
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_array()) throw Error(ErrorCode::CorpusFormatError, "entry '" + key + "' is not an array");
        auto& ids = out[key];
        for (const auto& id : value) {
            if (!id.is_string()) throw Error(ErrorCode::CorpusFormatError, "entry '" + key + "' holds a non-string id");
            ids.push_back(id.get<std::string>());
        }
    }
    return out;
}

Judgments parse_judgments(std::string_view json) {
    Judgments out;
    for (auto& [query, ids] : parse_id_lists(json)) out[query] = std::set<std::string>(ids.begin(), ids.end());
    return out;
}

} // namespace fcr
