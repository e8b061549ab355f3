#include "fcr/serialize.hpp"

#include "fcr/error.hpp"

namespace fcr {

namespace {

TokenKind token_kind_from(const std::string& s) {
    if (s == "operator") return TokenKind::Operator;
    if (s == "identifier") return TokenKind::Identifier;
    if (s == "number") return TokenKind::Number;
    throw Error(ErrorCode::ModelFormatError, "unknown token kind '" + s + "'");
}

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& value) {
    if (value) j[key] = *value;
}

template <typename T>
void get_optional(const Json& j, const char* key, std::optional<T>& value) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
        value = it->template get<T>();
    } else {
        value.reset();
    }
}

} // namespace

void to_json(Json& j, const Token& t) { j = Json::array({std::string(to_string(t.kind)), t.text}); }

void from_json(const Json& j, Token& t) {
    t.kind = token_kind_from(j.at(0).get<std::string>());
    t.text = j.at(1).get<std::string>();
}

void to_json(Json& j, const ConstituentSet& cs) { j = cs.tokens; }
void from_json(const Json& j, ConstituentSet& cs) { cs.tokens = j.get<std::vector<Token>>(); }

void to_json(Json& j, const Formula& f) {
    j = Json::object();
    j["id"] = f.id;
    j["latex"] = f.latex;
    put_optional(j, "label", f.label);
    put_optional(j, "concept_qid", f.concept_qid);
    if (!f.doc_id.empty()) j["doc_id"] = f.doc_id;
    put_optional(j, "context", f.context);
    put_optional(j, "context_offset", f.context_offset);
    put_optional(j, "constituents", f.constituents);
}

void from_json(const Json& j, Formula& f) {
    f.id = j.at("id").get<std::string>();
    f.latex = j.at("latex").get<std::string>();
    get_optional(j, "label", f.label);
    get_optional(j, "concept_qid", f.concept_qid);
    f.doc_id = j.value("doc_id", std::string{});
    get_optional(j, "context", f.context);
    get_optional(j, "context_offset", f.context_offset);
    get_optional(j, "constituents", f.constituents);
}

void to_json(Json& j, const DuplicateRecord& r) {
    j = Json{{"latex", r.latex}, {"d", r.count}, {"D", r.documents}, {"first_id", r.first_id}};
}

void from_json(const Json& j, DuplicateRecord& r) {
    r.latex = j.at("latex").get<std::string>();
    r.count = j.at("d").get<std::size_t>();
    r.documents = j.at("D").get<std::size_t>();
    r.first_id = j.value("first_id", std::string{});
}

void to_json(Json& j, const EncodingKind& k) { j = to_string(k); }

void from_json(const Json& j, EncodingKind& k) {
    auto parsed = parse_encoding_kind(j.get<std::string>());
    if (!parsed) throw Error(ErrorCode::ModelFormatError, "unknown encoding kind " + j.dump());
    k = *parsed;
}

void to_json(Json& j, const KnnConfig& c) {
    j = Json{{"k", c.k},
             {"context_window", c.context_window},
             {"min_len", c.min_len},
             {"max_len", c.max_len},
             {"min_docs", c.min_docs}};
}

void from_json(const Json& j, KnnConfig& c) {
    c.k = j.at("k").get<std::size_t>();
    c.context_window = j.at("context_window").get<std::size_t>();
    c.min_len = j.at("min_len").get<std::size_t>();
    c.max_len = j.at("max_len").get<std::size_t>();
    c.min_docs = j.at("min_docs").get<std::size_t>();
}

void to_json(Json& j, const RankingReport& r) {
    j = Json::object();
    j["mr"] = r.mr ? Json(*r.mr) : Json(nullptr);
    j["mrr"] = r.mrr;
    Json recall = Json::object();
    for (const auto& [k, v] : r.topk_recall) recall[std::to_string(k)] = v;
    j["topk_recall"] = recall;
    Json ranks = Json::array();
    for (const auto& rank : r.per_query_ranks) ranks.push_back(rank ? Json(*rank) : Json(nullptr));
    j["per_query_ranks"] = ranks;
}

void from_json(const Json& j, RankingReport& r) {
    r.mr = j.at("mr").is_null() ? std::nullopt : std::optional<double>(j.at("mr").get<double>());
    r.mrr = j.at("mrr").get<double>();
    r.topk_recall.clear();
    for (const auto& [k, v] : j.at("topk_recall").items()) r.topk_recall[std::stoi(k)] = v.get<double>();
    r.per_query_ranks.clear();
    for (const auto& rank : j.at("per_query_ranks")) {
        r.per_query_ranks.push_back(rank.is_null() ? std::nullopt : std::optional<int>(rank.get<int>()));
    }
}

void to_json(Json& j, const SimilarityMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m.at(i, k));
        rows.push_back(std::move(row));
    }
    j = Json{{"measure", std::string(to_string(m.measure))}, {"labels", m.labels}, {"values", rows}};
    if (!m.permutation.empty()) j["permutation"] = m.permutation;
}

void from_json(const Json& j, SimilarityMatrix& m) {
    auto measure = parse_measure(j.at("measure").get<std::string>());
    if (!measure) throw Error(ErrorCode::ModelFormatError, "unknown measure");
    m.measure = *measure;
    m.labels = j.at("labels").get<std::vector<std::string>>();
    const auto& rows = j.at("values");
    if (rows.size() != m.labels.size()) throw Error(ErrorCode::ModelFormatError, "matrix is not square");
    m.values.clear();
    for (const auto& row : rows) {
        if (row.size() != m.labels.size()) throw Error(ErrorCode::ModelFormatError, "matrix is not square");
        for (const auto& v : row) m.values.push_back(v.get<double>());
    }
    m.permutation = j.value("permutation", std::vector<std::size_t>{});
}

void to_json(Json& j, const ClusterReport& r) {
    j = Json{{"assignments", r.assignments}, {"purity", r.purity},   {"k", r.k},
             {"iterations", r.iterations},   {"wcss_trace", r.wcss_trace}};
    j["mean_centroid_distance"] = r.mean_centroid_distance ? Json(*r.mean_centroid_distance) : Json(nullptr);
}

void from_json(const Json& j, ClusterReport& r) {
    r.assignments = j.at("assignments").get<std::vector<int>>();
    r.purity = j.at("purity").get<double>();
    r.k = j.at("k").get<int>();
    r.iterations = j.value("iterations", std::size_t{0});
    r.wcss_trace = j.value("wcss_trace", std::vector<double>{});
    const auto& d = j.at("mean_centroid_distance");
    r.mean_centroid_distance = d.is_null() ? std::nullopt : std::optional<double>(d.get<double>());
}

} // namespace fcr
