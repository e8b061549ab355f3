#pragma once

// JSON mappings for the domain types (nlohmann ADL hooks).

#include <json.hpp>

#include "fcr/corpus_model.hpp"

namespace fcr {

using Json = nlohmann::json;

void to_json(Json& j, const Token& t);
void from_json(const Json& j, Token& t);
void to_json(Json& j, const ConstituentSet& cs);
void from_json(const Json& j, ConstituentSet& cs);
void to_json(Json& j, const Formula& f);
void from_json(const Json& j, Formula& f);
void to_json(Json& j, const DuplicateRecord& r);
void from_json(const Json& j, DuplicateRecord& r);
void to_json(Json& j, const EncodingKind& k);
void from_json(const Json& j, EncodingKind& k);
void to_json(Json& j, const KnnConfig& c);
void from_json(const Json& j, KnnConfig& c);
void to_json(Json& j, const RankingReport& r);
void from_json(const Json& j, RankingReport& r);
void to_json(Json& j, const SimilarityMatrix& m);
void from_json(const Json& j, SimilarityMatrix& m);
void to_json(Json& j, const ClusterReport& r);
void from_json(const Json& j, ClusterReport& r);

} // namespace fcr
