#pragma once

// Versioned JSON for fitted models and encoding spaces, plus the small
// {id: [ids]} files used for judgments and relevance.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fcr/discovery.hpp"
#include "fcr/encoding.hpp"
#include "fcr/serialize.hpp"

namespace fcr {

inline constexpr int kModelFormatVersion = 1;

void to_json(Json& j, const TfidfModel& m);
void from_json(const Json& j, TfidfModel& m);
void to_json(Json& j, const EmbeddingParams& p);
void from_json(const Json& j, EmbeddingParams& p);
void to_json(Json& j, const EmbeddingModel& m);
void from_json(const Json& j, EmbeddingModel& m);

/// {"format": "fcr.encoding-space", "version": 1, "kind", "ids", "vectors", "model"}.
Json encoding_space_to_json(const EncodingSpace& space);
/// Throws ModelFormatError for another format, an unsupported version, or
/// inconsistent shapes.
EncodingSpace encoding_space_from_json(const Json& j);

void save_encoding_space(const std::filesystem::path& path, const EncodingSpace& space);
EncodingSpace load_encoding_space(const std::filesystem::path& path);

/// A JSON object mapping ids to arrays of ids. Throws CorpusFormatError.
std::map<std::string, std::vector<std::string>> parse_id_lists(std::string_view json);

Judgments parse_judgments(std::string_view json);

} // namespace fcr
