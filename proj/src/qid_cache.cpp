#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "fcr/qid_cache.hpp"

#include <ctime>
#include <json.hpp>

#include "fcr/corpus_model.hpp"
#include "fcr/error.hpp"
#include "fcr/io.hpp"

namespace fcr {

namespace {

using Json = nlohmann::json;

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

WikidataFetcher::WikidataFetcher(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

std::optional<std::string> WikidataFetcher::label_from_entity_json(const std::string& qid, const std::string& body) {
    const auto j = Json::parse(body, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::NetworkError, "entity data for " + qid + " is not JSON");
    const auto entities = j.find("entities");
    if (entities == j.end() || !entities->contains(qid)) return std::nullopt;
    const auto& labels = (*entities)[qid].value("labels", Json::object());
    if (labels.contains("en")) return labels["en"].value("value", std::string{});
    for (const auto& [lang, entry] : labels.items()) return entry.value("value", std::string{});
    return std::string{};
}

std::optional<std::string> WikidataFetcher::fetch(const std::string& qid) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    client.set_follow_location(true);
    const auto res = client.Get("/wiki/Special:EntityData/" + qid + ".json", {{"User-Agent", "fcr/1.0"}});
    if (!res) throw Error(ErrorCode::NetworkError, "request for " + qid + " failed: " + httplib::to_string(res.error()));
    if (res->status == 404) return std::nullopt;
    if (res->status != 200) {
        throw Error(ErrorCode::NetworkError, "request for " + qid + " returned HTTP " + std::to_string(res->status));
    }
    return label_from_entity_json(qid, res->body);
}

QidCache::QidCache(std::filesystem::path directory, bool offline, std::shared_ptr<LabelFetcher> fetcher)
    : file_(std::move(directory) / "labels.json"), offline_(offline), fetcher_(std::move(fetcher)) {
    if (!std::filesystem::exists(file_)) return;
    const auto j = Json::parse(read_file(file_), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorCode::ModelFormatError, file_.string() + ": not a label cache");
    }
    for (const auto& [qid, entry] : j.items()) {
        entries_[qid] = {entry.at("label").get<std::string>(), entry.value("fetched_at", std::string{})};
    }
}

std::optional<CachedLabel> QidCache::cached(const std::string& qid) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(qid);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::size_t QidCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::string QidCache::label(const std::string& qid) {
    if (!is_qid(qid)) throw Error(ErrorCode::InvalidConfig, "'" + qid + "' is not a QID");
    if (auto hit = cached(qid)) return hit->label;
    if (offline_) throw Error(ErrorCode::OfflineMiss, qid + " is not cached and the client is offline");
    if (!fetcher_) throw Error(ErrorCode::NetworkError, "no label fetcher configured");

    // One writer at a time; a concurrent caller may have stored it meanwhile.
    std::lock_guard fetch_lock(fetch_mutex_);
    if (auto hit = cached(qid)) return hit->label;
    const auto label = fetcher_->fetch(qid);
    if (!label) throw Error(ErrorCode::UnknownQid, qid + " does not exist");
    {
        std::unique_lock lock(mutex_);
        entries_.emplace(qid, CachedLabel{*label, utc_now()});
    }
    persist();
    return *label;
}

void QidCache::persist() const {
    Json j = Json::object();
    {
        std::shared_lock lock(mutex_);
        for (const auto& [qid, entry] : entries_) j[qid] = {{"label", entry.label}, {"fetched_at", entry.fetched_at}};
    }
    std::filesystem::create_directories(file_.parent_path());
    auto tmp = file_;
    tmp += ".tmp";
    write_file(tmp, j.dump(2) + "\n");
    std::filesystem::rename(tmp, file_);
}

} // namespace fcr
