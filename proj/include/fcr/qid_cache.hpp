#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace fcr {

/// Source of knowledge-base labels.
class LabelFetcher {
public:
    virtual ~LabelFetcher() = default;
    /// The English label of `qid`; nullopt when the entity does not exist.
    /// Throws NetworkError for transport failures.
    virtual std::optional<std::string> fetch(const std::string& qid) = 0;
};

/// Reads labels from the public Wikidata entity endpoint over HTTPS.
class WikidataFetcher : public LabelFetcher {
public:
    /// `base_url` is scheme and host, e.g. "https://www.wikidata.org".
    explicit WikidataFetcher(std::string base_url = "https://www.wikidata.org", int timeout_seconds = 10);
    std::optional<std::string> fetch(const std::string& qid) override;

    /// Label from a Special:EntityData JSON document; English first, then any language.
    static std::optional<std::string> label_from_entity_json(const std::string& qid, const std::string& body);

private:
    std::string base_url_;
    int timeout_seconds_;
};

struct CachedLabel {
    std::string label;
    std::string fetched_at; // ISO 8601, UTC
};

/// On-disk QID -> label map (`labels.json` inside the cache directory) with
/// read-through to a fetcher. Entries are never rewritten once stored.
class QidCache {
public:
    /// Loads existing entries. In offline mode the fetcher is never called.
    QidCache(std::filesystem::path directory, bool offline, std::shared_ptr<LabelFetcher> fetcher = nullptr);

    /// Throws InvalidConfig for a malformed QID, OfflineMiss when offline and
    /// uncached, UnknownQid when the knowledge base has no such entity,
    /// NetworkError when no fetcher is configured or the fetch fails.
    std::string label(const std::string& qid);

    std::optional<CachedLabel> cached(const std::string& qid) const;
    std::size_t size() const;
    bool offline() const noexcept { return offline_; }
    const std::filesystem::path& file() const noexcept { return file_; }

private:
    void persist() const;

    std::filesystem::path file_;
    bool offline_;
    std::shared_ptr<LabelFetcher> fetcher_;
    mutable std::shared_mutex mutex_;
    std::mutex fetch_mutex_;
    std::map<std::string, CachedLabel> entries_;
};

} // namespace fcr
