#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace greenscore::llm {

/// Content-addressed completion cache.
///
/// Layout: <dir>/<first 2 hex of key>/<key>.txt holding the reply text,
/// plus <dir>/index.tsv (key, model_id, bytes; kept sorted by key).
/// Entries are immutable; writes go through a temp file + rename.
class CompletionCache {
public:
    explicit CompletionCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& text, const std::string& model_id);

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path entry_path(const std::string& key) const;
    void rewrite_index() const;

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    std::map<std::string, std::pair<std::string, std::size_t>> index_;  // key -> (model, bytes)
};

}  // namespace greenscore::llm
