#include "greenscore/llm/cache.hpp"

#include <fstream>

#include "greenscore/util.hpp"

namespace greenscore::llm {

CompletionCache::CompletionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    // rebuild the in-memory index from index.tsv when resuming
    std::ifstream in(dir_ / "index.tsv");
    std::string line;
    while (std::getline(in, line)) {
        auto fields = split(line, '\t');
        if (fields.size() != 3) continue;
        index_[fields[0]] = {fields[1], static_cast<std::size_t>(std::stoull(fields[2]))};
    }
}

std::filesystem::path CompletionCache::entry_path(const std::string& key) const {
    return dir_ / key.substr(0, 2) / (key + ".txt");
}

std::optional<std::string> CompletionCache::get(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto path = entry_path(key);
    if (!std::filesystem::exists(path)) return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return text;
}

void CompletionCache::put(const std::string& key, const std::string& text,
                          const std::string& model_id) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto path = entry_path(key);
    if (std::filesystem::exists(path)) return;  // entries are immutable
    atomic_write_file(path, text);
    index_[key] = {model_id, text.size()};
    rewrite_index();
}

void CompletionCache::rewrite_index() const {
    std::string content;
    for (const auto& [key, meta] : index_)
        content += key + "\t" + meta.first + "\t" + std::to_string(meta.second) + "\n";
    atomic_write_file(dir_ / "index.tsv", content);
}

}  // namespace greenscore::llm
