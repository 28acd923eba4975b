#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace greenscore {

/// Configuration or input problems (bad paths, malformed config, missing
/// columns). The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Runtime failures while talking to an LLM backend (exit code 1).
struct GatewayError : std::runtime_error {
    explicit GatewayError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A structured completion that never produced a valid document. Carries the
/// raw replies so they can be audited.
struct StructuredOutputError : GatewayError {
    StructuredOutputError(const std::string& msg, std::vector<std::string> replies)
        : GatewayError(msg), raw_replies(std::move(replies)) {}
    std::vector<std::string> raw_replies;
};

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string lower_ascii(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

/// Canonical decimal rendering used for every CSV/report double so that
/// repeated runs emit identical bytes.
std::string fmt_double(double v);

/// Number of non-overlapping occurrences of `needle` in `haystack`.
std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

/// Replaces standalone 4-digit calendar years (1900-2099) with `[year]`.
std::string mask_years(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Write-to-temp then rename, so readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

/// Runs fn(0..n-1) on up to `max_parallel` worker threads. Rethrows the first
/// exception after all workers stop.
void parallel_for(std::size_t n, std::size_t max_parallel,
                  const std::function<void(std::size_t)>& fn);

}  // namespace greenscore
