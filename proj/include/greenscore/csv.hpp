#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace greenscore {

/// Streaming CSV reader (RFC 4180 style: quoted fields, "" escapes, embedded
/// commas and newlines, optional CRLF line endings).
class CsvReader {
public:
    explicit CsvReader(const std::filesystem::path& path);

    /// Reads the next record into `row`. Returns false at end of input.
    bool next(std::vector<std::string>& row);

    /// 1-based index of the record most recently returned by next().
    std::size_t record_number() const { return record_number_; }

private:
    std::ifstream in_;
    std::size_t record_number_ = 0;
};

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace greenscore
