#include "greenscore/csv.hpp"

#include "greenscore/util.hpp"

namespace greenscore {

CsvReader::CsvReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw ConfigError("cannot open file: " + path.string());
}

bool CsvReader::next(std::vector<std::string>& row) {
    row.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in_.get()) != EOF) {
        any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    field += '"';
                    in_.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (ch == '\r') {
            // swallow; the \n that follows terminates the record
        } else if (ch == '\n') {
            row.push_back(std::move(field));
            ++record_number_;
            return true;
        } else {
            field += ch;
        }
    }
    if (!any) return false;
    row.push_back(std::move(field));
    ++record_number_;
    return true;
}

std::string csv_escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    out += '\n';
    return out;
}

}  // namespace greenscore
