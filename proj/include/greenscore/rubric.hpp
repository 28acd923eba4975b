#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace greenscore {

struct GuidelineLevel {
    int points = 0;
    std::string description;

    bool operator==(const GuidelineLevel&) const = default;
};

struct RubricItem {
    int index = 0;  // 1-based, contiguous
    std::string name;
    int max_points = 0;
    std::vector<GuidelineLevel> guidelines;

    bool operator==(const RubricItem&) const = default;
};

/// A scoring instrument: named items with graded level descriptions.
struct Rubric {
    std::string rubric_id;  // "yearly:<year>" or "master"
    std::vector<RubricItem> items;
    /// max_total as stated by the producing document, when one was stated;
    /// validate_rubric flags a mismatch with the computed sum.
    std::optional<int> declared_max_total;
    std::string source_prompt_hash;

    int max_total() const;

    bool operator==(const Rubric& o) const {
        return rubric_id == o.rubric_id && items == o.items;
    }
};

struct RubricSet {
    std::map<int, Rubric> yearly;
    std::optional<Rubric> master;
};

struct Violation {
    std::string code;
    std::string detail;
};

/// Structural checks only (no semantics): contiguous 1..n indices, distinct
/// guideline levels within [0, max_points], max_points present as a level,
/// declared total consistent with the item sum.
std::vector<Violation> validate_rubric(const Rubric& rubric);

nlohmann::json rubric_to_json(const Rubric& rubric);

/// Parses a rubric document; throws std::runtime_error on shape errors
/// (missing fields, wrong types). Structural invariants are checked
/// separately by validate_rubric.
Rubric rubric_from_json(const nlohmann::json& doc, const std::string& rubric_id);

/// Fenced ```json block embedding, used inside prompts.
std::string rubric_prompt_block(const Rubric& rubric);

/// File name stem for a rubric id ("yearly:2010" -> "yearly_2010").
std::string rubric_file_stem(const std::string& rubric_id);

void save_rubric(const Rubric& rubric, const std::filesystem::path& dir);
Rubric load_rubric(const std::filesystem::path& file, const std::string& rubric_id);

}  // namespace greenscore
