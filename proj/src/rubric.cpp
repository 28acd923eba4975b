#include "greenscore/rubric.hpp"

#include <algorithm>
#include <set>

#include "greenscore/util.hpp"

namespace greenscore {

int Rubric::max_total() const {
    int total = 0;
    for (const auto& item : items) total += item.max_points;
    return total;
}

std::vector<Violation> validate_rubric(const Rubric& rubric) {
    std::vector<Violation> v;
    if (rubric.items.empty()) {
        v.push_back({"empty", "rubric has no items"});
        return v;
    }
    for (std::size_t i = 0; i < rubric.items.size(); ++i) {
        const RubricItem& item = rubric.items[i];
        const std::string where = "item " + std::to_string(i + 1);
        if (item.index != static_cast<int>(i) + 1)
            v.push_back({"index_gap", where + ": expected index " +
                                           std::to_string(i + 1) + ", found " +
                                           std::to_string(item.index)});
        if (item.name.empty()) v.push_back({"unnamed", where + ": empty name"});
        if (item.max_points < 1)
            v.push_back({"bad_max", where + ": max_points must be >= 1"});
        if (item.guidelines.empty()) {
            v.push_back({"no_guidelines", where + ": no guideline levels"});
            continue;
        }
        std::set<int> levels;
        bool max_seen = false;
        for (const auto& g : item.guidelines) {
            if (g.points < 0 || g.points > item.max_points)
                v.push_back({"level_out_of_range",
                             where + ": level " + std::to_string(g.points) +
                                 " exceeds max " + std::to_string(item.max_points)});
            if (!levels.insert(g.points).second)
                v.push_back({"duplicate_level",
                             where + ": duplicate level " + std::to_string(g.points)});
            if (g.points == item.max_points) max_seen = true;
        }
        if (!max_seen)
            v.push_back({"max_level_missing",
                         where + ": no guideline at max_points " +
                             std::to_string(item.max_points)});
    }
    if (rubric.declared_max_total && *rubric.declared_max_total != rubric.max_total())
        v.push_back({"total_mismatch",
                     "declared max_total " + std::to_string(*rubric.declared_max_total) +
                         " != item sum " + std::to_string(rubric.max_total())});
    return v;
}

nlohmann::json rubric_to_json(const Rubric& rubric) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& item : rubric.items) {
        nlohmann::json guidelines = nlohmann::json::array();
        for (const auto& g : item.guidelines)
            guidelines.push_back({{"points", g.points}, {"description", g.description}});
        items.push_back({{"index", item.index},
                         {"name", item.name},
                         {"max_points", item.max_points},
                         {"guidelines", guidelines}});
    }
    return {{"rubric_id", rubric.rubric_id},
            {"max_total", rubric.max_total()},
            {"items", items}};
}

Rubric rubric_from_json(const nlohmann::json& doc, const std::string& rubric_id) {
    if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array())
        throw std::runtime_error("rubric document must be an object with an items array");
    Rubric rubric;
    rubric.rubric_id = rubric_id;
    for (const auto& item_doc : doc["items"]) {
        if (!item_doc.is_object())
            throw std::runtime_error("rubric item must be an object");
        RubricItem item;
        if (!item_doc.contains("index") || !item_doc["index"].is_number_integer())
            throw std::runtime_error("rubric item missing integer index");
        item.index = item_doc["index"].get<int>();
        if (!item_doc.contains("name") || !item_doc["name"].is_string())
            throw std::runtime_error("rubric item missing name");
        item.name = item_doc["name"].get<std::string>();
        if (!item_doc.contains("max_points") || !item_doc["max_points"].is_number_integer())
            throw std::runtime_error("rubric item missing integer max_points");
        item.max_points = item_doc["max_points"].get<int>();
        if (!item_doc.contains("guidelines") || !item_doc["guidelines"].is_array())
            throw std::runtime_error("rubric item missing guidelines array");
        for (const auto& g_doc : item_doc["guidelines"]) {
            if (!g_doc.is_object() || !g_doc.contains("points") ||
                !g_doc["points"].is_number_integer() || !g_doc.contains("description") ||
                !g_doc["description"].is_string())
                throw std::runtime_error("guideline must have integer points and description");
            item.guidelines.push_back(
                {g_doc["points"].get<int>(), g_doc["description"].get<std::string>()});
        }
        rubric.items.push_back(std::move(item));
    }
    if (doc.contains("max_total") && doc["max_total"].is_number_integer())
        rubric.declared_max_total = doc["max_total"].get<int>();
    return rubric;
}

std::string rubric_prompt_block(const Rubric& rubric) {
    return "```json\n" + rubric_to_json(rubric).dump(2) + "\n```";
}

std::string rubric_file_stem(const std::string& rubric_id) {
    std::string stem = rubric_id;
    std::replace(stem.begin(), stem.end(), ':', '_');
    return stem;
}

void save_rubric(const Rubric& rubric, const std::filesystem::path& dir) {
    atomic_write_file(dir / (rubric_file_stem(rubric.rubric_id) + ".txt"),
                      rubric_to_json(rubric).dump(2) + "\n");
}

Rubric load_rubric(const std::filesystem::path& file, const std::string& rubric_id) {
    nlohmann::json doc = nlohmann::json::parse(read_file(file));
    return rubric_from_json(doc, rubric_id);
}

}  // namespace greenscore
