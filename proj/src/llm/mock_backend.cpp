#include "greenscore/llm/mock_backend.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

#include "greenscore/hash.hpp"
#include "greenscore/llm/prompt_markers.hpp"
#include "greenscore/util.hpp"

namespace greenscore::llm {
namespace {

struct Theme {
    const char* name;
    const char* focus;
};

// Item-name words double as the scoring keywords, so answers that mention a
// theme earn points on the matching item.
constexpr Theme kThemePool[] = {
    {"Strategic Integration", "integration of climate priorities into core business strategy"},
    {"Targets & Metrics", "quantified targets and progress metrics"},
    {"Scenario Analysis", "scenario analysis and stress testing of climate pathways"},
    {"Governance & Oversight", "board-level governance and management oversight"},
    {"Stakeholder Engagement", "engagement with investors, suppliers and policymakers"},
    {"Emissions Accounting", "emissions accounting and reduction programs"},
    {"Risk Management", "identification and management of climate risks"},
    {"Supply Chain Collaboration", "collaboration across the supply chain"},
};
constexpr std::size_t kThemeCount = sizeof(kThemePool) / sizeof(kThemePool[0]);
constexpr std::size_t kRubricItems = 5;

std::vector<std::string> keyword_split(const std::string& name) {
    std::vector<std::string> words;
    std::string current;
    for (char c : lower_ascii(name)) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current += c;
        } else if (!current.empty()) {
            if (current.size() >= 4) words.push_back(current);
            current.clear();
        }
    }
    if (current.size() >= 4) words.push_back(current);
    return words;
}

struct PromptSection {
    std::string label;
    std::string answer_text;  // answer lines only, question headers stripped
};

// Splits the prompt at "### "-prefixed heading lines and keeps the body text
// that belongs to answers (everything except "Question (" header lines).
std::vector<PromptSection> parse_sections(const std::string& text, const char* marker) {
    std::vector<PromptSection> sections;
    std::size_t pos = 0;
    const std::string marker_str = marker;
    while ((pos = text.find(marker_str, pos)) != std::string::npos) {
        if (pos != 0 && text[pos - 1] != '\n') {
            pos += marker_str.size();
            continue;
        }
        std::size_t label_start = pos + marker_str.size();
        std::size_t line_end = text.find('\n', label_start);
        if (line_end == std::string::npos) line_end = text.size();
        PromptSection section;
        section.label = trim(text.substr(label_start, line_end - label_start));
        std::size_t body_start = std::min(line_end + 1, text.size());
        std::size_t body_end = text.find("\n### ", body_start);
        if (body_end == std::string::npos) body_end = text.size();
        std::string body = text.substr(body_start, body_end - body_start);
        for (const auto& line : split(body, '\n')) {
            if (starts_with(line, "Question (")) continue;
            std::string content = line;
            if (starts_with(content, kAnswerMarker))
                content = content.substr(std::string(kAnswerMarker).size());
            section.answer_text += content;
            section.answer_text += '\n';
        }
        sections.push_back(std::move(section));
        pos = body_end;
    }
    return sections;
}

std::size_t keyword_count(const std::string& lowered_text,
                          const std::vector<std::string>& keywords) {
    std::size_t count = 0;
    for (const auto& kw : keywords) count += count_occurrences(lowered_text, kw);
    return count;
}

std::optional<nlohmann::json> first_fenced_json(const std::string& text) {
    std::size_t pos = 0;
    while ((pos = text.find("```", pos)) != std::string::npos) {
        std::size_t body_start = text.find('\n', pos);
        if (body_start == std::string::npos) return std::nullopt;
        std::size_t body_end = text.find("```", body_start);
        if (body_end == std::string::npos) return std::nullopt;
        auto doc = nlohmann::json::parse(
            text.substr(body_start + 1, body_end - body_start - 1), nullptr, false);
        if (!doc.is_discarded()) return doc;
        pos = body_end + 3;
    }
    return std::nullopt;
}

}  // namespace

MockBackend::MockBackend(MockOptions opts) : opts_(std::move(opts)) {}

std::vector<std::string> MockBackend::seen_user_texts() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return seen_;
}

std::string MockBackend::complete(const CompletionRequest& request) {
    calls_.fetch_add(1);
    if (opts_.delay_ms > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(opts_.delay_ms));
    {
        std::lock_guard<std::mutex> lock(mutex_);
        seen_.push_back(request.user_text);
        if (!opts_.script.empty()) {
            std::size_t i = std::min(script_index_, opts_.script.size() - 1);
            ++script_index_;
            return opts_.script[i];
        }
    }
    return synthesize(request);
}

std::string MockBackend::synthesize(const CompletionRequest& request) const {
    const std::string& user = request.user_text;
    const bool wants_rubric =
        user.find(std::string("\"") + kSchemaRubric + "\" response schema") != std::string::npos;
    const bool wants_scores =
        user.find(std::string("\"") + kSchemaScoreChunk + "\" response schema") != std::string::npos;
    const bool wants_naive =
        user.find(std::string("\"") + kSchemaNaiveSeries + "\" response schema") != std::string::npos;

    if (wants_rubric) {
        const bool master = user.find(kYearlyRubricsMarker) != std::string::npos;
        std::mt19937_64 rng(opts_.seed ^ fnv1a64(user));
        std::vector<std::size_t> picks(kThemeCount);
        std::iota(picks.begin(), picks.end(), 0);
        std::shuffle(picks.begin(), picks.end(), rng);
        picks.resize(kRubricItems);
        std::sort(picks.begin(), picks.end());

        nlohmann::json items = nlohmann::json::array();
        int max_total = 0;
        for (std::size_t i = 0; i < picks.size(); ++i) {
            const Theme& theme = kThemePool[picks[i]];
            nlohmann::json guidelines = nlohmann::json::array();
            int max_points;
            if (master) {
                max_points = 4;
                guidelines.push_back({{"points", 0}, {"description", "Not addressed"}});
                guidelines.push_back(
                    {{"points", 1},
                     {"description", std::string("Early-stage mention of ") + theme.focus}});
                guidelines.push_back(
                    {{"points", 2},
                     {"description", std::string("Partial or qualitative coverage of ") + theme.focus}});
                guidelines.push_back(
                    {{"points", 3},
                     {"description", std::string("Substantive coverage of ") + theme.focus +
                                         " with examples"}});
                guidelines.push_back(
                    {{"points", 4},
                     {"description", std::string("Comprehensive, quantified ") + theme.focus +
                                         " integrated into planning"}});
            } else {
                max_points = 2;
                guidelines.push_back(
                    {{"points", 1}, {"description", std::string("Mentions ") + theme.focus}});
                guidelines.push_back(
                    {{"points", 2},
                     {"description", std::string("Systematic evidence of ") + theme.focus}});
            }
            max_total += max_points;
            items.push_back({{"index", static_cast<int>(i) + 1},
                             {"name", theme.name},
                             {"max_points", max_points},
                             {"guidelines", guidelines}});
        }
        nlohmann::json doc = {{"items", items}, {"max_total", max_total}};
        return std::string("Here is the rubric derived from the responses.\n\n```json\n") +
               doc.dump(2) + "\n```\n";
    }

    if (wants_scores) {
        auto rubric_doc = first_fenced_json(user);
        nlohmann::json scores = nlohmann::json::array();
        std::vector<std::pair<std::vector<std::string>, int>> item_keywords;
        if (rubric_doc && rubric_doc->contains("items")) {
            std::size_t i = 0;
            for (const auto& item : (*rubric_doc)["items"]) {
                // echo mode keys every item to a fixed theme, so the same
                // answers earn the same scores under any rubric
                const std::string name =
                    opts_.echo_scores ? kThemePool[i % kThemeCount].name
                                      : item.value("name", std::string());
                item_keywords.emplace_back(keyword_split(name),
                                           item.value("max_points", 0));
                ++i;
            }
        }
        for (const auto& section : parse_sections(user, kCompanyMarker)) {
            const std::string lowered = lower_ascii(section.answer_text);
            nlohmann::json item_scores = nlohmann::json::array();
            for (const auto& [keywords, max_points] : item_keywords) {
                int count = static_cast<int>(keyword_count(lowered, keywords));
                int score = std::min(max_points, count);
                if (opts_.echo_scores) score = std::min({2, max_points, count});
                item_scores.push_back(score);
            }
            scores.push_back({{"company_id", section.label}, {"items", item_scores}});
        }
        nlohmann::json doc = {{"scores", scores}};
        return std::string("Scores follow.\n\n```json\n") + doc.dump(2) + "\n```\n";
    }

    if (wants_naive) {
        std::vector<std::string> theme_words;
        for (const Theme& theme : kThemePool)
            for (auto& w : keyword_split(theme.name)) theme_words.push_back(w);
        nlohmann::json scores = nlohmann::json::array();
        for (const auto& section : parse_sections(user, kBlockMarker)) {
            const std::string lowered = lower_ascii(section.answer_text);
            int count = static_cast<int>(keyword_count(lowered, theme_words));
            scores.push_back({{"block", section.label},
                              {"score", std::min(100, 3 * count)}});
        }
        nlohmann::json doc = {{"scores", scores}};
        return std::string("Block scores follow.\n\n```json\n") + doc.dump(2) + "\n```\n";
    }

    // free-text fallback: deterministic acknowledgement
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(opts_.seed ^ fnv1a64(user)));
    return std::string("ack:") + buf;
}

}  // namespace greenscore::llm
