#pragma once

#include <string>

namespace greenscore::llm {

// Markers shared between prompt builders and the mock backend's prompt
// parser. Changing one side without the other breaks offline runs, so they
// live in one place.

inline constexpr const char* kCompanyMarker = "### Company: ";
inline constexpr const char* kBlockMarker = "### Block: ";
inline constexpr const char* kAnswerMarker = "Answer: ";
inline constexpr const char* kYearlyRubricsMarker = "[YEARLY-RUBRICS]";

inline constexpr const char* kSchemaRubric = "rubric";
inline constexpr const char* kSchemaScoreChunk = "score_chunk";
inline constexpr const char* kSchemaNaiveSeries = "naive_series";

/// Suffix appended by Gateway::complete_structured; the quoted schema name
/// lets the offline mock recognize what document shape is expected.
std::string structured_output_suffix(const std::string& schema_name);

/// Feedback suffix for a re-issue after a failed parse/validation.
std::string structured_retry_suffix(const std::string& schema_name,
                                    const std::string& error, int attempt);

}  // namespace greenscore::llm
