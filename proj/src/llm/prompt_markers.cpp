#include "greenscore/llm/prompt_markers.hpp"

#include <string>

namespace greenscore::llm {

std::string structured_output_suffix(const std::string& schema_name) {
    return "\n\nFormat requirement: respond with exactly one fenced ```json code "
           "block containing a single JSON document that conforms to the \"" +
           schema_name +
           "\" response schema. Do not emit any other fenced code block before it.";
}

std::string structured_retry_suffix(const std::string& schema_name,
                                    const std::string& error, int attempt) {
    return "\n\n[retry " + std::to_string(attempt) + "] Your previous reply was not a valid \"" +
           schema_name + "\" document: " + error +
           ". Reply again with only the fenced ```json document.";
}

}  // namespace greenscore::llm
