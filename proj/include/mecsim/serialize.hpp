#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "mecsim/model.hpp"

namespace mecsim {

// Raised for malformed documents; the message names the offending field.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const Solution& sol);
// Accepts {} as the empty solution. rb_owner entries may be ids or null.
Solution solution_from_json(const nlohmann::json& j, const ProblemInstance& inst);

// Non-finite metric values serialize as null.
nlohmann::json evaluation_to_json(const Evaluation& eval);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a over the canonical configuration string; embedded in artifacts so
// outputs can be matched to the exact configuration that produced them.
std::string config_hash(const std::string& canonical_config);

}  // namespace mecsim
