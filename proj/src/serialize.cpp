#include "mecsim/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mecsim {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number())
    throw ParseError("missing or non-numeric field '" + field + "'");
  return j[field].get<double>();
}

std::int64_t require_int(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number_integer())
    throw ParseError("missing or non-integer field '" + field + "'");
  return j[field].get<std::int64_t>();
}

json task_to_json(const Task& t) {
  json j{{"id", t.id}, {"deadline_ms", t.deadline_ms}, {"load_cycles", t.load_cycles}};
  if (t.kind == TaskKind::Arrival) j["size_bits"] = t.size_bits;
  return j;
}

Task task_from_json(const json& j, TaskKind kind, const std::string& where) {
  if (!j.is_object()) throw ParseError("entry of '" + where + "' is not an object");
  Task t;
  t.kind = kind;
  t.id = static_cast<TaskId>(require_int(j, "id"));
  t.deadline_ms = require_number(j, "deadline_ms");
  t.load_cycles = require_int(j, "load_cycles");
  t.size_bits = kind == TaskKind::Arrival ? require_int(j, "size_bits") : 0;
  return t;
}

}  // namespace

json instance_to_json(const ProblemInstance& inst) {
  json arrivals = json::array();
  for (const Task& t : inst.arrivals) arrivals.push_back(task_to_json(t));
  json queued = json::array();
  for (const Task& t : inst.queued) queued.push_back(task_to_json(t));
  return json{{"rb_count", inst.rb_count},
              {"rb_bandwidth_hz", inst.rb_bandwidth_hz},
              {"cpu_hz", inst.cpu_hz},
              {"lambda", inst.lambda},
              {"modulation_bits_per_symbol", inst.modulation_bits_per_symbol},
              {"arrivals", arrivals},
              {"queued", queued},
              {"sjnr", inst.sjnr}};
}

ProblemInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance document is not an object");
  ProblemInstance inst;
  inst.rb_count = static_cast<int>(require_int(j, "rb_count"));
  inst.rb_bandwidth_hz = require_number(j, "rb_bandwidth_hz");
  inst.cpu_hz = require_number(j, "cpu_hz");
  if (j.contains("lambda")) inst.lambda = require_number(j, "lambda");
  if (j.contains("modulation_bits_per_symbol"))
    inst.modulation_bits_per_symbol = static_cast<int>(require_int(j, "modulation_bits_per_symbol"));
  if (!j.contains("arrivals") || !j["arrivals"].is_array())
    throw ParseError("missing or non-array field 'arrivals'");
  if (!j.contains("queued") || !j["queued"].is_array())
    throw ParseError("missing or non-array field 'queued'");
  for (const json& t : j["arrivals"])
    inst.arrivals.push_back(task_from_json(t, TaskKind::Arrival, "arrivals"));
  for (const json& t : j["queued"])
    inst.queued.push_back(task_from_json(t, TaskKind::Queued, "queued"));
  if (!j.contains("sjnr") || !j["sjnr"].is_array())
    throw ParseError("missing or non-array field 'sjnr'");
  for (const json& row : j["sjnr"]) {
    if (!row.is_array()) throw ParseError("field 'sjnr' must be an array of arrays");
    std::vector<double> r;
    for (const json& v : row) {
      if (!v.is_number()) throw ParseError("field 'sjnr' must hold numbers");
      r.push_back(v.get<double>());
    }
    inst.sjnr.push_back(std::move(r));
  }
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return inst;
}

json solution_to_json(const Solution& sol) {
  json positions = json::object();
  for (const auto& [id, pos] : sol.queue_position) positions[std::to_string(id)] = pos;
  json owners = json::array();
  for (const auto& o : sol.rb_owner) {
    if (o) owners.push_back(*o);
    else owners.push_back(nullptr);
  }
  return json{{"queue_position", positions}, {"rb_owner", owners}};
}

Solution solution_from_json(const json& j, const ProblemInstance& inst) {
  if (!j.is_object()) throw ParseError("solution document is not an object");
  Solution sol;
  sol.rb_owner.assign(inst.rb_count, std::nullopt);
  if (j.contains("queue_position")) {
    if (!j["queue_position"].is_object())
      throw ParseError("field 'queue_position' must map task ids to positions");
    for (const auto& [key, value] : j["queue_position"].items()) {
      TaskId id;
      try {
        std::size_t used = 0;
        id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ParseError("field 'queue_position' has non-integer task id key '" + key + "'");
      }
      if (!value.is_number_integer())
        throw ParseError("field 'queue_position." + key + "' must be an integer position");
      sol.queue_position[id] = value.get<int>();
    }
  }
  if (j.contains("rb_owner")) {
    if (!j["rb_owner"].is_array())
      throw ParseError("field 'rb_owner' must be an array of ids or nulls");
    const json& owners = j["rb_owner"];
    if (static_cast<int>(owners.size()) != inst.rb_count)
      throw ParseError("field 'rb_owner' must have exactly rb_count entries");
    for (int k = 0; k < inst.rb_count; ++k) {
      if (owners[k].is_null()) continue;
      if (!owners[k].is_number_integer())
        throw ParseError("field 'rb_owner' entries must be integers or null");
      sol.rb_owner[k] = owners[k].get<TaskId>();
    }
  }
  return sol;
}

json evaluation_to_json(const Evaluation& eval) {
  auto num_or_null = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  json per_task = json::object();
  for (const auto& [id, tm] : eval.per_task) {
    per_task[std::to_string(id)] = json{
        {"queue_pos", tm.queue_pos},
        {"completion_ms", num_or_null(tm.completion_ms)},
        {"sched_ind", tm.sched_ind},
        {"dec_ind", tm.dec_ind},
        {"comm_ms", num_or_null(tm.comm_ms)},
        {"comp_ms", num_or_null(tm.comp_ms)},
        {"rate_bps", tm.rate_bps},
        {"td_error", tm.td_error},
    };
  }
  json violations = json::array();
  for (const auto& v : eval.violations) {
    violations.push_back(json{{"kind", violation_kind_name(v.kind)},
                              {"task_id", v.task_id},
                              {"detail", v.detail}});
  }
  return json{{"per_task", per_task},
              {"expected_drops", eval.expected_drops},
              {"drop_ratio", eval.drop_ratio},
              {"bw_utilization", eval.bw_utilization},
              {"objective", eval.objective},
              {"feasible", eval.feasible},
              {"violations", violations}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

std::string config_hash(const std::string& canonical_config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical_config) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mecsim
