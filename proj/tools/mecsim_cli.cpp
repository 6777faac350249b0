// Command line front end: paired strategy sweeps, single-solution evaluation
// and single-instance solving over JSON documents.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "mecsim/evaluator.hpp"
#include "mecsim/experiments.hpp"
#include "mecsim/serialize.hpp"
#include "mecsim/solvers.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

constexpr const char* kBerModel = "awgn-16qam-q-approx";

struct CliError {
  int code;
  std::string message;
};

// ---------------------------------------------------------------------------
// Config file support: "key = value" lines, '#' comments. Flags win over file
// values; unknown keys are rejected with their line number.

struct ConfigEntry {
  std::string value;
  int line;
};

std::map<std::string, ConfigEntry> parse_config_file(const std::string& path) {
  std::string text = mecsim::read_text_file(path);
  std::map<std::string, ConfigEntry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CliError{kExitUsage, path + ":" + std::to_string(lineno) +
                                     ": expected 'key = value'"};
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw CliError{kExitUsage, path + ":" + std::to_string(lineno) + ": empty key"};
    entries[key] = ConfigEntry{value, lineno};
  }
  return entries;
}

// Applies config values to CLI11 options that were not set on the command
// line, so every key shares the flags' parsing and validation.
void merge_config(CLI::App& cmd, const std::string& path) {
  auto entries = parse_config_file(path);
  for (const auto& [key, entry] : entries) {
    CLI::Option* opt = nullptr;
    try {
      opt = cmd.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw CliError{kExitUsage, path + ":" + std::to_string(entry.line) +
                                     ": unknown key '" + key + "'"};
    }
    if (opt->count() > 0) continue;  // command line takes precedence
    try {
      if (opt->get_expected_min() == 0) {
        // Flag-style option: accept true/false/1/0.
        std::string v = entry.value;
        for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (v == "true" || v == "1" || v.empty()) opt->add_result("true");
        else if (v == "false" || v == "0") opt->add_result("false");
        else throw CLI::ConversionError(key, entry.value);
      } else {
        opt->add_result(entry.value);
      }
      opt->run_callback();
    } catch (const CLI::Error&) {
      throw CliError{kExitUsage, path + ":" + std::to_string(entry.line) +
                                     ": invalid value '" + entry.value + "' for key '" + key +
                                     "'"};
    }
  }
}

// ---------------------------------------------------------------------------

std::vector<mecsim::Strategy> parse_strategy_list(const std::string& csv) {
  std::vector<mecsim::Strategy> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(mecsim::parse_strategy(item));
  }
  if (out.empty()) throw CliError{kExitUsage, "no strategies given"};
  return out;
}

json ranges_to_json(const mecsim::GenRanges& r) {
  return json{{"deadline_ms", {r.deadline_ms_min, r.deadline_ms_max}},
              {"size_bits", {r.size_bits_min, r.size_bits_max}},
              {"load_cycles", {r.load_cycles_min, r.load_cycles_max}},
              {"arrival_count", r.arrival_count},
              {"queued_count", r.queued_count},
              {"poisson_arrivals", r.poisson_arrivals},
              {"rb_bandwidth_hz", r.rb_bandwidth_hz},
              {"cpu_hz", r.cpu_hz},
              {"lambda", r.lambda}};
}

void check_output_path(const std::string& out) {
  namespace fs = std::filesystem;
  fs::path p(out);
  fs::path dir = p.parent_path();
  if (!dir.empty() && !fs::is_directory(dir))
    throw CliError{kExitUsage, "output directory does not exist: " + dir.string()};
}

json load_json_file(const std::string& path, const char* what) {
  std::string text = mecsim::read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw CliError{kExitUsage, std::string(what) + " file is not valid JSON: " + path};
  return j;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string scenario = "sjnr";
  int rb = 10;
  double sjnr_db = 5.0;
  int runs = 300;
  std::optional<std::uint64_t> seed;
  double lambda = 0.5;
  std::string strategies = "Proposed,ProposedNTD,FCFS,STF";
  int ga_pop = 200;
  int ga_gens = 100;
  bool full_budget = false;
  std::string out;
  int threads = 0;
  double infeasible_threshold = 0.5;
  int arrivals = 5;
  int queued = 3;
  double deadline_min = 140.0, deadline_max = 200.0;
  std::int64_t size_min = 8000, size_max = 80000;
  std::int64_t load_min = 2'000'000, load_max = 50'000'000;
};

int cmd_sweep(const SweepArgs& a) {
  if (!a.seed)
    throw CliError{kExitUsage, "sweep requires --seed: every random draw flows from it"};
  if (a.out.empty()) throw CliError{kExitUsage, "sweep requires --out CSV path"};
  check_output_path(a.out);

  mecsim::SweepSpec spec;
  if (a.scenario == "sjnr") spec.scenario = mecsim::Scenario::Sjnr;
  else if (a.scenario == "rb") spec.scenario = mecsim::Scenario::Rb;
  else throw CliError{kExitUsage, "unknown scenario '" + a.scenario + "': valid are sjnr, rb"};
  spec.fixed_rb = a.rb;
  spec.fixed_sjnr_db = a.sjnr_db;
  spec.replicates = a.runs;
  spec.strategies = parse_strategy_list(a.strategies);
  spec.base_seed = *a.seed;
  spec.threads = a.threads;
  spec.ranges.lambda = a.lambda;
  spec.ranges.arrival_count = a.arrivals;
  spec.ranges.queued_count = a.queued;
  spec.ranges.deadline_ms_min = a.deadline_min;
  spec.ranges.deadline_ms_max = a.deadline_max;
  spec.ranges.size_bits_min = a.size_min;
  spec.ranges.size_bits_max = a.size_max;
  spec.ranges.load_cycles_min = a.load_min;
  spec.ranges.load_cycles_max = a.load_max;
  spec.ga.population_size = a.full_budget ? 2000 : a.ga_pop;
  spec.ga.max_generations = a.full_budget ? 500 : a.ga_gens;

  json cfg{{"command", "sweep"},
           {"scenario", a.scenario},
           {"fixed_rb", spec.fixed_rb},
           {"fixed_sjnr_db", spec.fixed_sjnr_db},
           {"replicates", spec.replicates},
           {"strategies", a.strategies},
           {"seed", spec.base_seed},
           {"lambda", spec.ranges.lambda},
           {"ga_population", spec.ga.population_size},
           {"ga_generations", spec.ga.max_generations},
           {"ranges", ranges_to_json(spec.ranges)},
           {"ber_model", kBerModel},
           {"infeasible_threshold", a.infeasible_threshold}};
  std::string canonical = cfg.dump();
  std::string hash = mecsim::config_hash(canonical);

  mecsim::SweepResult result = mecsim::run_sweep(spec);

  std::string csv = mecsim::sweep_to_csv(result);
  csv += "# config_hash=" + hash + "\n";
  mecsim::write_text_file(a.out, csv);

  json sidecar{{"config", cfg},
               {"config_hash", hash},
               {"csv", a.out},
               {"rows", result.rows.size()},
               {"audit",
                {{"solutions_checked", result.audit.solutions_checked},
                 {"passed", result.audit.passed},
                 {"infeasible_flagged", result.audit.infeasible_flagged},
                 {"silent_violations", result.audit.silent_violations}}}};
  mecsim::write_text_file(a.out + ".meta.json", sidecar.dump(2) + "\n");

  if (result.strategies.size() >= 2) {
    mecsim::OrderingReport report = mecsim::summarize(result);
    std::cout << report.rendered;
  }
  std::printf("lambda=%.6g  ber_model=%s  config_hash=%s\n", spec.ranges.lambda, kBerModel,
              hash.c_str());

  long long total = 0, excluded = 0;
  for (const auto& row : result.rows) {
    total += row.replicates + row.excluded;
    excluded += row.excluded;
  }
  double ratio = total > 0 ? static_cast<double>(excluded) / static_cast<double>(total) : 0.0;
  std::printf("replicate runs=%lld excluded=%lld (%.2f%%)\n", total, excluded, 100.0 * ratio);
  if (ratio > a.infeasible_threshold) {
    std::fprintf(stderr, "infeasible replicate ratio %.3f above threshold %.3f\n", ratio,
                 a.infeasible_threshold);
    return kExitInfeasible;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_eval(const std::string& instance_path, const std::string& solution_path,
             const std::string& out) {
  mecsim::ProblemInstance inst;
  mecsim::Solution sol;
  try {
    inst = mecsim::instance_from_json(load_json_file(instance_path, "instance"));
    sol = mecsim::solution_from_json(load_json_file(solution_path, "solution"), inst);
  } catch (const mecsim::ParseError& e) {
    throw CliError{kExitUsage, e.what()};
  }
  mecsim::Evaluation eval;
  try {
    eval = mecsim::evaluate(inst, sol);
  } catch (const std::exception& e) {
    throw CliError{kExitUsage, e.what()};
  }
  std::string text = mecsim::evaluation_to_json(eval).dump(2) + "\n";
  if (out.empty()) std::cout << text;
  else mecsim::write_text_file(out, text);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string instance_path;
  std::string strategy = "proposed";
  std::optional<std::uint64_t> seed;
  int ga_pop = 200;
  int ga_gens = 100;
  bool full_budget = false;
  double budget = 1e7;
  std::string trace_path;
  std::string out;
};

int cmd_solve(const SolveArgs& a) {
  mecsim::ProblemInstance inst;
  try {
    inst = mecsim::instance_from_json(load_json_file(a.instance_path, "instance"));
  } catch (const mecsim::ParseError& e) {
    throw CliError{kExitUsage, e.what()};
  }

  std::string low;
  for (char c : a.strategy)
    low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  mecsim::SolveResult result;
  if (low == "fcfs") {
    result = mecsim::solve_fcfs(inst);
  } else if (low == "stf") {
    result = mecsim::solve_stf(inst);
  } else if (low == "exhaustive") {
    try {
      result = mecsim::solve_exhaustive(inst, a.budget);
    } catch (const mecsim::BudgetExceededError& e) {
      throw CliError{kExitUsage, e.what()};
    }
  } else if (low == "proposed" || low == "ga" || low == "proposedntd" || low == "ntd") {
    if (!a.seed)
      throw CliError{kExitUsage, "strategy '" + a.strategy + "' requires --seed"};
    mecsim::GAConfig cfg;
    cfg.population_size = a.full_budget ? 2000 : a.ga_pop;
    cfg.max_generations = a.full_budget ? 500 : a.ga_gens;
    cfg.seed = *a.seed;
    cfg.allow_diversity = low == "proposed" || low == "ga";
    result = mecsim::solve_ga(inst, cfg);
  } else {
    throw CliError{kExitUsage, "unknown strategy '" + a.strategy +
                                   "': valid are proposed, proposedntd, fcfs, stf, exhaustive"};
  }

  if (!a.trace_path.empty()) {
    check_output_path(a.trace_path);
    mecsim::write_text_file(a.trace_path, mecsim::trace_to_csv(result.trace));
  }

  json out{{"strategy", low},
           {"feasible", result.feasible},
           {"solution", mecsim::solution_to_json(result.solution)},
           {"evaluation", mecsim::evaluation_to_json(result.evaluation)}};
  std::string text = out.dump(2) + "\n";
  if (a.out.empty()) std::cout << text;
  else mecsim::write_text_file(a.out, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jamming-aware task offloading simulator"};
  app.require_subcommand(1);

  // sweep ---------------------------------------------------------------
  SweepArgs sw;
  std::string sweep_config;
  CLI::App* sweep = app.add_subcommand("sweep", "run a paired strategy sweep and write CSV");
  sweep->add_option("--scenario", sw.scenario, "sweep scenario: sjnr or rb");
  sweep->add_option("--rb", sw.rb, "resource block count during an sjnr sweep");
  sweep->add_option("--sjnr-db", sw.sjnr_db, "SJNR in dB during an rb sweep");
  sweep->add_option("--runs", sw.runs, "replicates per sweep point");
  sweep->add_option("--seed", sw.seed, "base seed; required");
  sweep->add_option("--lambda", sw.lambda, "objective weight on the drop term");
  sweep->add_option("--strategies", sw.strategies, "comma list: Proposed,ProposedNTD,FCFS,STF");
  sweep->add_option("--ga-pop", sw.ga_pop, "GA population size");
  sweep->add_option("--ga-gens", sw.ga_gens, "GA generation cap");
  sweep->add_flag("--full-budget", sw.full_budget, "use the full 2000x500 GA budget");
  sweep->add_option("--out", sw.out, "output CSV path; required");
  sweep->add_option("--threads", sw.threads, "worker threads, 0 = hardware");
  sweep->add_option("--infeasible-threshold", sw.infeasible_threshold,
                    "exit 3 when the excluded replicate ratio exceeds this");
  sweep->add_option("--arrivals", sw.arrivals, "arrival task count");
  sweep->add_option("--queued", sw.queued, "queued task count");
  sweep->add_option("--deadline-ms-min", sw.deadline_min);
  sweep->add_option("--deadline-ms-max", sw.deadline_max);
  sweep->add_option("--size-bits-min", sw.size_min);
  sweep->add_option("--size-bits-max", sw.size_max);
  sweep->add_option("--load-cycles-min", sw.load_min);
  sweep->add_option("--load-cycles-max", sw.load_max);
  sweep->add_option("--config", sweep_config, "key = value config file; flags win");

  // eval ----------------------------------------------------------------
  std::string eval_instance, eval_solution, eval_out;
  CLI::App* eval = app.add_subcommand("eval", "evaluate one solution against one instance");
  eval->add_option("--instance", eval_instance, "instance JSON path")->required();
  eval->add_option("--solution", eval_solution, "solution JSON path")->required();
  eval->add_option("--out", eval_out, "write the evaluation JSON here instead of stdout");

  // solve ---------------------------------------------------------------
  SolveArgs sv;
  CLI::App* solve = app.add_subcommand("solve", "solve one instance with a named strategy");
  solve->add_option("--instance", sv.instance_path, "instance JSON path")->required();
  solve->add_option("--strategy", sv.strategy,
                    "proposed | proposedntd | fcfs | stf | exhaustive");
  solve->add_option("--seed", sv.seed, "seed for the GA strategies");
  solve->add_option("--ga-pop", sv.ga_pop, "GA population size");
  solve->add_option("--ga-gens", sv.ga_gens, "GA generation cap");
  solve->add_flag("--full-budget", sv.full_budget, "use the full 2000x500 GA budget");
  solve->add_option("--budget", sv.budget, "exhaustive candidate budget");
  solve->add_option("--trace", sv.trace_path, "write GA convergence CSV here");
  solve->add_option("--out", sv.out, "write the result JSON here instead of stdout");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? kExitOk : kExitUsage;
    }
    if (sweep->parsed()) {
      if (!sweep_config.empty()) merge_config(*sweep, sweep_config);
      return cmd_sweep(sw);
    }
    if (eval->parsed()) return cmd_eval(eval_instance, eval_solution, eval_out);
    if (solve->parsed()) return cmd_solve(sv);
    std::fprintf(stderr, "no subcommand given\n");
    return kExitUsage;
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
