#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mecsim/model.hpp"
#include "mecsim/solvers.hpp"
#include "mecsim/taskgen.hpp"

namespace mecsim {

enum class Strategy { Proposed, ProposedNtd, Fcfs, Stf };

const char* strategy_name(Strategy s);
// Accepts the names emitted by strategy_name (case-insensitive); throws
// std::invalid_argument listing valid names otherwise.
Strategy parse_strategy(const std::string& name);

enum class Scenario { Sjnr, Rb };

const char* scenario_name(Scenario s);

// Sweeps default to a reduced search budget per replicate; the full
// population 2000 / 500 generations setup stays available via GAConfig.
inline GAConfig sweep_default_ga() {
  GAConfig g;
  g.population_size = 200;
  g.max_generations = 100;
  return g;
}

struct SweepSpec {
  Scenario scenario = Scenario::Sjnr;
  std::vector<double> sjnr_db_points;  // defaulted to 0..30 step 2 when empty
  std::vector<int> rb_points;          // defaulted to 1..15 when empty
  int fixed_rb = 10;                   // block count during an SJNR sweep
  double fixed_sjnr_db = 5.0;          // SJNR during a block-count sweep
  int replicates = 300;
  std::vector<Strategy> strategies = {Strategy::Proposed, Strategy::ProposedNtd,
                                      Strategy::Fcfs, Strategy::Stf};
  GenRanges ranges;
  GAConfig ga = sweep_default_ga();  // per-run seeds are derived from base_seed
  std::uint64_t base_seed = 0;
  int threads = 1;  // 0 selects the hardware concurrency

  std::vector<double> effective_sjnr_points() const;
  std::vector<int> effective_rb_points() const;
  int point_count() const;
};

struct SweepRow {
  Scenario scenario = Scenario::Sjnr;
  double sweep_value = 0.0;
  Strategy strategy = Strategy::Proposed;
  double drop_ratio_mean = 0.0;
  double drop_ratio_se = 0.0;
  double bw_util_mean = 0.0;
  double bw_util_se = 0.0;
  double objective_mean = 0.0;
  double objective_se = 0.0;
  int replicates = 0;  // replicates the means were computed over
  int excluded = 0;    // infeasible replicates left out of the means
};

// Validation bookkeeping across every solver call of a sweep. A silent
// violation is a solution that fails validate_solution while its solver
// claimed feasibility; correct solvers never produce one.
struct ConstraintAudit {
  long long solutions_checked = 0;
  long long passed = 0;
  long long infeasible_flagged = 0;
  long long silent_violations = 0;
  long long queue_conflict_count = 0;
  long long rb_owner_count = 0;
  long long queued_dropped_count = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // point-major, strategies in configured order
  std::vector<double> sweep_values;
  std::vector<Strategy> strategies;
  // Per (point, strategy): one sample per replicate, NaN when excluded.
  struct Samples {
    std::vector<double> drop_ratio;
    std::vector<double> bw_util;
    std::vector<double> objective;
    std::vector<char> feasible;
  };
  std::vector<std::vector<Samples>> samples;
  ConstraintAudit audit;
};

// Paired sweep: one instance per (point, replicate) shared by all strategies;
// task draws depend only on the replicate index so sweep points differ solely
// in the swept parameter. Replicates run on `threads` workers and are merged
// in replicate order, so output is independent of the thread count.
SweepResult run_sweep(const SweepSpec& spec);

// CSV with the fixed header
// scenario,sweep_value,strategy,drop_ratio_mean,drop_ratio_se,bw_util_mean,
// bw_util_se,objective_mean,objective_se,replicates,excluded
std::string sweep_to_csv(const SweepResult& result);

struct OrderingEntry {
  Strategy strategy;
  double drop_ratio_mean = 0.0;
  // Paired gap to the next-ranked strategy (its mean minus this one's) and
  // the standard error of that per-replicate difference.
  double gap_to_next = 0.0;
  double gap_se = 0.0;
  bool tied_with_next = false;
};

struct OrderingReport {
  struct Point {
    double sweep_value = 0.0;
    std::vector<OrderingEntry> ranking;  // ascending mean drop ratio
  };
  std::vector<Point> points;
  std::string rendered;  // human-readable table
};

// Ranks strategies by mean drop ratio at every sweep point with paired
// standard errors on adjacent gaps; a gap smaller than its standard error is
// declared a tie. Throws std::invalid_argument with fewer than two strategies.
OrderingReport summarize(const SweepResult& result);

}  // namespace mecsim
