#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mecsim/model.hpp"

namespace mecsim {

struct GAConfig {
  int population_size = 2000;
  int max_generations = 500;
  double function_tolerance = 1e-30;
  int stall_generations = 50;
  double crossover_rate = 0.8;
  double mutation_rate = 0.05;   // per gene
  int elitism_count = 2;
  double penalty_weight = 1e3;   // per queued task dropped
  std::uint64_t seed = 0;
  // When false, each arrival keeps at most one resource block (no
  // transmission diversity); enforced by chromosome repair.
  bool allow_diversity = true;
};

struct TracePoint {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct SolveResult {
  Solution solution;
  Evaluation evaluation;
  bool feasible = false;
  std::vector<TracePoint> trace;  // populated by the GA only
};

class BudgetExceededError : public std::runtime_error {
 public:
  explicit BudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

// Genetic search over (queue order, block ownership). Fitness is the weighted
// objective plus penalty_weight per queued task still dropped after repair.
// Deterministic for a fixed seed and config; best fitness is non-increasing
// across generations thanks to elitism. Returns the best feasible solution
// found, or the best-effort infeasible one with feasible=false when the
// population never produced a feasible individual.
SolveResult solve_ga(const ProblemInstance& inst, const GAConfig& cfg);

// Exhaustive oracle: enumerates every queue assignment (queued tasks always
// scheduled, arrivals optionally unscheduled) and every block ownership
// vector, and returns the feasible minimizer; ties break toward the
// lexicographically smallest encoding. Throws BudgetExceededError with the
// candidate count when the enumeration would exceed `budget` evaluations.
SolveResult solve_exhaustive(const ProblemInstance& inst, double budget = 1e7);

// First-come-first-served baseline: queued tasks first in their given order,
// then arrivals in arrival order; one block per arrival, first-fit over block
// indices until blocks run out.
SolveResult solve_fcfs(const ProblemInstance& inst);

// Shortest-task-first baseline: like FCFS but arrivals are ordered by
// ascending processing time (ties by id) before placement.
SolveResult solve_stf(const ProblemInstance& inst);

// Writes "generation,best_fitness,mean_fitness" rows.
std::string trace_to_csv(const std::vector<TracePoint>& trace);

}  // namespace mecsim
