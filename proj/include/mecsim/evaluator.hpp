#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mecsim/model.hpp"

namespace mecsim {

// Per-instance caches shared by every evaluation of that instance: processing
// times, per-(arrival, block) rates and task error probabilities. Building one
// once and reusing it keeps solver inner loops cheap.
struct EvaluationContext {
  const ProblemInstance* inst = nullptr;
  std::vector<double> tp_ms;        // processing time per task index
  std::vector<double> rate_bps;     // m * rb_count, row-major
  std::vector<double> task_err;     // m * rb_count, row-major
  std::unordered_map<TaskId, int> index_by_id;

  explicit EvaluationContext(const ProblemInstance& instance);

  double rate_at(int arrival_index, int rb) const {
    return rate_bps[static_cast<std::size_t>(arrival_index) * inst->rb_count + rb];
  }
  double task_err_at(int arrival_index, int rb) const {
    return task_err[static_cast<std::size_t>(arrival_index) * inst->rb_count + rb];
  }
};

// Execution position of a task, 0 when unscheduled.
int queue_position(const Solution& sol, TaskId id);

// Cycles over clock rate, reported in milliseconds.
double processing_time_ms(std::int64_t load_cycles, double cpu_hz);

// Best single-block uplink rate among blocks owned by the arrival task, 0 when
// it owns none. Throws std::invalid_argument for non-arrival ids.
double tx_rate_bps(const ProblemInstance& inst, const Solution& sol, TaskId id);

// Payload over rate in milliseconds; +inf when rate_bps is 0.
double comm_latency_ms(std::int64_t size_bits, double rate_bps);

// Total processing time of every task scheduled at or before this task's
// position. Throws std::logic_error when the task is unscheduled.
double comp_latency_ms(const ProblemInstance& inst, const Solution& sol, TaskId id);

// Completion instant: queueing plus uplink for arrivals, queueing alone for
// queued tasks. Throws std::logic_error when the task is unscheduled.
double completion_time_ms(const ProblemInstance& inst, const Solution& sol, TaskId id);

// 1 iff the task holds a position and completes strictly before its deadline.
int sched_indicator(double completion_ms, double deadline_ms, int queue_pos);

// Probability the task is decodable: 1 for queued tasks, one minus the
// all-copies-fail probability for arrivals (0 when no block is owned).
double dec_indicator(const ProblemInstance& inst, const Solution& sol, TaskId id);

// Full evaluation of a solution: per-task metrics, expected drops, drop ratio,
// bandwidth utilization and the weighted objective
//   lambda * drops/(m+m') + (1-lambda) * bw_utilization.
// The objective is reported whether or not the solution is feasible;
// `feasible` and `violations` mirror validate_solution.
Evaluation evaluate(const ProblemInstance& inst, const Solution& sol);
Evaluation evaluate(const EvaluationContext& ctx, const Solution& sol);

}  // namespace mecsim
