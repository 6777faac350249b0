#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mecsim {

using TaskId = int;

enum class TaskKind { Arrival, Queued };

// One offloaded task. size_bits is meaningful for Arrival tasks only; Queued
// tasks already sit at the server and have no pending uplink payload.
struct Task {
  TaskId id = 0;
  TaskKind kind = TaskKind::Arrival;
  double deadline_ms = 0.0;
  std::int64_t size_bits = 0;
  std::int64_t load_cycles = 0;
};

// Single-snapshot scheduling problem: m arrival tasks contending for resource
// blocks plus m' tasks already queued at the edge server.
struct ProblemInstance {
  std::vector<Task> arrivals;
  std::vector<Task> queued;
  int rb_count = 1;
  // Linear-scale SJNR per (arrival index, resource block index).
  std::vector<std::vector<double>> sjnr;
  double rb_bandwidth_hz = 100e3;
  double cpu_hz = 1e9;
  double lambda = 0.5;   // objective weight on the drop term
  int modulation_bits_per_symbol = 4;

  int arrival_count() const { return static_cast<int>(arrivals.size()); }
  int queued_count() const { return static_cast<int>(queued.size()); }
  int total_tasks() const { return arrival_count() + queued_count(); }

  // Tasks indexed 0..m-1 (arrivals) then m..m+m'-1 (queued).
  const Task& task_at(int index) const;
  // Index for an id, -1 if unknown.
  int index_of(TaskId id) const;

  // Throws std::invalid_argument when a structural invariant is broken
  // (duplicate ids, SJNR dimensions, non-positive rates or ranges).
  void validate() const;
};

// Assignment decision. queue_position maps task id to a 1-based execution
// position; absent ids are unscheduled. rb_owner[j] names the arrival task
// that owns resource block j, or nullopt when the block is unused. The
// encoding gives each task at most one position and each block at most one
// owner by construction.
struct Solution {
  std::map<TaskId, int> queue_position;
  std::vector<std::optional<TaskId>> rb_owner;
};

struct ConstraintViolation {
  enum class Kind {
    QueuePositionConflict,  // two tasks share one execution position
    RbOwnerNotArrival,      // a resource block owned by a non-arrival task
    QueuedTaskDropped,      // a queued task unscheduled or past its deadline
  };
  Kind kind;
  TaskId task_id = 0;
  std::string detail;
};

const char* violation_kind_name(ConstraintViolation::Kind kind);

// Per-task evaluation record; completion_ms is +inf for unscheduled tasks and
// for arrivals with no usable resource block.
struct TaskMetrics {
  int queue_pos = 0;
  double completion_ms = std::numeric_limits<double>::infinity();
  int sched_ind = 0;
  double dec_ind = 0.0;
  double comm_ms = 0.0;
  double comp_ms = 0.0;
  double rate_bps = 0.0;
  double td_error = 1.0;
};

struct Evaluation {
  std::map<TaskId, TaskMetrics> per_task;
  double expected_drops = 0.0;
  double drop_ratio = 0.0;
  double bw_utilization = 0.0;
  double objective = 0.0;
  bool feasible = false;
  std::vector<ConstraintViolation> violations;
};

// Checks the assignment constraints: pairwise-distinct queue positions,
// resource blocks owned by arrival tasks only, and no queued task dropped
// (the last one judged by the evaluator). Structural problems (unknown ids,
// out-of-range positions, wrong rb_owner length) throw std::invalid_argument.
std::vector<ConstraintViolation> validate_solution(const ProblemInstance& inst,
                                                   const Solution& sol);

// Dense 0/1 view of a Solution: x[t][q] = task t runs at position q+1,
// y[a][j] = arrival a owns block j. Rows follow ProblemInstance task order.
struct DenseSolution {
  std::vector<std::vector<int>> x;  // (m+m') x (m+m')
  std::vector<std::vector<int>> y;  // m x rb_count
};

DenseSolution to_dense(const ProblemInstance& inst, const Solution& sol);
// Inverse of to_dense. Throws std::invalid_argument when a row of x has more
// than one position set, several tasks share a position column, or a block
// column of y has several owners.
Solution from_dense(const ProblemInstance& inst, const DenseSolution& dense);

}  // namespace mecsim
