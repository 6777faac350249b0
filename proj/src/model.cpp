#include "mecsim/model.hpp"

#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mecsim/evaluator.hpp"

namespace mecsim {

const Task& ProblemInstance::task_at(int index) const {
  if (index < 0 || index >= total_tasks())
    throw std::out_of_range("task_at: index out of range");
  if (index < arrival_count()) return arrivals[index];
  return queued[index - arrival_count()];
}

int ProblemInstance::index_of(TaskId id) const {
  for (int i = 0; i < total_tasks(); ++i)
    if (task_at(i).id == id) return i;
  return -1;
}

void ProblemInstance::validate() const {
  if (rb_count < 1) throw std::invalid_argument("instance: rb_count must be >= 1");
  if (!(rb_bandwidth_hz > 0.0))
    throw std::invalid_argument("instance: rb_bandwidth_hz must be > 0");
  if (!(cpu_hz > 0.0)) throw std::invalid_argument("instance: cpu_hz must be > 0");
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("instance: lambda must be in [0, 1]");
  if (modulation_bits_per_symbol < 1)
    throw std::invalid_argument("instance: modulation_bits_per_symbol must be >= 1");

  std::unordered_set<TaskId> ids;
  for (int i = 0; i < total_tasks(); ++i) {
    const Task& t = task_at(i);
    if (!ids.insert(t.id).second)
      throw std::invalid_argument("instance: duplicate task id " + std::to_string(t.id));
    if (!(t.deadline_ms > 0.0))
      throw std::invalid_argument("instance: task " + std::to_string(t.id) +
                                  " deadline_ms must be > 0");
    if (t.load_cycles < 0)
      throw std::invalid_argument("instance: task " + std::to_string(t.id) +
                                  " load_cycles must be >= 0");
    bool is_arrival = i < arrival_count();
    if (is_arrival && t.kind != TaskKind::Arrival)
      throw std::invalid_argument("instance: arrivals[] holds a non-arrival task");
    if (!is_arrival && t.kind != TaskKind::Queued)
      throw std::invalid_argument("instance: queued[] holds a non-queued task");
    if (is_arrival && t.size_bits < 1)
      throw std::invalid_argument("instance: arrival task " + std::to_string(t.id) +
                                  " size_bits must be >= 1");
  }

  if (static_cast<int>(sjnr.size()) != arrival_count())
    throw std::invalid_argument("instance: sjnr must have one row per arrival task");
  for (const auto& row : sjnr) {
    if (static_cast<int>(row.size()) != rb_count)
      throw std::invalid_argument("instance: sjnr rows must have rb_count entries");
    for (double g : row)
      if (!(g > 0.0)) throw std::invalid_argument("instance: sjnr entries must be > 0");
  }
}

const char* violation_kind_name(ConstraintViolation::Kind kind) {
  switch (kind) {
    case ConstraintViolation::Kind::QueuePositionConflict: return "queue_position_conflict";
    case ConstraintViolation::Kind::RbOwnerNotArrival: return "rb_owner_not_arrival";
    case ConstraintViolation::Kind::QueuedTaskDropped: return "queued_task_dropped";
  }
  return "unknown";
}

namespace {
void check_structure(const ProblemInstance& inst, const Solution& sol) {
  int total = inst.total_tasks();
  if (static_cast<int>(sol.rb_owner.size()) != inst.rb_count)
    throw std::invalid_argument("solution: rb_owner must have rb_count entries");
  for (const auto& [id, pos] : sol.queue_position) {
    if (inst.index_of(id) < 0)
      throw std::invalid_argument("solution: unknown task id " + std::to_string(id));
    if (pos < 1 || pos > total)
      throw std::invalid_argument("solution: position for task " + std::to_string(id) +
                                  " out of range 1.." + std::to_string(total));
  }
  for (const auto& owner : sol.rb_owner) {
    if (owner && inst.index_of(*owner) < 0)
      throw std::invalid_argument("solution: unknown task id " + std::to_string(*owner) +
                                  " in rb_owner");
  }
}
}  // namespace

std::vector<ConstraintViolation> validate_solution(const ProblemInstance& inst,
                                                   const Solution& sol) {
  check_structure(inst, sol);
  std::vector<ConstraintViolation> out;

  // Pairwise-distinct execution positions.
  std::unordered_map<int, TaskId> first_at;
  for (const auto& [id, pos] : sol.queue_position) {
    auto [it, fresh] = first_at.try_emplace(pos, id);
    if (!fresh) {
      out.push_back({ConstraintViolation::Kind::QueuePositionConflict, id,
                     "position " + std::to_string(pos) + " already held by task " +
                         std::to_string(it->second)});
    }
  }

  // Blocks may only be owned by arrival tasks.
  for (int j = 0; j < inst.rb_count; ++j) {
    const auto& owner = sol.rb_owner[j];
    if (!owner) continue;
    const Task& t = inst.task_at(inst.index_of(*owner));
    if (t.kind != TaskKind::Arrival) {
      out.push_back({ConstraintViolation::Kind::RbOwnerNotArrival, *owner,
                     "resource block " + std::to_string(j) + " owned by queued task"});
    }
  }

  // No queued task may be dropped: it needs a position and an on-time finish.
  for (const Task& t : inst.queued) {
    int pos = queue_position(sol, t.id);
    if (pos == 0) {
      out.push_back({ConstraintViolation::Kind::QueuedTaskDropped, t.id,
                     "queued task has no execution position"});
      continue;
    }
    double done = completion_time_ms(inst, sol, t.id);
    if (sched_indicator(done, t.deadline_ms, pos) != 1) {
      out.push_back({ConstraintViolation::Kind::QueuedTaskDropped, t.id,
                     "queued task finishes at " + std::to_string(done) +
                         " ms, past its deadline"});
    }
  }
  return out;
}

DenseSolution to_dense(const ProblemInstance& inst, const Solution& sol) {
  check_structure(inst, sol);
  int total = inst.total_tasks();
  DenseSolution d;
  d.x.assign(total, std::vector<int>(total, 0));
  d.y.assign(inst.arrival_count(), std::vector<int>(inst.rb_count, 0));
  for (const auto& [id, pos] : sol.queue_position) d.x[inst.index_of(id)][pos - 1] = 1;
  for (int j = 0; j < inst.rb_count; ++j) {
    if (!sol.rb_owner[j]) continue;
    int idx = inst.index_of(*sol.rb_owner[j]);
    if (idx < inst.arrival_count()) d.y[idx][j] = 1;
    // Non-arrival owners cannot be represented in y; they are rejected by
    // validate_solution and dropped here.
  }
  return d;
}

Solution from_dense(const ProblemInstance& inst, const DenseSolution& dense) {
  int total = inst.total_tasks();
  if (static_cast<int>(dense.x.size()) != total)
    throw std::invalid_argument("dense: x must have one row per task");
  if (static_cast<int>(dense.y.size()) != inst.arrival_count())
    throw std::invalid_argument("dense: y must have one row per arrival task");

  Solution sol;
  sol.rb_owner.assign(inst.rb_count, std::nullopt);
  std::set<int> used_positions;
  for (int i = 0; i < total; ++i) {
    if (static_cast<int>(dense.x[i].size()) != total)
      throw std::invalid_argument("dense: x rows must have one entry per position");
    int found = 0;
    for (int q = 0; q < total; ++q) {
      if (dense.x[i][q] == 0) continue;
      if (++found > 1)
        throw std::invalid_argument("dense: task row with more than one position");
      if (!used_positions.insert(q).second)
        throw std::invalid_argument("dense: two tasks share position " + std::to_string(q + 1));
      sol.queue_position[inst.task_at(i).id] = q + 1;
    }
  }
  for (int j = 0; j < inst.rb_count; ++j) {
    int found = 0;
    for (int a = 0; a < inst.arrival_count(); ++a) {
      if (static_cast<int>(dense.y[a].size()) != inst.rb_count)
        throw std::invalid_argument("dense: y rows must have rb_count entries");
      if (dense.y[a][j] == 0) continue;
      if (++found > 1)
        throw std::invalid_argument("dense: two owners for resource block " + std::to_string(j));
      sol.rb_owner[j] = inst.arrivals[a].id;
    }
  }
  return sol;
}

}  // namespace mecsim
