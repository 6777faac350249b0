#include "mecsim/evaluator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mecsim/channel.hpp"

namespace mecsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EvaluationContext::EvaluationContext(const ProblemInstance& instance) : inst(&instance) {
  instance.validate();
  int total = instance.total_tasks();
  int m = instance.arrival_count();
  tp_ms.resize(total);
  for (int i = 0; i < total; ++i)
    tp_ms[i] = processing_time_ms(instance.task_at(i).load_cycles, instance.cpu_hz);
  rate_bps.resize(static_cast<std::size_t>(m) * instance.rb_count);
  task_err.resize(static_cast<std::size_t>(m) * instance.rb_count);
  for (int a = 0; a < m; ++a) {
    for (int j = 0; j < instance.rb_count; ++j) {
      double gamma = instance.sjnr[a][j];
      std::size_t at = static_cast<std::size_t>(a) * instance.rb_count + j;
      rate_bps[at] = instance.rb_bandwidth_hz * std::log2(1.0 + gamma);
      task_err[at] = task_error_prob(bit_error_prob(gamma), instance.arrivals[a].size_bits);
    }
  }
  index_by_id.reserve(total);
  for (int i = 0; i < total; ++i) index_by_id.emplace(instance.task_at(i).id, i);
}

int queue_position(const Solution& sol, TaskId id) {
  auto it = sol.queue_position.find(id);
  return it == sol.queue_position.end() ? 0 : it->second;
}

double processing_time_ms(std::int64_t load_cycles, double cpu_hz) {
  if (!(cpu_hz > 0.0)) throw std::domain_error("processing_time_ms: cpu_hz must be > 0");
  return static_cast<double>(load_cycles) / cpu_hz * 1000.0;
}

double tx_rate_bps(const ProblemInstance& inst, const Solution& sol, TaskId id) {
  int idx = inst.index_of(id);
  if (idx < 0) throw std::invalid_argument("tx_rate_bps: unknown task id");
  if (inst.task_at(idx).kind != TaskKind::Arrival)
    throw std::invalid_argument("tx_rate_bps: rates are defined for arrival tasks only");
  double best = 0.0;
  for (int j = 0; j < inst.rb_count; ++j) {
    if (sol.rb_owner[j] && *sol.rb_owner[j] == id) {
      double r = inst.rb_bandwidth_hz * std::log2(1.0 + inst.sjnr[idx][j]);
      if (r > best) best = r;
    }
  }
  return best;
}

double comm_latency_ms(std::int64_t size_bits, double rate_bps) {
  if (size_bits < 0) throw std::domain_error("comm_latency_ms: size_bits must be >= 0");
  if (rate_bps <= 0.0) return kInf;
  return static_cast<double>(size_bits) / rate_bps * 1000.0;
}

double comp_latency_ms(const ProblemInstance& inst, const Solution& sol, TaskId id) {
  int pos = queue_position(sol, id);
  if (pos == 0)
    throw std::logic_error("comp_latency_ms: task has no execution position");
  double sum = 0.0;
  for (const auto& [other, q] : sol.queue_position) {
    if (q > pos) continue;
    int idx = inst.index_of(other);
    if (idx < 0) throw std::invalid_argument("comp_latency_ms: unknown task id");
    sum += processing_time_ms(inst.task_at(idx).load_cycles, inst.cpu_hz);
  }
  return sum;
}

double completion_time_ms(const ProblemInstance& inst, const Solution& sol, TaskId id) {
  int idx = inst.index_of(id);
  if (idx < 0) throw std::invalid_argument("completion_time_ms: unknown task id");
  double queueing = comp_latency_ms(inst, sol, id);
  const Task& t = inst.task_at(idx);
  if (t.kind == TaskKind::Queued) return queueing;
  return queueing + comm_latency_ms(t.size_bits, tx_rate_bps(inst, sol, id));
}

int sched_indicator(double completion_ms, double deadline_ms, int queue_pos) {
  return (queue_pos != 0 && completion_ms < deadline_ms) ? 1 : 0;
}

double dec_indicator(const ProblemInstance& inst, const Solution& sol, TaskId id) {
  int idx = inst.index_of(id);
  if (idx < 0) throw std::invalid_argument("dec_indicator: unknown task id");
  const Task& t = inst.task_at(idx);
  if (t.kind == TaskKind::Queued) return 1.0;
  std::vector<double> errs;
  for (int j = 0; j < inst.rb_count; ++j) {
    if (sol.rb_owner[j] && *sol.rb_owner[j] == id)
      errs.push_back(task_error_prob(bit_error_prob(inst.sjnr[idx][j]), t.size_bits));
  }
  return 1.0 - td_error_prob(errs);
}

Evaluation evaluate(const ProblemInstance& inst, const Solution& sol) {
  EvaluationContext ctx(inst);
  return evaluate(ctx, sol);
}

Evaluation evaluate(const EvaluationContext& ctx, const Solution& sol) {
  const ProblemInstance& inst = *ctx.inst;
  int total = inst.total_tasks();

  Evaluation eval;
  eval.violations = validate_solution(inst, sol);
  eval.feasible = eval.violations.empty();

  std::vector<int> pos_of(total, 0);
  for (const auto& [id, pos] : sol.queue_position) {
    auto it = ctx.index_by_id.find(id);
    if (it == ctx.index_by_id.end())
      throw std::invalid_argument("evaluate: unknown task id " + std::to_string(id));
    pos_of[it->second] = pos;
  }
  std::vector<double> queueing_at(total + 1, 0.0);
  {
    // With duplicate positions (infeasible input) every co-located task still
    // counts toward the prefix, matching the position-sum definition.
    std::vector<double> load_at(total + 1, 0.0);
    for (int i = 0; i < total; ++i)
      if (pos_of[i] > 0) load_at[pos_of[i]] += ctx.tp_ms[i];
    double cum = 0.0;
    for (int q = 1; q <= total; ++q) {
      cum += load_at[q];
      queueing_at[q] = cum;
    }
  }

  double served = 0.0;
  double used_weighted = 0.0;
  for (int i = 0; i < total; ++i) {
    const Task& t = inst.task_at(i);
    TaskMetrics tm;
    tm.queue_pos = pos_of[i];
    bool arrival = t.kind == TaskKind::Arrival;

    int owned = 0;
    if (arrival) {
      double prod = 1.0;
      double best_rate = 0.0;
      for (int j = 0; j < inst.rb_count; ++j) {
        if (sol.rb_owner[j] && *sol.rb_owner[j] == t.id) {
          ++owned;
          prod *= ctx.task_err_at(i, j);
          best_rate = std::max(best_rate, ctx.rate_at(i, j));
        }
      }
      tm.td_error = owned > 0 ? prod : 1.0;
      tm.dec_ind = 1.0 - tm.td_error;
      tm.rate_bps = best_rate;
      tm.comm_ms = comm_latency_ms(t.size_bits, best_rate);
    } else {
      tm.td_error = 0.0;
      tm.dec_ind = 1.0;
      tm.rate_bps = 0.0;
      tm.comm_ms = 0.0;
    }

    if (tm.queue_pos > 0) {
      tm.comp_ms = queueing_at[tm.queue_pos];
      tm.completion_ms = arrival ? tm.comp_ms + tm.comm_ms : tm.comp_ms;
      tm.sched_ind = sched_indicator(tm.completion_ms, t.deadline_ms, tm.queue_pos);
    } else {
      tm.comp_ms = 0.0;
      tm.completion_ms = kInf;
      tm.sched_ind = 0;
    }

    served += tm.sched_ind * tm.dec_ind;
    if (arrival) used_weighted += static_cast<double>(owned) * tm.dec_ind * tm.sched_ind;
    eval.per_task.emplace(t.id, tm);
  }

  eval.expected_drops = static_cast<double>(total) - served;
  eval.drop_ratio = total > 0 ? eval.expected_drops / total : 0.0;
  eval.bw_utilization = used_weighted / inst.rb_count;
  eval.objective =
      inst.lambda * eval.drop_ratio + (1.0 - inst.lambda) * eval.bw_utilization;
  return eval;
}

}  // namespace mecsim
