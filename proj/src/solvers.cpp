#include "mecsim/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "mecsim/evaluator.hpp"

namespace mecsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Uniform int in [lo, hi].
int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform_u64(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

// Genotype over task indices: order[slot] = task index or -1, rb[block] =
// arrival index or -1.
struct Chrom {
  std::vector<int> order;
  std::vector<int> rb;
  double fitness = kInf;
  double objective = kInf;
  int late_queued = 0;
};

struct Scratch {
  std::vector<double> err_prod;   // per arrival, product of owned-block errors
  std::vector<double> best_rate;  // per arrival
  std::vector<int> owned;         // per arrival
  std::vector<char> seen;         // per task
};

struct ChromScore {
  double objective = 0.0;
  double drops = 0.0;
  double bw = 0.0;
  int late_queued = 0;
};

// Objective of a genotype straight from the cached per-instance tables.
ChromScore score_chrom(const EvaluationContext& ctx, const std::vector<int>& order,
                       const std::vector<int>& rb, Scratch& w) {
  const ProblemInstance& inst = *ctx.inst;
  int total = inst.total_tasks();
  int m = inst.arrival_count();

  w.err_prod.assign(m, 1.0);
  w.best_rate.assign(m, 0.0);
  w.owned.assign(m, 0);
  for (int j = 0; j < inst.rb_count; ++j) {
    int a = rb[j];
    if (a < 0) continue;
    w.err_prod[a] *= ctx.task_err_at(a, j);
    if (ctx.rate_at(a, j) > w.best_rate[a]) w.best_rate[a] = ctx.rate_at(a, j);
    ++w.owned[a];
  }

  ChromScore s;
  double served = 0.0;
  double used_weighted = 0.0;
  double cum_ms = 0.0;
  int scheduled_queued = 0;
  for (int slot = 0; slot < total; ++slot) {
    int t = order[slot];
    if (t < 0) continue;
    cum_ms += ctx.tp_ms[t];
    const Task& task = inst.task_at(t);
    if (t < m) {
      double dec = w.owned[t] > 0 ? 1.0 - w.err_prod[t] : 0.0;
      double done = w.owned[t] > 0
                        ? cum_ms + static_cast<double>(task.size_bits) / w.best_rate[t] * 1000.0
                        : kInf;
      if (done < task.deadline_ms) {
        served += dec;
        used_weighted += static_cast<double>(w.owned[t]) * dec;
      }
    } else {
      ++scheduled_queued;
      if (cum_ms < task.deadline_ms) served += 1.0;
      else ++s.late_queued;
    }
  }
  // Queued tasks missing from the order count as dropped too.
  s.late_queued += inst.queued_count() - scheduled_queued;

  s.drops = static_cast<double>(total) - served;
  s.bw = used_weighted / inst.rb_count;
  double drop_ratio = total > 0 ? s.drops / total : 0.0;
  s.objective = inst.lambda * drop_ratio + (1.0 - inst.lambda) * s.bw;
  return s;
}

// Keeps the first occurrence of each task, reinserts missing queued tasks
// into the earliest holes in their given order, and with diversity disabled
// strips every repeated block of an arrival.
void repair(const EvaluationContext& ctx, bool allow_diversity, Chrom& c, Scratch& w) {
  const ProblemInstance& inst = *ctx.inst;
  int total = inst.total_tasks();
  int m = inst.arrival_count();

  w.seen.assign(total, 0);
  for (int& v : c.order) {
    if (v < 0) continue;
    if (w.seen[v]) v = -1;
    else w.seen[v] = 1;
  }
  int hole = 0;
  for (int q = m; q < total; ++q) {
    if (w.seen[q]) continue;
    while (hole < total && c.order[hole] >= 0) ++hole;
    c.order[hole] = q;
    w.seen[q] = 1;
  }

  if (!allow_diversity && m > 0) {
    w.owned.assign(m, 0);
    for (int& v : c.rb) {
      if (v < 0) continue;
      if (w.owned[v]) v = -1;
      else w.owned[v] = 1;
    }
  }
}

void score_into(const EvaluationContext& ctx, double penalty_weight, Chrom& c, Scratch& w) {
  ChromScore s = score_chrom(ctx, c.order, c.rb, w);
  c.objective = s.objective;
  c.late_queued = s.late_queued;
  c.fitness = s.objective + penalty_weight * s.late_queued;
}

Solution chrom_to_solution(const ProblemInstance& inst, const std::vector<int>& order,
                           const std::vector<int>& rb) {
  Solution sol;
  sol.rb_owner.assign(inst.rb_count, std::nullopt);
  for (int slot = 0; slot < static_cast<int>(order.size()); ++slot)
    if (order[slot] >= 0) sol.queue_position[inst.task_at(order[slot]).id] = slot + 1;
  for (int j = 0; j < inst.rb_count; ++j)
    if (rb[j] >= 0) sol.rb_owner[j] = inst.arrivals[rb[j]].id;
  return sol;
}

void check_config(const GAConfig& cfg) {
  if (cfg.population_size < 2)
    throw std::invalid_argument("ga: population_size must be >= 2");
  if (cfg.max_generations < 1)
    throw std::invalid_argument("ga: max_generations must be >= 1");
  if (cfg.stall_generations < 1)
    throw std::invalid_argument("ga: stall_generations must be >= 1");
  if (cfg.crossover_rate < 0.0 || cfg.crossover_rate > 1.0)
    throw std::invalid_argument("ga: crossover_rate must be in [0, 1]");
  if (cfg.mutation_rate < 0.0 || cfg.mutation_rate > 1.0)
    throw std::invalid_argument("ga: mutation_rate must be in [0, 1]");
  if (cfg.elitism_count < 0 || cfg.elitism_count >= cfg.population_size)
    throw std::invalid_argument("ga: elitism_count must be in [0, population_size)");
  if (cfg.penalty_weight < 0.0)
    throw std::invalid_argument("ga: penalty_weight must be >= 0");
  if (cfg.function_tolerance < 0.0)
    throw std::invalid_argument("ga: function_tolerance must be >= 0");
}

}  // namespace

SolveResult solve_ga(const ProblemInstance& inst, const GAConfig& cfg) {
  check_config(cfg);
  EvaluationContext ctx(inst);
  int total = inst.total_tasks();
  int m = inst.arrival_count();
  std::mt19937_64 rng(cfg.seed);
  Scratch w;

  const double unscheduled_arrival_rate = 0.2;  // initial population only

  auto init_chrom = [&]() {
    Chrom c;
    c.order.resize(total);
    for (int i = 0; i < total; ++i) c.order[i] = i;
    for (int i = total - 1; i > 0; --i)
      std::swap(c.order[i], c.order[uniform_int(rng, 0, i)]);
    for (int& v : c.order)
      if (v < m && uniform_real(rng) < unscheduled_arrival_rate) v = -1;
    c.rb.resize(inst.rb_count);
    for (int& v : c.rb) v = uniform_int(rng, -1, m - 1);
    repair(ctx, cfg.allow_diversity, c, w);
    score_into(ctx, cfg.penalty_weight, c, w);
    return c;
  };

  std::vector<Chrom> pop;
  pop.reserve(cfg.population_size);
  for (int i = 0; i < cfg.population_size; ++i) pop.push_back(init_chrom());

  Chrom best_feasible;
  bool have_feasible = false;
  Chrom best_overall = pop[0];
  auto consider = [&](const Chrom& c) {
    if (c.fitness < best_overall.fitness) best_overall = c;
    if (c.late_queued == 0 && (!have_feasible || c.fitness < best_feasible.fitness)) {
      best_feasible = c;
      have_feasible = true;
    }
  };
  for (const Chrom& c : pop) consider(c);

  auto pop_stats = [&](int gen) {
    double best = kInf, sum = 0.0;
    for (const Chrom& c : pop) {
      best = std::min(best, c.fitness);
      sum += c.fitness;
    }
    return TracePoint{gen, best, sum / pop.size()};
  };

  std::vector<TracePoint> trace;
  trace.push_back(pop_stats(0));

  auto tournament = [&]() {
    int a = uniform_int(rng, 0, cfg.population_size - 1);
    int b = uniform_int(rng, 0, cfg.population_size - 1);
    if (pop[b].fitness < pop[a].fitness) return b;
    if (pop[a].fitness < pop[b].fitness) return a;
    return std::min(a, b);
  };

  double best_seen = trace.front().best_fitness;
  int last_improvement = 0;
  std::vector<int> elite_idx(cfg.population_size);

  for (int gen = 1; gen <= cfg.max_generations; ++gen) {
    std::vector<Chrom> next;
    next.reserve(cfg.population_size);

    for (std::size_t i = 0; i < elite_idx.size(); ++i) elite_idx[i] = static_cast<int>(i);
    std::stable_sort(elite_idx.begin(), elite_idx.end(),
                     [&](int a, int b) { return pop[a].fitness < pop[b].fitness; });
    for (int e = 0; e < cfg.elitism_count; ++e) next.push_back(pop[elite_idx[e]]);

    while (static_cast<int>(next.size()) < cfg.population_size) {
      Chrom c1 = pop[tournament()];
      Chrom c2 = pop[tournament()];
      if (uniform_real(rng) < cfg.crossover_rate) {
        // Scattered crossover: every gene swaps sides on a coin flip.
        for (int s = 0; s < total; ++s)
          if (uniform_real(rng) < 0.5) std::swap(c1.order[s], c2.order[s]);
        for (int j = 0; j < inst.rb_count; ++j)
          if (uniform_real(rng) < 0.5) std::swap(c1.rb[j], c2.rb[j]);
      }
      for (Chrom* c : {&c1, &c2}) {
        for (int s = 0; s < total; ++s)
          if (uniform_real(rng) < cfg.mutation_rate) c->order[s] = uniform_int(rng, -1, total - 1);
        for (int j = 0; j < inst.rb_count; ++j)
          if (uniform_real(rng) < cfg.mutation_rate) c->rb[j] = uniform_int(rng, -1, m - 1);
        repair(ctx, cfg.allow_diversity, *c, w);
        score_into(ctx, cfg.penalty_weight, *c, w);
        consider(*c);
        if (static_cast<int>(next.size()) < cfg.population_size) next.push_back(std::move(*c));
      }
    }
    pop = std::move(next);
    trace.push_back(pop_stats(gen));

    if (best_seen - trace.back().best_fitness > cfg.function_tolerance) {
      last_improvement = gen;
    }
    best_seen = std::min(best_seen, trace.back().best_fitness);
    if (gen - last_improvement >= cfg.stall_generations) break;
  }

  const Chrom& winner = have_feasible ? best_feasible : best_overall;
  SolveResult result;
  result.solution = chrom_to_solution(inst, winner.order, winner.rb);
  result.evaluation = evaluate(ctx, result.solution);
  result.feasible = result.evaluation.feasible;
  result.trace = std::move(trace);
  return result;
}

SolveResult solve_exhaustive(const ProblemInstance& inst, double budget) {
  EvaluationContext ctx(inst);
  int total = inst.total_tasks();
  int m = inst.arrival_count();
  int mp = inst.queued_count();
  Scratch w;

  // Candidate count: sum over arrival subsets of (orderings x block vectors).
  double count = 0.0;
  {
    double choose = 1.0;  // C(m, k)
    for (int k = 0; k <= m; ++k) {
      double fact = 1.0;
      for (int i = 2; i <= mp + k; ++i) fact *= i;
      count += choose * fact * std::pow(static_cast<double>(k) + 1.0, inst.rb_count);
      choose = choose * (m - k) / (k + 1);
    }
  }
  if (count > budget) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "exhaustive search needs %.3g candidate evaluations, over the %.3g budget",
                  count, budget);
    throw BudgetExceededError(msg);
  }

  std::vector<int> order(total, -1);
  std::vector<int> rb(inst.rb_count, -1);
  std::vector<int> best_order, best_rb;
  double best_fitness = kInf;
  bool best_is_feasible = false;

  // Canonical encoding for ties: holes sort after task indices inside the
  // order array (compact orderings win) and unowned blocks sort first.
  auto lex_less = [&](const std::vector<int>& o1, const std::vector<int>& r1,
                      const std::vector<int>& o2, const std::vector<int>& r2) {
    for (std::size_t i = 0; i < o1.size(); ++i) {
      int a = o1[i] < 0 ? total : o1[i];
      int b = o2[i] < 0 ? total : o2[i];
      if (a != b) return a < b;
    }
    for (std::size_t j = 0; j < r1.size(); ++j)
      if (r1[j] != r2[j]) return r1[j] < r2[j];
    return false;
  };

  const double penalty_weight = 1e3;  // only ranks candidates when none are feasible
  auto consider = [&]() {
    ChromScore s = score_chrom(ctx, order, rb, w);
    double fitness = s.objective + penalty_weight * s.late_queued;
    bool feasible = s.late_queued == 0;
    bool better;
    if (best_order.empty()) better = true;
    else if (feasible != best_is_feasible) better = feasible;
    else if (fitness != best_fitness) better = fitness < best_fitness;
    else better = lex_less(order, rb, best_order, best_rb);
    if (better) {
      best_order = order;
      best_rb = rb;
      best_fitness = fitness;
      best_is_feasible = feasible;
    }
  };

  std::vector<int> members(mp);
  for (int i = 0; i < mp; ++i) members[i] = m + i;

  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    std::vector<int> chosen;
    for (int a = 0; a < m; ++a)
      if (mask & (1ULL << a)) chosen.push_back(a);
    std::vector<int> perm = chosen;
    perm.insert(perm.end(), members.begin(), members.end());
    std::sort(perm.begin(), perm.end());
    int k = static_cast<int>(perm.size());

    do {
      std::fill(order.begin(), order.end(), -1);
      for (int q = 0; q < k; ++q) order[q] = perm[q];

      // Mixed-radix counter over owners: none or one of the chosen arrivals.
      std::fill(rb.begin(), rb.end(), -1);
      std::vector<int> digit(inst.rb_count, 0);
      int base = static_cast<int>(chosen.size()) + 1;
      for (;;) {
        for (int j = 0; j < inst.rb_count; ++j)
          rb[j] = digit[j] == 0 ? -1 : chosen[digit[j] - 1];
        consider();
        int j = 0;
        while (j < inst.rb_count && ++digit[j] == base) digit[j++] = 0;
        if (j == inst.rb_count) break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  SolveResult result;
  result.solution = chrom_to_solution(inst, best_order, best_rb);
  result.evaluation = evaluate(ctx, result.solution);
  result.feasible = result.evaluation.feasible;
  return result;
}

namespace {

SolveResult baseline_result(const ProblemInstance& inst, const std::vector<int>& arrival_order) {
  inst.validate();
  Solution sol;
  sol.rb_owner.assign(inst.rb_count, std::nullopt);
  int pos = 1;
  for (const Task& t : inst.queued) sol.queue_position[t.id] = pos++;
  for (int a : arrival_order) sol.queue_position[inst.arrivals[a].id] = pos++;
  for (std::size_t k = 0; k < arrival_order.size() && k < static_cast<std::size_t>(inst.rb_count);
       ++k)
    sol.rb_owner[k] = inst.arrivals[arrival_order[k]].id;

  SolveResult result;
  result.solution = std::move(sol);
  result.evaluation = evaluate(inst, result.solution);
  result.feasible = result.evaluation.feasible;
  return result;
}

}  // namespace

SolveResult solve_fcfs(const ProblemInstance& inst) {
  std::vector<int> arrival_order(inst.arrival_count());
  for (int a = 0; a < inst.arrival_count(); ++a) arrival_order[a] = a;
  return baseline_result(inst, arrival_order);
}

SolveResult solve_stf(const ProblemInstance& inst) {
  std::vector<int> arrival_order(inst.arrival_count());
  for (int a = 0; a < inst.arrival_count(); ++a) arrival_order[a] = a;
  std::sort(arrival_order.begin(), arrival_order.end(), [&](int a, int b) {
    if (inst.arrivals[a].load_cycles != inst.arrivals[b].load_cycles)
      return inst.arrivals[a].load_cycles < inst.arrivals[b].load_cycles;
    return inst.arrivals[a].id < inst.arrivals[b].id;
  });
  return baseline_result(inst, arrival_order);
}

std::string trace_to_csv(const std::vector<TracePoint>& trace) {
  std::string out = "generation,best_fitness,mean_fitness\n";
  char line[96];
  for (const TracePoint& p : trace) {
    std::snprintf(line, sizeof line, "%d,%.12g,%.12g\n", p.generation, p.best_fitness,
                  p.mean_fitness);
    out += line;
  }
  return out;
}

}  // namespace mecsim
