#include "mecsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mecsim/evaluator.hpp"

namespace mecsim {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Seed streams feeding child_seed; instances depend on the replicate alone so
// every sweep point sees the same task draws.
constexpr std::uint64_t kStreamTasks = 0;
constexpr std::uint64_t kStreamGaBase = 100;
}  // namespace

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Proposed: return "Proposed";
    case Strategy::ProposedNtd: return "ProposedNTD";
    case Strategy::Fcfs: return "FCFS";
    case Strategy::Stf: return "STF";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  std::string low;
  for (char c : name) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "proposed") return Strategy::Proposed;
  if (low == "proposedntd" || low == "ntd") return Strategy::ProposedNtd;
  if (low == "fcfs") return Strategy::Fcfs;
  if (low == "stf") return Strategy::Stf;
  throw std::invalid_argument("unknown strategy '" + name +
                              "': valid names are Proposed, ProposedNTD, FCFS, STF");
}

const char* scenario_name(Scenario s) {
  return s == Scenario::Sjnr ? "sjnr" : "rb";
}

std::vector<double> SweepSpec::effective_sjnr_points() const {
  if (!sjnr_db_points.empty()) return sjnr_db_points;
  std::vector<double> pts;
  for (int db = 0; db <= 30; db += 2) pts.push_back(db);
  return pts;
}

std::vector<int> SweepSpec::effective_rb_points() const {
  if (!rb_points.empty()) return rb_points;
  std::vector<int> pts(15);
  for (int i = 0; i < 15; ++i) pts[i] = i + 1;
  return pts;
}

int SweepSpec::point_count() const {
  return scenario == Scenario::Sjnr ? static_cast<int>(effective_sjnr_points().size())
                                    : static_cast<int>(effective_rb_points().size());
}

namespace {

struct StrategyOutcome {
  double drop = kNan;
  double bw = kNan;
  double obj = kNan;
  bool feasible = false;
  bool validated_clean = false;
  int queue_conflicts = 0;
  int rb_owner = 0;
  int queued_dropped = 0;
};

SolveResult run_strategy(Strategy s, const ProblemInstance& inst, const GAConfig& base,
                         std::uint64_t seed) {
  switch (s) {
    case Strategy::Proposed: {
      GAConfig g = base;
      g.allow_diversity = true;
      g.seed = seed;
      return solve_ga(inst, g);
    }
    case Strategy::ProposedNtd: {
      GAConfig g = base;
      g.allow_diversity = false;
      g.seed = seed;
      return solve_ga(inst, g);
    }
    case Strategy::Fcfs: return solve_fcfs(inst);
    case Strategy::Stf: return solve_stf(inst);
  }
  throw std::logic_error("run_strategy: bad strategy");
}

void check_spec(const SweepSpec& spec) {
  if (spec.replicates < 1) throw std::invalid_argument("sweep: replicates must be >= 1");
  if (spec.strategies.empty()) throw std::invalid_argument("sweep: no strategies selected");
  for (std::size_t i = 0; i < spec.strategies.size(); ++i)
    for (std::size_t k = i + 1; k < spec.strategies.size(); ++k)
      if (spec.strategies[i] == spec.strategies[k])
        throw std::invalid_argument("sweep: duplicate strategy selected");
  if (spec.point_count() == 0) throw std::invalid_argument("sweep: no sweep points");
  if (spec.scenario == Scenario::Rb)
    for (int rb : spec.effective_rb_points())
      if (rb < 1) throw std::invalid_argument("sweep: rb points must be >= 1");
  if (spec.fixed_rb < 1) throw std::invalid_argument("sweep: fixed_rb must be >= 1");
  if (spec.threads < 0) throw std::invalid_argument("sweep: threads must be >= 0");
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / xs.size();
}

double se_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mu = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / (xs.size() - 1) / xs.size());
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  check_spec(spec);

  const int points = spec.point_count();
  const int reps = spec.replicates;
  const int nstrat = static_cast<int>(spec.strategies.size());
  const auto sjnr_points = spec.effective_sjnr_points();
  const auto rb_points = spec.effective_rb_points();

  SweepResult result;
  result.strategies = spec.strategies;
  result.sweep_values.resize(points);
  for (int p = 0; p < points; ++p)
    result.sweep_values[p] = spec.scenario == Scenario::Sjnr
                                 ? sjnr_points[p]
                                 : static_cast<double>(rb_points[p]);

  // One job per (point, replicate); every strategy shares the job's instance.
  std::vector<std::vector<StrategyOutcome>> outcomes(
      static_cast<std::size_t>(points) * reps, std::vector<StrategyOutcome>(nstrat));

  auto run_job = [&](int job) {
    int p = job / reps;
    int rep = job % reps;
    double gamma_db = spec.scenario == Scenario::Sjnr ? sjnr_points[p] : spec.fixed_sjnr_db;
    int rb_count = spec.scenario == Scenario::Rb ? rb_points[p] : spec.fixed_rb;
    ProblemInstance inst = generate_instance(
        spec.ranges, gamma_db, rb_count, child_seed(spec.base_seed, kStreamTasks, rep));

    for (int s = 0; s < nstrat; ++s) {
      std::uint64_t ga_seed =
          child_seed(spec.base_seed, kStreamGaBase + static_cast<std::uint64_t>(s),
                     static_cast<std::uint64_t>(p) * reps + rep);
      SolveResult r = run_strategy(spec.strategies[s], inst, spec.ga, ga_seed);

      StrategyOutcome& out = outcomes[job][s];
      std::vector<ConstraintViolation> vs = validate_solution(inst, r.solution);
      out.validated_clean = vs.empty();
      for (const auto& v : vs) {
        switch (v.kind) {
          case ConstraintViolation::Kind::QueuePositionConflict: ++out.queue_conflicts; break;
          case ConstraintViolation::Kind::RbOwnerNotArrival: ++out.rb_owner; break;
          case ConstraintViolation::Kind::QueuedTaskDropped: ++out.queued_dropped; break;
        }
      }
      out.feasible = r.feasible;
      if (r.feasible) {
        out.drop = r.evaluation.drop_ratio;
        out.bw = r.evaluation.bw_utilization;
        out.obj = r.evaluation.objective;
      }
    }
  };

  const int total_jobs = points * reps;
  int workers = spec.threads == 0
                    ? static_cast<int>(std::thread::hardware_concurrency())
                    : spec.threads;
  workers = std::max(1, std::min(workers, total_jobs));
  if (workers == 1) {
    for (int job = 0; job < total_jobs; ++job) run_job(job);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          int job = next.fetch_add(1);
          if (job >= total_jobs) return;
          run_job(job);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Serial merge in (point, replicate) order keeps output thread-independent.
  result.samples.assign(points, std::vector<SweepResult::Samples>(nstrat));
  for (int p = 0; p < points; ++p) {
    for (int s = 0; s < nstrat; ++s) {
      auto& smp = result.samples[p][s];
      smp.drop_ratio.resize(reps);
      smp.bw_util.resize(reps);
      smp.objective.resize(reps);
      smp.feasible.resize(reps);
      std::vector<double> drops, bws, objs;
      int excluded = 0;
      for (int rep = 0; rep < reps; ++rep) {
        const StrategyOutcome& out = outcomes[static_cast<std::size_t>(p) * reps + rep][s];
        smp.drop_ratio[rep] = out.drop;
        smp.bw_util[rep] = out.bw;
        smp.objective[rep] = out.obj;
        smp.feasible[rep] = out.feasible ? 1 : 0;
        result.audit.solutions_checked++;
        if (out.validated_clean) result.audit.passed++;
        else if (!out.feasible) result.audit.infeasible_flagged++;
        else result.audit.silent_violations++;
        result.audit.queue_conflict_count += out.queue_conflicts;
        result.audit.rb_owner_count += out.rb_owner;
        result.audit.queued_dropped_count += out.queued_dropped;
        if (out.feasible) {
          drops.push_back(out.drop);
          bws.push_back(out.bw);
          objs.push_back(out.obj);
        } else {
          ++excluded;
        }
      }
      SweepRow row;
      row.scenario = spec.scenario;
      row.sweep_value = result.sweep_values[p];
      row.strategy = spec.strategies[s];
      row.drop_ratio_mean = mean_of(drops);
      row.drop_ratio_se = se_of(drops);
      row.bw_util_mean = mean_of(bws);
      row.bw_util_se = se_of(bws);
      row.objective_mean = mean_of(objs);
      row.objective_se = se_of(objs);
      row.replicates = static_cast<int>(drops.size());
      row.excluded = excluded;
      result.rows.push_back(row);
    }
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out =
      "scenario,sweep_value,strategy,drop_ratio_mean,drop_ratio_se,bw_util_mean,"
      "bw_util_se,objective_mean,objective_se,replicates,excluded\n";
  char line[320];
  for (const SweepRow& r : result.rows) {
    std::snprintf(line, sizeof line, "%s,%.12g,%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d,%d\n",
                  scenario_name(r.scenario), r.sweep_value, strategy_name(r.strategy),
                  r.drop_ratio_mean, r.drop_ratio_se, r.bw_util_mean, r.bw_util_se,
                  r.objective_mean, r.objective_se, r.replicates, r.excluded);
    out += line;
  }
  return out;
}

OrderingReport summarize(const SweepResult& result) {
  if (result.strategies.size() < 2)
    throw std::invalid_argument("summarize: needs at least two strategies to rank");

  OrderingReport report;
  std::string text = "strategy ranking by mean drop ratio (ascending)\n";

  for (std::size_t p = 0; p < result.sweep_values.size(); ++p) {
    OrderingReport::Point point;
    point.sweep_value = result.sweep_values[p];

    std::vector<int> order(result.strategies.size());
    std::vector<double> means(result.strategies.size());
    for (std::size_t s = 0; s < result.strategies.size(); ++s) {
      order[s] = static_cast<int>(s);
      std::vector<double> xs;
      const auto& smp = result.samples[p][s];
      for (std::size_t r = 0; r < smp.feasible.size(); ++r)
        if (smp.feasible[r]) xs.push_back(smp.drop_ratio[r]);
      means[s] = mean_of(xs);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return means[a] < means[b]; });

    for (std::size_t k = 0; k < order.size(); ++k) {
      OrderingEntry e;
      e.strategy = result.strategies[order[k]];
      e.drop_ratio_mean = means[order[k]];
      if (k + 1 < order.size()) {
        // Paired difference over replicates feasible for both strategies.
        const auto& a = result.samples[p][order[k]];
        const auto& b = result.samples[p][order[k + 1]];
        std::vector<double> diffs;
        for (std::size_t r = 0; r < a.feasible.size(); ++r)
          if (a.feasible[r] && b.feasible[r])
            diffs.push_back(b.drop_ratio[r] - a.drop_ratio[r]);
        if (!diffs.empty()) {
          e.gap_to_next = mean_of(diffs);
          e.gap_se = se_of(diffs);
        } else {
          e.gap_to_next = means[order[k + 1]] - means[order[k]];
          e.gap_se = 0.0;
        }
        e.tied_with_next = e.gap_to_next <= e.gap_se;
      }
      point.ranking.push_back(e);
    }

    char buf[160];
    std::snprintf(buf, sizeof buf, "  %s=%.12g: ", scenario_name(result.rows.empty()
                                                                     ? Scenario::Sjnr
                                                                     : result.rows[0].scenario),
                  point.sweep_value);
    text += buf;
    for (std::size_t k = 0; k < point.ranking.size(); ++k) {
      const OrderingEntry& e = point.ranking[k];
      std::snprintf(buf, sizeof buf, "%s(%.4f)", strategy_name(e.strategy), e.drop_ratio_mean);
      text += buf;
      if (k + 1 < point.ranking.size()) text += e.tied_with_next ? " ~ " : " < ";
    }
    text += "\n";
    report.points.push_back(std::move(point));
  }
  report.rendered = std::move(text);
  return report;
}

}  // namespace mecsim
