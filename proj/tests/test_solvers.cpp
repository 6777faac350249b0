#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "mecsim/evaluator.hpp"
#include "mecsim/solvers.hpp"
#include "mecsim/taskgen.hpp"
#include "test_util.hpp"

using namespace mecsim;

namespace {

// Tiny instances with payloads of a few bits keep per-block error
// probabilities strictly inside (0, 1), so block choices genuinely matter.
GenRanges micro_ranges() {
  GenRanges r;
  r.arrival_count = 2;
  r.queued_count = 1;
  r.size_bits_min = 1;
  r.size_bits_max = 10;
  return r;
}

GAConfig small_ga(std::uint64_t seed) {
  GAConfig g;
  g.population_size = 120;
  g.max_generations = 60;
  g.stall_generations = 30;
  g.seed = seed;
  return g;
}

}  // namespace

TEST_CASE("the genetic search matches the exhaustive optimum on micro instances") {
  int matched = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    ProblemInstance inst = generate_instance(micro_ranges(), 5.0, 3, seed);
    SolveResult exact = solve_exhaustive(inst);
    SolveResult ga = solve_ga(inst, small_ga(seed * 1000));
    REQUIRE(exact.feasible);
    CHECK(ga.feasible);
    if (std::fabs(ga.evaluation.objective - exact.evaluation.objective) <= 1e-9) ++matched;
    CHECK(ga.evaluation.objective >= exact.evaluation.objective - 1e-9);
  }
  CHECK(matched >= 7);
}

TEST_CASE("exhaustive search on a one-task instance picks schedule-and-transmit") {
  // Single arrival, one block, per-copy decode failure 0.1. Scheduling and
  // owning the block scores 0.8*0.1 + 0.2*0.9 = 0.26; every alternative
  // scores 0.8. The enumerator must return the 0.26 assignment.
  ProblemInstance inst;
  inst.arrivals = {{0, TaskKind::Arrival, 150.0, 1, 2'000'000}};
  inst.rb_count = 1;
  inst.sjnr = {{6.1690679216294911}};
  inst.lambda = 0.8;

  SolveResult r = solve_exhaustive(inst);
  CHECK(r.feasible);
  CHECK(r.evaluation.objective == doctest::Approx(0.26).epsilon(1e-12));
  REQUIRE(r.solution.queue_position.count(0) == 1);
  CHECK(r.solution.queue_position.at(0) == 1);
  REQUIRE(r.solution.rb_owner.size() == 1);
  CHECK(r.solution.rb_owner[0].has_value());
  CHECK(*r.solution.rb_owner[0] == 0);
}

TEST_CASE("exhaustive search refuses oversized instances up front") {
  GenRanges r;  // 5 arrivals + 3 queued over 10 blocks: far past any budget
  ProblemInstance inst = generate_instance(r, 5.0, 10, 1);
  CHECK_THROWS_AS(solve_exhaustive(inst, 1e7), BudgetExceededError);
  try {
    solve_exhaustive(inst, 1e7);
  } catch (const BudgetExceededError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("exhaustive search flags instances whose queued tasks cannot finish") {
  ProblemInstance inst;
  inst.arrivals = {{0, TaskKind::Arrival, 150.0, 5, 2'000'000}};
  inst.queued = {{1, TaskKind::Queued, 1.0, 0, 50'000'000}};  // needs 50 ms, has 1
  inst.rb_count = 2;
  inst.sjnr = {{3.0, 3.0}};

  SolveResult r = solve_exhaustive(inst);
  CHECK_FALSE(r.feasible);
  REQUIRE_FALSE(r.evaluation.violations.empty());
  CHECK(r.evaluation.violations[0].kind == ConstraintViolation::Kind::QueuedTaskDropped);
}

TEST_CASE("the genetic search flags instances whose queued tasks cannot finish") {
  ProblemInstance inst;
  inst.arrivals = {{0, TaskKind::Arrival, 150.0, 5, 2'000'000}};
  inst.queued = {{1, TaskKind::Queued, 1.0, 0, 50'000'000}};
  inst.rb_count = 2;
  inst.sjnr = {{3.0, 3.0}};

  SolveResult r = solve_ga(inst, small_ga(3));
  CHECK_FALSE(r.feasible);
  REQUIRE_FALSE(r.evaluation.violations.empty());
  CHECK(r.evaluation.violations[0].kind == ConstraintViolation::Kind::QueuedTaskDropped);
}

TEST_CASE("ga runs are reproducible per seed, trace included") {
  ProblemInstance inst = generate_instance(micro_ranges(), 5.0, 3, 11);
  SolveResult a = solve_ga(inst, small_ga(7));
  SolveResult b = solve_ga(inst, small_ga(7));
  CHECK(a.evaluation.objective == b.evaluation.objective);
  CHECK(a.solution.queue_position == b.solution.queue_position);
  CHECK(a.solution.rb_owner == b.solution.rb_owner);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].best_fitness == b.trace[i].best_fitness);
    CHECK(a.trace[i].mean_fitness == b.trace[i].mean_fitness);
  }
  CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
}

TEST_CASE("elitism keeps the best fitness from rising between generations") {
  ProblemInstance inst = generate_instance(micro_ranges(), 8.0, 4, 23);
  SolveResult r = solve_ga(inst, small_ga(5));
  REQUIRE(r.trace.size() >= 2);
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].best_fitness <= r.trace[i - 1].best_fitness + 1e-15);
  CHECK(r.trace[0].generation == 0);
  std::string csv = trace_to_csv(r.trace);
  CHECK(csv.rfind("generation,best_fitness,mean_fitness\n", 0) == 0);
}

TEST_CASE("a feasible winner's reported objective matches its final fitness") {
  ProblemInstance inst = generate_instance(micro_ranges(), 5.0, 3, 31);
  SolveResult r = solve_ga(inst, small_ga(9));
  REQUIRE(r.feasible);
  // Feasible fitness carries no penalty term, so it equals the evaluated
  // objective up to summation-order rounding.
  CHECK(r.trace.back().best_fitness ==
        doctest::Approx(r.evaluation.objective).epsilon(1e-12));
}

TEST_CASE("with a single resource block, diversity on and off coincide exactly") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GenRanges ranges = micro_ranges();
    ranges.arrival_count = 3;
    ProblemInstance inst = generate_instance(ranges, 5.0, 1, seed);
    GAConfig td = small_ga(seed * 77);
    GAConfig ntd = td;
    td.allow_diversity = true;
    ntd.allow_diversity = false;
    SolveResult a = solve_ga(inst, td);
    SolveResult b = solve_ga(inst, ntd);
    CHECK(a.evaluation.objective == b.evaluation.objective);
    CHECK(a.solution.queue_position == b.solution.queue_position);
    CHECK(a.solution.rb_owner == b.solution.rb_owner);
  }
}

TEST_CASE("diversity off caps every arrival at one resource block") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GenRanges ranges = micro_ranges();
    ranges.arrival_count = 3;
    ProblemInstance inst = generate_instance(ranges, 5.0, 6, seed);
    GAConfig cfg = small_ga(seed);
    cfg.allow_diversity = false;
    SolveResult r = solve_ga(inst, cfg);
    std::map<TaskId, int> owned;
    for (const auto& o : r.solution.rb_owner)
      if (o) owned[*o]++;
    for (const auto& [id, n] : owned) CHECK(n <= 1);
  }
}

TEST_CASE("ga solutions always satisfy the structural constraints") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    ProblemInstance inst = generate_instance(micro_ranges(), 5.0, 4, seed);
    SolveResult r = solve_ga(inst, small_ga(seed + 40));
    auto violations = validate_solution(inst, r.solution);
    if (r.feasible) CHECK(violations.empty());
    for (const auto& v : violations)
      CHECK(v.kind == ConstraintViolation::Kind::QueuedTaskDropped);
  }
}

TEST_CASE("fcfs places queued tasks first and hands out blocks in task order") {
  ProblemInstance inst;
  inst.arrivals = {{0, TaskKind::Arrival, 150.0, 100, 5'000'000},
                   {1, TaskKind::Arrival, 160.0, 100, 2'000'000}};
  inst.queued = {{2, TaskKind::Queued, 170.0, 0, 3'000'000}};
  inst.rb_count = 3;
  inst.sjnr = {{3.0, 3.0, 3.0}, {3.0, 3.0, 3.0}};

  SolveResult r = solve_fcfs(inst);
  CHECK(r.solution.queue_position.at(2) == 1);
  CHECK(r.solution.queue_position.at(0) == 2);
  CHECK(r.solution.queue_position.at(1) == 3);
  CHECK(*r.solution.rb_owner[0] == 0);
  CHECK(*r.solution.rb_owner[1] == 1);
  CHECK_FALSE(r.solution.rb_owner[2].has_value());
  CHECK(r.feasible);
}

TEST_CASE("stf orders arrivals by processing load, ties by id") {
  ProblemInstance inst;
  inst.arrivals = {{0, TaskKind::Arrival, 150.0, 100, 5'000'000},
                   {1, TaskKind::Arrival, 160.0, 100, 2'000'000},
                   {2, TaskKind::Arrival, 160.0, 100, 2'000'000}};
  inst.queued = {{3, TaskKind::Queued, 170.0, 0, 3'000'000}};
  inst.rb_count = 2;
  inst.sjnr = {{3.0, 3.0}, {3.0, 3.0}, {3.0, 3.0}};

  SolveResult r = solve_stf(inst);
  CHECK(r.solution.queue_position.at(3) == 1);
  CHECK(r.solution.queue_position.at(1) == 2);  // load 2e6, lower id first
  CHECK(r.solution.queue_position.at(2) == 3);
  CHECK(r.solution.queue_position.at(0) == 4);  // heaviest last
  CHECK(*r.solution.rb_owner[0] == 1);
  CHECK(*r.solution.rb_owner[1] == 2);  // only two blocks; task 0 gets none
}

TEST_CASE("when blocks outnumber arrivals the extras stay free") {
  ProblemInstance inst;
  inst.arrivals = {{0, TaskKind::Arrival, 150.0, 100, 5'000'000}};
  inst.rb_count = 4;
  inst.sjnr = {{3.0, 3.0, 3.0, 3.0}};
  SolveResult r = solve_fcfs(inst);
  CHECK(*r.solution.rb_owner[0] == 0);
  for (int j = 1; j < 4; ++j) CHECK_FALSE(r.solution.rb_owner[j].has_value());
}

TEST_CASE("shortest-first beats first-come on average when deadlines are tight") {
  GenRanges ranges;
  ranges.size_bits_min = 1;
  ranges.size_bits_max = 10;
  double fcfs_sum = 0.0, stf_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ProblemInstance inst = generate_instance(ranges, 15.0, 10, seed);
    fcfs_sum += solve_fcfs(inst).evaluation.drop_ratio;
    stf_sum += solve_stf(inst).evaluation.drop_ratio;
  }
  CHECK(stf_sum <= fcfs_sum + 1e-12);
}

TEST_CASE("ga configs are validated") {
  ProblemInstance inst = generate_instance(micro_ranges(), 5.0, 2, 1);
  GAConfig bad = small_ga(1);
  bad.population_size = 1;
  CHECK_THROWS_AS(solve_ga(inst, bad), std::invalid_argument);
  bad = small_ga(1);
  bad.mutation_rate = 1.5;
  CHECK_THROWS_AS(solve_ga(inst, bad), std::invalid_argument);
  bad = small_ga(1);
  bad.elitism_count = bad.population_size;
  CHECK_THROWS_AS(solve_ga(inst, bad), std::invalid_argument);
}
