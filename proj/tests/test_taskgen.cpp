#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "mecsim/channel.hpp"
#include "mecsim/taskgen.hpp"

using namespace mecsim;

TEST_CASE("generation is reproducible and seed-sensitive") {
  GenRanges r;
  ProblemInstance a = generate_instance(r, 5.0, 10, 42);
  ProblemInstance b = generate_instance(r, 5.0, 10, 42);
  ProblemInstance c = generate_instance(r, 5.0, 10, 43);

  REQUIRE(a.arrival_count() == b.arrival_count());
  for (int i = 0; i < a.arrival_count(); ++i) {
    CHECK(a.arrivals[i].deadline_ms == b.arrivals[i].deadline_ms);
    CHECK(a.arrivals[i].size_bits == b.arrivals[i].size_bits);
    CHECK(a.arrivals[i].load_cycles == b.arrivals[i].load_cycles);
  }
  for (int i = 0; i < a.queued_count(); ++i) {
    CHECK(a.queued[i].deadline_ms == b.queued[i].deadline_ms);
    CHECK(a.queued[i].load_cycles == b.queued[i].load_cycles);
  }

  bool any_diff = false;
  for (int i = 0; i < a.arrival_count(); ++i)
    if (a.arrivals[i].deadline_ms != c.arrivals[i].deadline_ms) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("generated instances have the requested shape and ids") {
  GenRanges r;
  r.arrival_count = 4;
  r.queued_count = 2;
  ProblemInstance inst = generate_instance(r, 8.0, 7, 1);
  CHECK(inst.arrival_count() == 4);
  CHECK(inst.queued_count() == 2);
  CHECK(inst.rb_count == 7);
  CHECK(static_cast<int>(inst.sjnr.size()) == 4);
  CHECK(static_cast<int>(inst.sjnr[0].size()) == 7);
  for (int i = 0; i < inst.total_tasks(); ++i) CHECK(inst.task_at(i).id == i);
  CHECK_NOTHROW(inst.validate());
  for (const Task& q : inst.queued) CHECK(q.size_bits == 0);
}

TEST_CASE("collapsed ranges pin every draw to the single admissible value") {
  GenRanges r;
  r.deadline_ms_min = r.deadline_ms_max = 170.0;
  r.size_bits_min = r.size_bits_max = 12345;
  r.load_cycles_min = r.load_cycles_max = 9'000'000;
  ProblemInstance inst = generate_instance(r, 5.0, 3, 7);
  for (const Task& t : inst.arrivals) {
    CHECK(t.deadline_ms == 170.0);
    CHECK(t.size_bits == 12345);
    CHECK(t.load_cycles == 9'000'000);
  }
  for (const Task& t : inst.queued) {
    CHECK(t.deadline_ms == 170.0);
    CHECK(t.load_cycles == 9'000'000);
  }
}

TEST_CASE("draws stay inside their ranges and fill them") {
  GenRanges r;
  double dmin = 1e18, dmax = -1e18;
  std::int64_t smin = INT64_MAX, smax = INT64_MIN;
  std::int64_t lmin = INT64_MAX, lmax = INT64_MIN;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    ProblemInstance inst = generate_instance(r, 5.0, 2, seed);
    for (const Task& t : inst.arrivals) {
      CHECK(t.deadline_ms >= r.deadline_ms_min);
      CHECK(t.deadline_ms <= r.deadline_ms_max);
      CHECK(t.size_bits >= r.size_bits_min);
      CHECK(t.size_bits <= r.size_bits_max);
      CHECK(t.load_cycles >= r.load_cycles_min);
      CHECK(t.load_cycles <= r.load_cycles_max);
      dmin = std::min(dmin, t.deadline_ms);
      dmax = std::max(dmax, t.deadline_ms);
      smin = std::min(smin, t.size_bits);
      smax = std::max(smax, t.size_bits);
      lmin = std::min(lmin, t.load_cycles);
      lmax = std::max(lmax, t.load_cycles);
    }
  }
  // 2000 draws should come within 2% of both ends of every range.
  CHECK(dmin < r.deadline_ms_min + 0.02 * (r.deadline_ms_max - r.deadline_ms_min));
  CHECK(dmax > r.deadline_ms_max - 0.02 * (r.deadline_ms_max - r.deadline_ms_min));
  CHECK(smin < r.size_bits_min + (r.size_bits_max - r.size_bits_min) / 50);
  CHECK(smax > r.size_bits_max - (r.size_bits_max - r.size_bits_min) / 50);
  CHECK(lmin < r.load_cycles_min + (r.load_cycles_max - r.load_cycles_min) / 50);
  CHECK(lmax > r.load_cycles_max - (r.load_cycles_max - r.load_cycles_min) / 50);
}

TEST_CASE("sample means sit near the range midpoints") {
  GenRanges r;
  double dsum = 0.0, ssum = 0.0;
  int n = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    ProblemInstance inst = generate_instance(r, 5.0, 2, seed);
    for (const Task& t : inst.arrivals) {
      dsum += t.deadline_ms;
      ssum += static_cast<double>(t.size_bits);
      ++n;
    }
  }
  double dmid = 0.5 * (r.deadline_ms_min + r.deadline_ms_max);
  double dsigma = (r.deadline_ms_max - r.deadline_ms_min) / std::sqrt(12.0);
  CHECK(std::fabs(dsum / n - dmid) < 4.0 * dsigma / std::sqrt(n));
  double smid = 0.5 * static_cast<double>(r.size_bits_min + r.size_bits_max);
  double ssigma = static_cast<double>(r.size_bits_max - r.size_bits_min) / std::sqrt(12.0);
  CHECK(std::fabs(ssum / n - smid) < 4.0 * ssigma / std::sqrt(n));
}

TEST_CASE("uniform SJNR matrices convert decibels once for every entry") {
  auto m = uniform_sjnr_matrix(0.0, 3, 4);
  REQUIRE(m.size() == 3);
  for (const auto& row : m) {
    REQUIRE(row.size() == 4);
    for (double g : row) CHECK(g == doctest::Approx(1.0).epsilon(1e-15));
  }
  auto m2 = uniform_sjnr_matrix(10.0, 1, 1);
  CHECK(m2[0][0] == doctest::Approx(10.0).epsilon(1e-15));

  auto rows = sjnr_matrix_from_db({0.0, 10.0, 20.0}, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][2] == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("child seeds separate streams and indices") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t stream = 0; stream < 8; ++stream)
    for (std::uint64_t index = 0; index < 64; ++index)
      seen.insert(child_seed(12345, stream, index));
  CHECK(seen.size() == 8 * 64);  // no collisions across this grid
  CHECK(child_seed(1, 0, 0) != child_seed(2, 0, 0));
  CHECK(child_seed(1, 0, 0) == child_seed(1, 0, 0));
}

TEST_CASE("poisson arrivals vary the arrival count around its mean") {
  GenRanges r;
  r.poisson_arrivals = true;
  r.arrival_count = 5;
  double sum = 0.0;
  int distinct = 0;
  std::set<int> counts;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    ProblemInstance inst = generate_instance(r, 5.0, 4, seed);
    CHECK_NOTHROW(inst.validate());
    sum += inst.arrival_count();
    counts.insert(inst.arrival_count());
  }
  distinct = static_cast<int>(counts.size());
  CHECK(distinct > 1);
  CHECK(std::fabs(sum / 300.0 - 5.0) < 4.0 * std::sqrt(5.0 / 300.0));
}
