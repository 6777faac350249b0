#include "mecsim/taskgen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "mecsim/channel.hpp"

namespace mecsim {

namespace {

// std::mt19937_64 output is pinned by the standard; the mappings below are
// hand-rolled so draws stay identical across standard libraries too.
double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t bound) {
  // Lemire's unbiased bounded draw.
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

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  uniform_u64(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

int poisson_draw(std::mt19937_64& rng, double mean) {
  double limit = std::exp(-mean);
  double p = 1.0;
  int k = 0;
  do {
    ++k;
    p *= uniform_real(rng, 0.0, 1.0);
  } while (p > limit);
  return k - 1;
}

std::uint64_t splitmix_step(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

void check_ranges(const GenRanges& r) {
  if (r.deadline_ms_min > r.deadline_ms_max || !(r.deadline_ms_min > 0.0))
    throw std::invalid_argument("ranges: bad deadline_ms range");
  if (r.size_bits_min > r.size_bits_max || r.size_bits_min < 1)
    throw std::invalid_argument("ranges: bad size_bits range");
  if (r.load_cycles_min > r.load_cycles_max || r.load_cycles_min < 0)
    throw std::invalid_argument("ranges: bad load_cycles range");
  if (r.arrival_count < 0 || r.queued_count < 0)
    throw std::invalid_argument("ranges: task counts must be >= 0");
  if (!(r.rb_bandwidth_hz > 0.0) || !(r.cpu_hz > 0.0))
    throw std::invalid_argument("ranges: rates must be > 0");
  if (r.lambda < 0.0 || r.lambda > 1.0)
    throw std::invalid_argument("ranges: lambda must be in [0, 1]");
}

}  // namespace

std::vector<std::vector<double>> uniform_sjnr_matrix(double gamma_db, int m, int rb_count) {
  return std::vector<std::vector<double>>(
      m, std::vector<double>(rb_count, db_to_linear(gamma_db)));
}

std::vector<std::vector<double>> sjnr_matrix_from_db(const std::vector<double>& gamma_db_per_rb,
                                                     int m) {
  std::vector<double> row;
  row.reserve(gamma_db_per_rb.size());
  for (double db : gamma_db_per_rb) row.push_back(db_to_linear(db));
  return std::vector<std::vector<double>>(m, row);
}

ProblemInstance generate_instance(const GenRanges& ranges, double gamma_db, int rb_count,
                                  std::uint64_t seed) {
  check_ranges(ranges);
  if (rb_count < 1) throw std::invalid_argument("generate_instance: rb_count must be >= 1");

  std::mt19937_64 rng(seed);
  ProblemInstance inst;
  inst.rb_count = rb_count;
  inst.rb_bandwidth_hz = ranges.rb_bandwidth_hz;
  inst.cpu_hz = ranges.cpu_hz;
  inst.lambda = ranges.lambda;

  int m = ranges.poisson_arrivals ? poisson_draw(rng, ranges.arrival_count)
                                  : ranges.arrival_count;
  for (int i = 0; i < m; ++i) {
    Task t;
    t.id = i;
    t.kind = TaskKind::Arrival;
    t.deadline_ms = uniform_real(rng, ranges.deadline_ms_min, ranges.deadline_ms_max);
    t.size_bits = uniform_int(rng, ranges.size_bits_min, ranges.size_bits_max);
    t.load_cycles = uniform_int(rng, ranges.load_cycles_min, ranges.load_cycles_max);
    inst.arrivals.push_back(t);
  }
  for (int i = 0; i < ranges.queued_count; ++i) {
    Task t;
    t.id = m + i;
    t.kind = TaskKind::Queued;
    t.deadline_ms = uniform_real(rng, ranges.deadline_ms_min, ranges.deadline_ms_max);
    t.size_bits = 0;
    t.load_cycles = uniform_int(rng, ranges.load_cycles_min, ranges.load_cycles_max);
    inst.queued.push_back(t);
  }
  inst.sjnr = uniform_sjnr_matrix(gamma_db, m, rb_count);
  inst.validate();
  return inst;
}

std::uint64_t child_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = splitmix_step(z);
  z += 0x9E3779B97F4A7C15ULL * (index + 1);
  return splitmix_step(z);
}

}  // namespace mecsim
