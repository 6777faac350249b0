#pragma once

#include <cstdint>
#include <vector>

#include "mecsim/model.hpp"

namespace mecsim {

// Closed sampling ranges for instance generation plus the scenario constants
// copied into every generated instance.
struct GenRanges {
  double deadline_ms_min = 140.0;
  double deadline_ms_max = 200.0;
  std::int64_t size_bits_min = 8000;
  std::int64_t size_bits_max = 80000;
  std::int64_t load_cycles_min = 2'000'000;
  std::int64_t load_cycles_max = 50'000'000;
  int arrival_count = 5;
  int queued_count = 3;
  // When set, the arrival count is drawn per instance from a Poisson law with
  // mean arrival_count instead of being fixed.
  bool poisson_arrivals = false;
  double rb_bandwidth_hz = 100e3;
  double cpu_hz = 1e9;
  double lambda = 0.5;
};

// Uniform SJNR matrix: every (arrival, block) entry is gamma_db converted to
// linear scale; m rows.
std::vector<std::vector<double>> uniform_sjnr_matrix(double gamma_db, int m, int rb_count);

// One linear-scale row per arrival from per-block dB values.
std::vector<std::vector<double>> sjnr_matrix_from_db(const std::vector<double>& gamma_db_per_rb,
                                                     int m);

// Deterministic instance draw: arrival tasks get deadline, size and load;
// queued tasks get deadline and load. Identical (ranges, gamma_db, rb_count,
// seed) always produce the identical instance.
ProblemInstance generate_instance(const GenRanges& ranges, double gamma_db, int rb_count,
                                  std::uint64_t seed);

// Fixed seed-splitting rule used to derive independent child streams (one per
// replicate, solver run, ...) from one base seed.
std::uint64_t child_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

}  // namespace mecsim
