#include "mecsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mecsim {

double sjnr(const LinkBudget& lb) {
  if (!(lb.signal_w > 0.0)) throw std::domain_error("sjnr: signal_w must be > 0");
  if (!(lb.noise_w > 0.0)) throw std::domain_error("sjnr: noise_w must be > 0");
  if (lb.jamming_w < 0.0) throw std::domain_error("sjnr: jamming_w must be >= 0");
  return lb.signal_w / (lb.jamming_w + lb.noise_w);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  if (!(linear > 0.0)) throw std::domain_error("linear_to_db: value must be > 0");
  return 10.0 * std::log10(linear);
}

namespace {
// Gaussian tail Q(x) = 0.5 * erfc(x / sqrt(2)).
double gaussian_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }
}  // namespace

double bit_error_prob(double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("bit_error_prob: gamma must be > 0");
  double p = 0.75 * gaussian_q(std::sqrt(gamma / 5.0));
  return std::clamp(p, 0.0, 0.5);
}

double task_error_prob(double bit_error, std::int64_t size_bits) {
  if (size_bits < 1) throw std::domain_error("task_error_prob: size_bits must be >= 1");
  if (bit_error < 0.0 || bit_error > 1.0)
    throw std::domain_error("task_error_prob: bit_error must be in [0, 1]");
  if (bit_error == 0.0) return 0.0;
  if (bit_error == 1.0) return 1.0;
  // 1 - (1 - pe)^bits without underflow for large payloads.
  return -std::expm1(static_cast<double>(size_bits) * std::log1p(-bit_error));
}

double td_error_prob(const std::vector<double>& per_rb_task_errors) {
  double p = 1.0;
  for (double e : per_rb_task_errors) p *= e;
  return p;
}

}  // namespace mecsim
