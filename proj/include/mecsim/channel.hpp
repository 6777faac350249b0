#pragma once

#include <cstdint>
#include <vector>

namespace mecsim {

// Received powers on one resource block, all in watts.
struct LinkBudget {
  double signal_w = 0.0;
  double jamming_w = 0.0;
  double noise_w = 0.0;
};

// Signal to jamming-plus-noise ratio, linear scale.
// Requires signal_w > 0, jamming_w >= 0, noise_w > 0.
double sjnr(const LinkBudget& lb);

double db_to_linear(double db);
double linear_to_db(double linear);

// Bit error probability of Gray-coded 16-QAM over an AWGN-like link at linear
// SJNR gamma, using the (3/4)*Q(sqrt(gamma/5)) approximation clamped to
// [0, 0.5]. Throws std::domain_error for gamma <= 0.
double bit_error_prob(double gamma);

// Probability that a size_bits payload suffers at least one bit error when
// each bit independently flips with probability bit_error. Evaluated in log
// domain so payloads of tens of kilobits do not underflow.
double task_error_prob(double bit_error, std::int64_t size_bits);

// Probability that every copy of a task fails when sent over the given
// resource blocks; the empty set yields 1 (nothing was sent).
double td_error_prob(const std::vector<double>& per_rb_task_errors);

}  // namespace mecsim
