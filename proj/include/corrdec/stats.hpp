#pragma once

#include <cstdint>
#include <utility>

namespace corrdec {

// Exact (Clopper-Pearson) binomial confidence interval for k successes out of
// n trials at significance alpha, via Beta-distribution quantiles. lo = 0 when
// k = 0 and hi = 1 when k = n.
std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double alpha = 0.05);

constexpr double kLogicalErrorMax = 15.0 / 16.0;

// Converts a whole-circuit logical error probability P_L accumulated over
// `layers` gate layers at n_r syndrome rounds per layer into a per-round rate:
//   P_max * (1 - (1 - P_L / P_max)^(1 / (layers * n_r)))
// Strictly increasing in P_L on [0, P_max].
double logical_error_per_round(double p_l, double n_r, int layers, double p_max = kLogicalErrorMax);

// Inverse of logical_error_per_round in its first argument.
double logical_error_from_per_round(double per_round, double n_r, int layers,
                                    double p_max = kLogicalErrorMax);

}  // namespace corrdec
