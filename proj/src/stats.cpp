#include "corrdec/stats.hpp"

#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <stdexcept>

namespace corrdec {

std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double alpha) {
  if (n < 1) throw std::invalid_argument("clopper_pearson: n must be >= 1");
  if (k > n) throw std::invalid_argument("clopper_pearson: k must be <= n");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("clopper_pearson: alpha in (0,1)");

  double lo = 0, hi = 1;
  if (k > 0) {
    boost::math::beta_distribution<double> lower(static_cast<double>(k),
                                                 static_cast<double>(n - k + 1));
    lo = boost::math::quantile(lower, alpha / 2);
  }
  if (k < n) {
    boost::math::beta_distribution<double> upper(static_cast<double>(k + 1),
                                                 static_cast<double>(n - k));
    hi = boost::math::quantile(upper, 1 - alpha / 2);
  }
  return {lo, hi};
}

double logical_error_per_round(double p_l, double n_r, int layers, double p_max) {
  if (layers < 1) throw std::invalid_argument("logical_error_per_round: layers must be >= 1");
  if (!(n_r > 0)) throw std::invalid_argument("logical_error_per_round: n_r must be positive");
  if (p_l < 0 || p_l > p_max)
    throw std::invalid_argument("logical_error_per_round: P_L must lie in [0, P_max]");
  double rounds = layers * n_r;
  return p_max * (1 - std::pow(1 - p_l / p_max, 1.0 / rounds));
}

double logical_error_from_per_round(double per_round, double n_r, int layers, double p_max) {
  if (layers < 1) throw std::invalid_argument("logical_error_from_per_round: layers must be >= 1");
  if (!(n_r > 0)) throw std::invalid_argument("logical_error_from_per_round: n_r must be positive");
  if (per_round < 0 || per_round > p_max)
    throw std::invalid_argument("logical_error_from_per_round: rate must lie in [0, P_max]");
  double rounds = layers * n_r;
  return p_max * (1 - std::pow(1 - per_round / p_max, rounds));
}

}  // namespace corrdec
