#pragma once

#include <utility>
#include <vector>

namespace corrdec {

// One measured logical error rate at code distance d, physical rate p, and
// syndrome-round density n_r.
struct RatePoint {
  int d = 0;
  double p = 0;
  double n_r = 1;
  double p_l = 0;
};

// Quadratic universal-scaling collapse log P_L = a + b x + c x^2 with
// x = (p - p_th) d^(1/nu).
struct UniversalFit {
  double a = 0, b = 0, c = 0;
  double p_th = 0;
  double nu = 0;
  double residual = 0;  // root-mean-square residual in log P_L
};

// Heuristic suppression law P_L = 32 C n_r alpha_{n_r}^((d+1)/2) with the
// prefactor C shared across n_r groups.
struct HeuristicFit {
  double c = 0;
  std::vector<std::pair<double, double>> alphas;  // (n_r, alpha), sorted by n_r
  std::vector<double> excluded_n_r;               // groups dropped from the fit
  double residual = 0;

  double alpha_for(double n_r) const;
  // Smallest (fractional) distance reaching the target logical error rate.
  double distance_for(double n_r, double target_p_l) const;
};

// Fits (a, b, c, p_th, nu); needs >= 3 distances and >= 4 physical rates with
// nonzero P_L. Throws std::runtime_error when the data do not bracket a
// crossing or the exponent diverges (no d dependence).
UniversalFit fit_universal_scaling(const std::vector<RatePoint>& points);

// Fits shared C and per-n_r alpha. Groups with fewer than two usable distances
// or without a monotone decrease of P_L in d are excluded (recorded in
// excluded_n_r). Throws std::runtime_error when no group survives.
HeuristicFit fit_heuristic_scaling(const std::vector<RatePoint>& points);

struct CostRow {
  double n_r = 0;
  double d_star = 0;
  double cost_space_time = 0;     // (n_r + 1) * d*^2
  double cost_rounds_only = 0;    // n_r * d*^2
};

// Per fitted n_r group: the fractional distance reaching target_p_l and both
// space-time cost conventions.
std::vector<CostRow> spacetime_cost(const HeuristicFit& fit, double target_p_l);

// Interpolated physical rate where two logical-error curves (same ascending p
// grid) cross, i.e. where hi_d - lo_d changes sign. Throws std::runtime_error
// if the grids differ or no sign change exists.
double crossing_point(const std::vector<std::pair<double, double>>& lo_d,
                      const std::vector<std::pair<double, double>>& hi_d);

}  // namespace corrdec
