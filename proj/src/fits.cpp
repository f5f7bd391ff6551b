#include "corrdec/fits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace corrdec {

namespace {

constexpr double kNuFloor = 0.2;
constexpr double kNuCeiling = 50.0;

// Least-squares SSE of the quadratic collapse at fixed (p_th, nu); also
// returns the linear coefficients.
double collapse_sse(const std::vector<RatePoint>& pts, double p_th, double nu, double* abc) {
  const std::size_t n = pts.size();
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd target(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = (pts[i].p - p_th) * std::pow(pts[i].d, 1.0 / nu);
    design(i, 0) = 1;
    design(i, 1) = x;
    design(i, 2) = x * x;
    target(i) = std::log(pts[i].p_l);
  }
  Eigen::Vector3d coef = design.colPivHouseholderQr().solve(target);
  if (abc) {
    abc[0] = coef(0);
    abc[1] = coef(1);
    abc[2] = coef(2);
  }
  return (design * coef - target).squaredNorm();
}

struct Simplex2 {
  // Nelder-Mead on f over 2 parameters.
  template <typename F>
  static std::pair<Eigen::Vector2d, double> minimize(F f, Eigen::Vector2d start,
                                                     Eigen::Vector2d scale, int iters) {
    std::array<Eigen::Vector2d, 3> v = {start, start + Eigen::Vector2d(scale(0), 0),
                                        start + Eigen::Vector2d(0, scale(1))};
    std::array<double, 3> fv = {f(v[0]), f(v[1]), f(v[2])};
    auto order = [&] {
      std::array<int, 3> idx = {0, 1, 2};
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
      std::array<Eigen::Vector2d, 3> nv = {v[idx[0]], v[idx[1]], v[idx[2]]};
      std::array<double, 3> nf = {fv[idx[0]], fv[idx[1]], fv[idx[2]]};
      v = nv;
      fv = nf;
    };
    for (int it = 0; it < iters; ++it) {
      order();
      Eigen::Vector2d centroid = (v[0] + v[1]) / 2;
      Eigen::Vector2d refl = centroid + (centroid - v[2]);
      double fr = f(refl);
      if (fr < fv[0]) {
        Eigen::Vector2d expand = centroid + 2 * (centroid - v[2]);
        double fe = f(expand);
        if (fe < fr) {
          v[2] = expand;
          fv[2] = fe;
        } else {
          v[2] = refl;
          fv[2] = fr;
        }
      } else if (fr < fv[1]) {
        v[2] = refl;
        fv[2] = fr;
      } else {
        Eigen::Vector2d contract = centroid + 0.5 * (v[2] - centroid);
        double fc = f(contract);
        if (fc < fv[2]) {
          v[2] = contract;
          fv[2] = fc;
        } else {
          v[1] = v[0] + 0.5 * (v[1] - v[0]);
          v[2] = v[0] + 0.5 * (v[2] - v[0]);
          fv[1] = f(v[1]);
          fv[2] = f(v[2]);
        }
      }
      if ((v[0] - v[2]).norm() < 1e-10 && std::abs(fv[0] - fv[2]) < 1e-14) break;
    }
    order();
    return {v[0], fv[0]};
  }
};

}  // namespace

UniversalFit fit_universal_scaling(const std::vector<RatePoint>& points) {
  std::vector<RatePoint> pts;
  for (const auto& pt : points)
    if (pt.p_l > 0) pts.push_back(pt);
  std::set<int> distances;
  std::set<double> rates;
  for (const auto& pt : pts) {
    distances.insert(pt.d);
    rates.insert(pt.p);
  }
  if (distances.size() < 3 || rates.size() < 4)
    throw std::runtime_error(
        "universal fit needs >= 3 distances and >= 4 physical rates with nonzero P_L");

  double p_min = *rates.begin();
  double p_max = *rates.rbegin();

  // Bounded objective: parameters mapped through (p_th, log nu) with a steep
  // penalty outside the admissible box.
  auto objective = [&](const Eigen::Vector2d& v) {
    double p_th = v(0);
    double nu = std::exp(v(1));
    double penalty = 0;
    if (p_th <= p_min) penalty += 1e6 * (p_min - p_th + 1e-3);
    if (p_th >= p_max) penalty += 1e6 * (p_th - p_max + 1e-3);
    if (nu < kNuFloor) penalty += 1e6 * (kNuFloor - nu);
    if (nu > kNuCeiling) penalty += 1e6 * (nu - kNuCeiling);
    double clamped_pth = std::clamp(p_th, p_min * 0.5, p_max * 1.5);
    double clamped_nu = std::clamp(nu, kNuFloor / 2, kNuCeiling * 2);
    return collapse_sse(pts, clamped_pth, clamped_nu, nullptr) + penalty;
  };

  Eigen::Vector2d best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (double frac : {0.25, 0.5, 0.75}) {
    for (double nu0 : {0.7, 1.0, 1.5}) {
      Eigen::Vector2d start(p_min + frac * (p_max - p_min), std::log(nu0));
      Eigen::Vector2d scale(0.1 * (p_max - p_min), 0.3);
      auto [arg, val] = Simplex2::minimize(objective, start, scale, 400);
      if (val < best_sse) {
        best_sse = val;
        best = arg;
      }
    }
  }

  UniversalFit fit;
  fit.p_th = best(0);
  fit.nu = std::exp(best(1));
  double margin = 0.02 * (p_max - p_min);
  if (fit.p_th <= p_min + margin || fit.p_th >= p_max - margin)
    throw std::runtime_error("universal fit: data do not bracket the crossing");
  if (fit.nu <= kNuFloor * 1.02 || fit.nu >= kNuCeiling * 0.98)
    throw std::runtime_error("universal fit: scaling exponent diverged (no distance dependence?)");
  double abc[3];
  double sse = collapse_sse(pts, fit.p_th, fit.nu, abc);
  fit.a = abc[0];
  fit.b = abc[1];
  fit.c = abc[2];
  fit.residual = std::sqrt(sse / pts.size());
  return fit;
}

double HeuristicFit::alpha_for(double n_r) const {
  for (const auto& [group, alpha] : alphas)
    if (std::abs(group - n_r) < 1e-12) return alpha;
  throw std::runtime_error("no fitted alpha for the requested n_r");
}

double HeuristicFit::distance_for(double n_r, double target_p_l) const {
  double alpha = alpha_for(n_r);
  if (!(target_p_l > 0)) throw std::runtime_error("target logical error rate must be positive");
  if (!(alpha > 0) || alpha >= 1)
    throw std::runtime_error("fitted alpha must lie in (0, 1) to extrapolate");
  return 2 * (std::log(target_p_l) - std::log(32 * c * n_r)) / std::log(alpha) - 1;
}

HeuristicFit fit_heuristic_scaling(const std::vector<RatePoint>& points) {
  // Collapse duplicates of (n_r, d) by averaging, then group by n_r.
  std::map<double, std::map<int, std::pair<double, int>>> grouped;
  for (const auto& pt : points) {
    auto& cell = grouped[pt.n_r][pt.d];
    cell.first += pt.p_l;
    cell.second += 1;
  }

  HeuristicFit fit;
  std::vector<std::pair<double, std::vector<std::pair<int, double>>>> usable;
  for (auto& [n_r, by_d] : grouped) {
    std::vector<std::pair<int, double>> curve;
    for (auto& [d, cell] : by_d) {
      double p_l = cell.first / cell.second;
      if (p_l > 0) curve.emplace_back(d, p_l);
    }
    bool decreasing = curve.size() >= 2;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
      if (curve[i + 1].second >= curve[i].second) decreasing = false;
    if (!decreasing) {
      fit.excluded_n_r.push_back(n_r);
      continue;
    }
    usable.emplace_back(n_r, std::move(curve));
  }
  if (usable.empty())
    throw std::runtime_error("heuristic fit: no n_r group with a monotone decrease in d");

  std::size_t rows = 0;
  for (const auto& [n_r, curve] : usable) rows += curve.size();
  const std::size_t cols = 1 + usable.size();  // log C, then log alpha per group
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd target(rows);
  std::size_t row = 0;
  for (std::size_t g = 0; g < usable.size(); ++g) {
    for (const auto& [d, p_l] : usable[g].second) {
      design(row, 0) = 1;
      design(row, 1 + g) = (d + 1) / 2.0;
      target(row) = std::log(p_l) - std::log(32 * usable[g].first);
      ++row;
    }
  }
  Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
  fit.c = std::exp(coef(0));
  for (std::size_t g = 0; g < usable.size(); ++g)
    fit.alphas.emplace_back(usable[g].first, std::exp(coef(1 + g)));
  fit.residual = std::sqrt((design * coef - target).squaredNorm() / rows);
  return fit;
}

std::vector<CostRow> spacetime_cost(const HeuristicFit& fit, double target_p_l) {
  std::vector<CostRow> rows;
  for (const auto& [n_r, alpha] : fit.alphas) {
    (void)alpha;
    CostRow r;
    r.n_r = n_r;
    r.d_star = fit.distance_for(n_r, target_p_l);
    r.cost_space_time = (n_r + 1) * r.d_star * r.d_star;
    r.cost_rounds_only = n_r * r.d_star * r.d_star;
    rows.push_back(r);
  }
  return rows;
}

double crossing_point(const std::vector<std::pair<double, double>>& lo_d,
                      const std::vector<std::pair<double, double>>& hi_d) {
  if (lo_d.size() != hi_d.size() || lo_d.size() < 2)
    throw std::runtime_error("crossing_point: curves must share a grid of >= 2 rates");
  for (std::size_t i = 0; i < lo_d.size(); ++i)
    if (std::abs(lo_d[i].first - hi_d[i].first) > 1e-12)
      throw std::runtime_error("crossing_point: curves must share the physical-rate grid");
  for (std::size_t i = 0; i + 1 < lo_d.size(); ++i) {
    double diff0 = hi_d[i].second - lo_d[i].second;
    double diff1 = hi_d[i + 1].second - lo_d[i + 1].second;
    if (diff0 <= 0 && diff1 > 0) {
      double t = (diff1 - diff0) == 0 ? 0 : (0 - diff0) / (diff1 - diff0);
      return lo_d[i].first + t * (lo_d[i + 1].first - lo_d[i].first);
    }
  }
  throw std::runtime_error("crossing_point: curves do not cross on the given grid");
}

}  // namespace corrdec
