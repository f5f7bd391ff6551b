#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "corrdec/experiments.hpp"
#include "corrdec/fits.hpp"
#include "corrdec/stats.hpp"

using namespace corrdec;

TEST_CASE("clopper_pearson closed forms and validation") {
  auto [lo0, hi0] = clopper_pearson(0, 100);
  CHECK(lo0 == 0.0);
  // k = 0: hi solves (1 - hi)^n = alpha/2.
  CHECK(hi0 == doctest::Approx(1 - std::pow(0.025, 1.0 / 100)).epsilon(1e-9));
  CHECK(hi0 == doctest::Approx(0.0362).epsilon(2e-3));

  auto [lon, hin] = clopper_pearson(50, 50);
  CHECK(hin == 1.0);
  CHECK(lon == doctest::Approx(std::pow(0.025, 1.0 / 50)).epsilon(1e-9));

  auto [lo, hi] = clopper_pearson(7, 80);
  CHECK(lo > 0);
  CHECK(hi < 1);
  CHECK(lo <= 7.0 / 80);
  CHECK(hi >= 7.0 / 80);

  CHECK_THROWS_AS(clopper_pearson(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(clopper_pearson(5, 4), std::invalid_argument);
  CHECK_THROWS_AS(clopper_pearson(1, 4, 0.0), std::invalid_argument);
}

TEST_CASE("clopper_pearson coverage at p=0.1, n=200") {
  std::mt19937_64 rng(12345);
  std::binomial_distribution<int> binom(200, 0.1);
  int covered = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    int k = binom(rng);
    auto [lo, hi] = clopper_pearson(k, 200);
    if (lo <= 0.1 && 0.1 <= hi) ++covered;
  }
  CHECK(covered >= trials * 95 / 100);
}

TEST_CASE("per-round logical error formula") {
  CHECK(logical_error_per_round(0, 1, 32) == 0.0);
  CHECK(logical_error_per_round(kLogicalErrorMax, 1, 32) ==
        doctest::Approx(kLogicalErrorMax).epsilon(1e-15));
  // Independent high-precision form via log1p/expm1.
  double expected = 15.0 / 16 * -std::expm1(std::log1p(-0.5 / (15.0 / 16)) / 32);
  CHECK(logical_error_per_round(0.5, 1, 32) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(logical_error_per_round(0.5, 1, 32) == doctest::Approx(0.02269).epsilon(1e-3));

  // Strictly increasing and invertible to 1e-12.
  double previous = -1;
  for (double p_l : {0.0, 1e-6, 1e-3, 0.05, 0.3, 0.7, 0.9, 15.0 / 16}) {
    double rate = logical_error_per_round(p_l, 0.5, 32);
    CHECK(rate > previous);
    previous = rate;
    CHECK(logical_error_from_per_round(rate, 0.5, 32) == doctest::Approx(p_l).epsilon(1e-12));
  }

  CHECK_THROWS_AS(logical_error_per_round(0.99, 1, 32), std::invalid_argument);
  CHECK_THROWS_AS(logical_error_per_round(0.1, 0, 32), std::invalid_argument);
  CHECK_THROWS_AS(logical_error_per_round(0.1, 1, 0), std::invalid_argument);
}

namespace {

std::vector<RatePoint> universal_synthetic(double p_th, double nu, double noise_scale,
                                           std::uint64_t noise_seed) {
  double a = std::log(0.08), b = 14.0, c = 40.0;
  std::mt19937_64 rng(noise_seed);
  std::uniform_real_distribution<double> jitter(-noise_scale, noise_scale);
  std::vector<RatePoint> pts;
  for (int d : {3, 5, 7, 9}) {
    for (double p : {0.030, 0.038, 0.046, 0.054, 0.062, 0.070}) {
      double x = (p - p_th) * std::pow(d, 1.0 / nu);
      double p_l = std::exp(a + b * x + c * x * x) * (1 + jitter(rng));
      pts.push_back({d, p, 1.0, p_l});
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("universal scaling fit recovers a planted threshold") {
  auto pts = universal_synthetic(0.05, 1.4, 0.01, 99);
  UniversalFit fit = fit_universal_scaling(pts);
  CHECK(std::abs(fit.p_th - 0.05) / 0.05 < 0.05);
  CHECK(fit.nu > 0.2);
  CHECK(fit.residual < 0.1);

  // Noise-free data is recovered nearly exactly.
  auto clean = universal_synthetic(0.05, 1.4, 0.0, 0);
  UniversalFit exact = fit_universal_scaling(clean);
  CHECK(exact.p_th == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(exact.nu == doctest::Approx(1.4).epsilon(0.02));
  CHECK(exact.residual < 1e-5);
}

TEST_CASE("universal scaling fit rejects degenerate data") {
  // No distance dependence: the exponent diverges.
  std::vector<RatePoint> flat;
  for (int d : {3, 5, 7})
    for (double p : {0.02, 0.04, 0.06, 0.08}) flat.push_back({d, p, 1.0, 0.1 * p});
  CHECK_THROWS_AS(fit_universal_scaling(flat), std::runtime_error);

  // The planted threshold sits below every sampled rate: no crossing inside
  // the sampled range.
  auto above = universal_synthetic(0.005, 1.4, 0.0, 0);
  CHECK_THROWS_AS(fit_universal_scaling(above), std::runtime_error);

  std::vector<RatePoint> few = {{3, 0.02, 1, 0.1}, {5, 0.02, 1, 0.05}};
  CHECK_THROWS_AS(fit_universal_scaling(few), std::runtime_error);
}

TEST_CASE("heuristic scaling fit recovers planted constants") {
  const double c = 1.13;
  std::vector<std::pair<double, double>> planted = {{1.0, 0.049}, {2.0, 0.10}};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  std::vector<RatePoint> pts;
  for (auto [n_r, alpha] : planted)
    for (int d : {3, 5, 7, 9}) {
      double p_l = 32 * c * n_r * std::pow(alpha, (d + 1) / 2.0) * (1 + jitter(rng));
      pts.push_back({d, 0.001, n_r, p_l});
    }
  // A group with only one distance and an above-threshold group: both excluded.
  pts.push_back({3, 0.001, 3.0, 0.01});
  for (int d : {3, 5, 7}) pts.push_back({d, 0.001, 4.0, 0.001 * d});

  HeuristicFit fit = fit_heuristic_scaling(pts);
  CHECK(std::abs(fit.c - c) / c < 0.10);
  CHECK(std::abs(fit.alpha_for(1.0) - 0.049) / 0.049 < 0.10);
  CHECK(std::abs(fit.alpha_for(2.0) - 0.10) / 0.10 < 0.10);
  REQUIRE(fit.excluded_n_r.size() == 2);
  CHECK(fit.excluded_n_r[0] == 3.0);
  CHECK(fit.excluded_n_r[1] == 4.0);

  // Extrapolated distance: smallest (fractional) d solving the law.
  double target = 1e-6;
  double d_star = fit.distance_for(1.0, target);
  double back = 32 * fit.c * 1.0 * std::pow(fit.alpha_for(1.0), (d_star + 1) / 2.0);
  CHECK(back == doctest::Approx(target).epsilon(1e-9));

  std::vector<RatePoint> hopeless = {{3, 0.001, 1.0, 0.01}, {5, 0.001, 1.0, 0.02}};
  CHECK_THROWS_AS(fit_heuristic_scaling(hopeless), std::runtime_error);
}

TEST_CASE("space-time cost table") {
  HeuristicFit fit;
  fit.c = 1.0;
  fit.alphas = {{0.5, 0.05}, {1.0, 0.05}, {2.0, 0.05}};
  auto rows = spacetime_cost(fit, 1e-6);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(row.cost_space_time == doctest::Approx((row.n_r + 1) * row.d_star * row.d_star));
    CHECK(row.cost_rounds_only == doctest::Approx(row.n_r * row.d_star * row.d_star));
  }
  // Alpha constant in n_r: the space-time cost favors the smallest n_r.
  CHECK(rows[0].cost_space_time < rows[1].cost_space_time);
  CHECK(rows[1].cost_space_time < rows[2].cost_space_time);

  // Halving alpha at fixed n_r shrinks the required distance.
  HeuristicFit sharper = fit;
  sharper.alphas = {{1.0, 0.025}};
  CHECK(sharper.distance_for(1.0, 1e-6) < fit.distance_for(1.0, 1e-6));

  // Self-consistency: the target produced by the law at distance d maps back to d.
  double p_l_at_7 = 32 * fit.c * 1.0 * std::pow(0.05, (7 + 1) / 2.0);
  CHECK(fit.distance_for(1.0, p_l_at_7) == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("crossing point interpolation") {
  std::vector<std::pair<double, double>> lo = {{0.01, 0.10}, {0.02, 0.20}, {0.03, 0.30}};
  std::vector<std::pair<double, double>> hi = {{0.01, 0.05}, {0.02, 0.20}, {0.03, 0.50}};
  CHECK(crossing_point(lo, hi) == doctest::Approx(0.02).epsilon(1e-12));

  std::vector<std::pair<double, double>> hi2 = {{0.01, 0.04}, {0.02, 0.16}, {0.03, 0.44}};
  double x = crossing_point(lo, hi2);
  CHECK(x > 0.02);
  CHECK(x < 0.03);

  std::vector<std::pair<double, double>> never = {{0.01, 0.01}, {0.02, 0.02}, {0.03, 0.03}};
  CHECK_THROWS_AS(crossing_point(lo, never), std::runtime_error);
  std::vector<std::pair<double, double>> offgrid = {{0.015, 0.05}, {0.02, 0.2}, {0.03, 0.5}};
  CHECK_THROWS_AS(crossing_point(lo, offgrid), std::runtime_error);
}

TEST_CASE("run_experiment determinism and worker independence") {
  ExperimentParams params;
  params.kind = ExperimentKind::BellPerfect;
  params.decoder = DecoderKind::Mle;
  params.d = 3;
  params.p = 0.05;
  params.f_b = 1.0;
  params.seed = 11;
  params.shots = 400;
  auto first = run_experiment(params);
  auto second = run_experiment(params);
  CHECK(first.shots == second.shots);
  CHECK(first.failures == second.failures);
  params.workers = 4;
  auto parallel = run_experiment(params);
  CHECK(parallel.shots == first.shots);
  CHECK(parallel.failures == first.failures);
  CHECK(first.shots == 800);  // both basis variants pooled
  CHECK(first.p_hat == doctest::Approx(double(first.failures) / first.shots));
  CHECK(first.ci_lo <= first.p_hat);
  CHECK(first.ci_hi >= first.p_hat);
}

TEST_CASE("run_experiment at p=0 sees no failures") {
  ExperimentParams params;
  params.kind = ExperimentKind::BellPerfect;
  params.d = 3;
  params.p = 0.0;
  params.shots = 100;
  auto result = run_experiment(params);
  CHECK(result.failures == 0);
  CHECK(result.ci_lo == 0.0);
}

TEST_CASE("stop-early rule truncates in shot order") {
  ExperimentParams params;
  params.kind = ExperimentKind::BellPerfect;
  params.d = 3;
  params.p = 0.3;  // far above threshold: failures are frequent
  params.shots = 5000;
  params.seed = 3;
  params.stop_failures = 25;
  auto result = run_experiment(params);
  CHECK(result.shots < 2 * params.shots);
  CHECK(result.failures >= 2 * params.stop_failures - 1);
  CHECK(result.failures <= 2 * params.stop_failures);
  params.workers = 3;
  auto parallel = run_experiment(params);
  CHECK(parallel.shots == result.shots);
  CHECK(parallel.failures == result.failures);
}

TEST_CASE("bell-perfect distance ordering below threshold") {
  ExperimentParams params;
  params.kind = ExperimentKind::BellPerfect;
  params.decoder = DecoderKind::Mle;
  params.p = 0.02;
  params.f_b = 1.0;
  params.seed = 21;
  params.shots = 5000;
  params.workers = 4;
  params.d = 3;
  auto d3 = run_experiment(params);
  params.d = 5;
  auto d5 = run_experiment(params);
  double sigma = std::sqrt(double(d3.failures) + d5.failures + 1);
  CHECK(double(d5.failures) + 2 * sigma < double(d3.failures));
}

TEST_CASE("f_b = 0 makes correlated and independent decoding coincide") {
  ExperimentParams params;
  params.kind = ExperimentKind::BellPerfect;
  params.d = 3;
  params.p = 0.03;
  params.f_b = 0.0;
  params.seed = 17;
  params.shots = 1000;
  std::vector<ShotRecord> mle_records, ind_records;
  params.decoder = DecoderKind::Mle;
  auto mle = run_experiment(params, &mle_records);
  params.decoder = DecoderKind::Independent;
  auto ind = run_experiment(params, &ind_records);
  CHECK(mle.failures == ind.failures);
  REQUIRE(mle_records.size() == ind_records.size());
  for (std::size_t i = 0; i < mle_records.size(); ++i)
    CHECK(mle_records[i].success == ind_records[i].success);
}

TEST_CASE("deep circuit experiment runs and is deterministic") {
  ExperimentParams params;
  params.kind = ExperimentKind::Deep;
  params.decoder = DecoderKind::BeliefHuf;
  params.d = 3;
  params.n_r = 1;
  params.layers = 4;
  params.p = 0.002;
  params.seed = 9;
  params.shots = 200;
  auto first = run_experiment(params);
  auto second = run_experiment(params);
  CHECK(first.shots == 200);
  CHECK(first.failures == second.failures);
}

TEST_CASE("CSV and JSON emission") {
  ExperimentParams params;
  params.kind = ExperimentKind::BellPerfect;
  params.d = 3;
  params.p = 0.01;
  params.shots = 50;
  auto result = run_experiment(params);
  std::string header = ExperimentResult::csv_header();
  std::string row = result.csv_row();
  auto count_fields = [](const std::string& s) {
    return 1 + std::count(s.begin(), s.end(), ',');
  };
  CHECK(count_fields(header) == 12);
  CHECK(count_fields(row) == 12);
  CHECK(row.substr(0, row.find(',')) == "bell-perfect");
  CHECK(result.to_json().find("\"p_hat\"") != std::string::npos);

  CHECK(decoder_from_name("belief-huf") == DecoderKind::BeliefHuf);
  CHECK_THROWS_AS(decoder_from_name("mwpm"), std::invalid_argument);
}
