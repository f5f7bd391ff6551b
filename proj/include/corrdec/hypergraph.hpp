#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "corrdec/gf2.hpp"

namespace corrdec {

using Rng = std::mt19937_64;

// One independent error source: the checks and logical observables it flips,
// and the probability that it fires.
struct ErrorMechanism {
  double probability = 0;
  std::vector<std::uint32_t> flipped_checks;       // sorted, unique
  std::vector<std::uint32_t> flipped_observables;  // sorted, unique

  bool same_signature(const ErrorMechanism& o) const {
    return flipped_checks == o.flipped_checks && flipped_observables == o.flipped_observables;
  }
};

struct Syndrome {
  gf2::BitVec bits;  // bit i set <=> check i flipped
};

struct ErrorConfiguration {
  gf2::BitVec fired;  // bit j set <=> mechanism j fired
};

// Probability that an odd number of two independent events fires.
inline double xor_probability(double p, double q) { return p * (1 - q) + q * (1 - p); }

// Bipartite check/error view with growth weights, consumed by the union-find
// decoder and by belief propagation.
struct TannerGraph {
  struct Edge {
    std::uint32_t check;
    std::uint32_t error;
    double weight;
  };
  std::size_t num_checks = 0;
  std::size_t num_errors = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<std::uint32_t>> check_edges;  // per check: edge ids
  std::vector<std::vector<std::uint32_t>> error_edges;  // per error: edge ids
  std::vector<double> priors;                           // per error vertex
};

struct SampledShot {
  ErrorConfiguration configuration;
  Syndrome syndrome;
  gf2::BitVec observable_flips;
};

class DecodingHypergraph {
 public:
  DecodingHypergraph() = default;

  // Validates, drops mechanisms with empty signatures, and fuses duplicate
  // signatures with the odd-parity combination rule.
  static DecodingHypergraph from_mechanisms(std::size_t num_checks, std::size_t num_observables,
                                            std::vector<ErrorMechanism> mechanisms);

  std::size_t num_checks() const { return num_checks_; }
  std::size_t num_observables() const { return num_observables_; }
  std::size_t num_mechanisms() const { return mechanisms_.size(); }
  const std::vector<ErrorMechanism>& mechanisms() const { return mechanisms_; }

  Syndrome syndrome_of(const ErrorConfiguration& cfg) const;
  gf2::BitVec observable_flips(const ErrorConfiguration& cfg) const;
  double log_likelihood(const ErrorConfiguration& cfg) const;

  SampledShot sample(Rng& rng) const;

  // Edge weight |log((1-q)/q)| * r^eps; eps in {-1, 0}. Priors default to the
  // mechanism probabilities. Weights for q >= 0.5 clamp to a small floor.
  TannerGraph tanner_view(int eps, const std::vector<double>* priors = nullptr) const;

  // Per-check incidence (mechanism indices), built lazily on first use.
  const std::vector<std::vector<std::uint32_t>>& check_incidence() const;

 private:
  std::size_t num_checks_ = 0;
  std::size_t num_observables_ = 0;
  std::vector<ErrorMechanism> mechanisms_;
  mutable std::vector<std::vector<std::uint32_t>> incidence_;

  // Sampling acceleration: mechanism indices grouped by probability value.
  struct SampleGroup {
    double probability;
    std::vector<std::uint32_t> members;
  };
  std::vector<SampleGroup> sample_groups_;
  void build_sample_groups();
};

}  // namespace corrdec
