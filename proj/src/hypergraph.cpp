#include "corrdec/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace corrdec {

namespace {

constexpr double kWeightFloor = 1e-6;

void validate_indices(const std::vector<std::uint32_t>& v, std::size_t bound, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= bound) throw std::invalid_argument(std::string(what) + " index out of range");
    if (i > 0 && v[i] <= v[i - 1])
      throw std::invalid_argument(std::string(what) + " indices must be sorted and unique");
  }
}

}  // namespace

DecodingHypergraph DecodingHypergraph::from_mechanisms(std::size_t num_checks,
                                                       std::size_t num_observables,
                                                       std::vector<ErrorMechanism> mechanisms) {
  DecodingHypergraph h;
  h.num_checks_ = num_checks;
  h.num_observables_ = num_observables;
  std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>, std::size_t> seen;
  for (auto& m : mechanisms) {
    if (!(m.probability > 0.0 && m.probability < 1.0))
      throw std::invalid_argument("mechanism probability must lie in (0,1)");
    validate_indices(m.flipped_checks, num_checks, "check");
    validate_indices(m.flipped_observables, num_observables, "observable");
    if (m.flipped_checks.empty() && m.flipped_observables.empty()) continue;  // undetectable
    auto key = std::make_pair(m.flipped_checks, m.flipped_observables);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), h.mechanisms_.size());
      h.mechanisms_.push_back(std::move(m));
    } else {
      double& p = h.mechanisms_[it->second].probability;
      p = xor_probability(p, m.probability);
      if (p <= 0.0) {
        // combined firing probability vanished; mechanism is unobservable
        h.mechanisms_[it->second].probability = 0.0;
      } else if (p >= 1.0) {
        throw std::invalid_argument("merged mechanism probability reached 1");
      }
    }
  }
  std::erase_if(h.mechanisms_, [](const ErrorMechanism& m) { return m.probability <= 0.0; });
  h.build_sample_groups();
  return h;
}

void DecodingHypergraph::build_sample_groups() {
  std::map<double, std::vector<std::uint32_t>> by_p;
  for (std::uint32_t j = 0; j < mechanisms_.size(); ++j)
    by_p[mechanisms_[j].probability].push_back(j);
  sample_groups_.clear();
  for (auto& [p, members] : by_p) sample_groups_.push_back({p, std::move(members)});
}

Syndrome DecodingHypergraph::syndrome_of(const ErrorConfiguration& cfg) const {
  if (cfg.fired.size() != mechanisms_.size())
    throw std::invalid_argument("configuration length mismatch");
  Syndrome s{gf2::BitVec(num_checks_)};
  for (std::size_t j = 0; j < mechanisms_.size(); ++j)
    if (cfg.fired.get(j))
      for (auto c : mechanisms_[j].flipped_checks) s.bits.flip(c);
  return s;
}

gf2::BitVec DecodingHypergraph::observable_flips(const ErrorConfiguration& cfg) const {
  if (cfg.fired.size() != mechanisms_.size())
    throw std::invalid_argument("configuration length mismatch");
  gf2::BitVec o(num_observables_);
  for (std::size_t j = 0; j < mechanisms_.size(); ++j)
    if (cfg.fired.get(j))
      for (auto k : mechanisms_[j].flipped_observables) o.flip(k);
  return o;
}

double DecodingHypergraph::log_likelihood(const ErrorConfiguration& cfg) const {
  if (cfg.fired.size() != mechanisms_.size())
    throw std::invalid_argument("configuration length mismatch");
  double ll = 0;
  for (std::size_t j = 0; j < mechanisms_.size(); ++j) {
    double p = mechanisms_[j].probability;
    ll += cfg.fired.get(j) ? std::log(p) : std::log1p(-p);
  }
  return ll;
}

SampledShot DecodingHypergraph::sample(Rng& rng) const {
  SampledShot shot;
  shot.configuration.fired = gf2::BitVec(mechanisms_.size());
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const auto& g : sample_groups_) {
    // Geometric skipping through the members of one probability class.
    double log1mp = std::log1p(-g.probability);
    std::size_t i = 0;
    while (i < g.members.size()) {
      double u = uni(rng);
      std::size_t skip;
      if (u <= 0.0) {
        skip = 0;
      } else {
        double s = std::floor(std::log(u) / log1mp);
        if (s >= static_cast<double>(g.members.size() - i)) break;
        skip = static_cast<std::size_t>(s);
      }
      i += skip;
      if (i >= g.members.size()) break;
      shot.configuration.fired.set(g.members[i], true);
      ++i;
    }
  }
  shot.syndrome = syndrome_of(shot.configuration);
  shot.observable_flips = observable_flips(shot.configuration);
  return shot;
}

TannerGraph DecodingHypergraph::tanner_view(int eps, const std::vector<double>* priors) const {
  if (eps != 0 && eps != -1) throw std::invalid_argument("eps must be 0 or -1");
  if (priors) {
    if (priors->size() != mechanisms_.size()) throw std::invalid_argument("priors length mismatch");
    for (double q : *priors)
      if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("prior outside (0,1)");
  }
  TannerGraph g;
  g.num_checks = num_checks_;
  g.num_errors = mechanisms_.size();
  g.check_edges.resize(num_checks_);
  g.error_edges.resize(mechanisms_.size());
  g.priors.resize(mechanisms_.size());
  for (std::uint32_t j = 0; j < mechanisms_.size(); ++j) {
    double q = priors ? (*priors)[j] : mechanisms_[j].probability;
    g.priors[j] = q;
    double r = static_cast<double>(mechanisms_[j].flipped_checks.size());
    double w;
    if (q >= 0.5) {
      w = kWeightFloor;  // near-certain error: cross it essentially immediately
    } else {
      w = std::log((1 - q) / q);
      if (eps == -1) w /= r;
    }
    for (auto c : mechanisms_[j].flipped_checks) {
      std::uint32_t id = static_cast<std::uint32_t>(g.edges.size());
      g.edges.push_back({c, j, w});
      g.check_edges[c].push_back(id);
      g.error_edges[j].push_back(id);
    }
  }
  return g;
}

const std::vector<std::vector<std::uint32_t>>& DecodingHypergraph::check_incidence() const {
  if (incidence_.empty() && num_checks_ > 0) {
    incidence_.resize(num_checks_);
    for (std::uint32_t j = 0; j < mechanisms_.size(); ++j)
      for (auto c : mechanisms_[j].flipped_checks) incidence_[c].push_back(j);
  }
  return incidence_;
}

}  // namespace corrdec
