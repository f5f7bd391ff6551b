#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "corrdec/decoders.hpp"

namespace corrdec {

namespace {

constexpr double kProbFloor = 1e-12;

double clamp_prob(double p) { return std::clamp(p, kProbFloor, 1 - kProbFloor); }

double prior_llr(double p) {
  p = clamp_prob(p);
  return std::log((1 - p) / p);
}

}  // namespace

std::vector<double> bp_marginals(const TannerGraph& g, const Syndrome& s, int rounds,
                                 bool* converged) {
  if (rounds < 1) throw std::invalid_argument("bp rounds must be >= 1");
  if (s.bits.size() != g.num_checks) throw std::invalid_argument("syndrome width mismatch");

  const std::size_t ne = g.edges.size();
  std::vector<double> llr(g.num_errors);
  for (std::size_t j = 0; j < g.num_errors; ++j) llr[j] = prior_llr(g.priors[j]);

  std::vector<double> msg_ec(ne);  // error -> check
  std::vector<double> msg_ce(ne, 0);
  for (std::size_t e = 0; e < ne; ++e) msg_ec[e] = llr[g.edges[e].error];

  double last_delta = 0;
  for (int round = 0; round < rounds; ++round) {
    // check -> error: sign from the measured parity, magnitude from the
    // leave-one-out tanh product
    for (std::size_t c = 0; c < g.num_checks; ++c) {
      const auto& eids = g.check_edges[c];
      const std::size_t k = eids.size();
      std::vector<double> pre(k + 1, 1.0), suf(k + 1, 1.0);
      for (std::size_t i = 0; i < k; ++i) pre[i + 1] = pre[i] * std::tanh(msg_ec[eids[i]] / 2);
      for (std::size_t i = k; i-- > 0;) suf[i] = suf[i + 1] * std::tanh(msg_ec[eids[i]] / 2);
      double sign = s.bits.get(c) ? -1.0 : 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        double prod = std::clamp(pre[i] * suf[i + 1], -(1 - 1e-15), 1 - 1e-15);
        msg_ce[eids[i]] = sign * 2 * std::atanh(prod);
      }
    }
    // error -> check: prior plus the other incoming check messages
    last_delta = 0;
    for (std::size_t j = 0; j < g.num_errors; ++j) {
      const auto& eids = g.error_edges[j];
      double total = llr[j];
      for (auto e : eids) total += msg_ce[e];
      for (auto e : eids) {
        double next = total - msg_ce[e];
        last_delta = std::max(last_delta, std::abs(next - msg_ec[e]));
        msg_ec[e] = next;
      }
    }
  }
  if (converged) *converged = last_delta < 1e-6;

  std::vector<double> posterior(g.num_errors);
  for (std::size_t j = 0; j < g.num_errors; ++j) {
    double total = llr[j];
    for (auto e : g.error_edges[j]) total += msg_ce[e];
    posterior[j] = clamp_prob(1.0 / (1.0 + std::exp(total)));
  }
  return posterior;
}

DecodeOutcome decode_belief_huf(const DecodingHypergraph& h, const Syndrome& s, int eps,
                                int bp_rounds) {
  bool converged = false;
  auto posteriors = bp_marginals(h.tanner_view(0), s, bp_rounds, &converged);
  auto out = decode_huf(h, s, eps, &posteriors);
  out.bp_converged = converged;
  return out;
}

}  // namespace corrdec
