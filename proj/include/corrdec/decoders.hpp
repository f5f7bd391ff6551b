#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "corrdec/hypergraph.hpp"
#include "corrdec/surface.hpp"

namespace corrdec {

struct DecodeOutcome {
  ErrorConfiguration configuration;
  gf2::BitVec predicted_flips;  // observable flips implied by configuration
  // diagnostics
  bool bp_converged = true;         // belief-HUF
  std::size_t cluster_count = 0;    // HUF: final number of clusters touched
  std::size_t nodes_expanded = 0;   // MLE: branch-and-bound nodes
  bool feasible = true;             // independent: all blocks feasible
};

// Exact most-likely-error decoding: maximizes
//   sum_j [E_j log p_j + (1 - E_j) log(1 - p_j)]
// over configurations E reproducing the syndrome. Ties broken by the
// lexicographically smallest fired index set. Throws std::runtime_error if no
// configuration reproduces the syndrome.
DecodeOutcome decode_mle(const DecodingHypergraph& h, const Syndrome& s);

// Reusable form of decode_mle: the per-hypergraph preprocessing (flip costs,
// default firing set, pruning tables) is done once in the constructor, so
// repeated decodes against the same hypergraph skip it. Not thread-safe;
// use one instance per thread. The hypergraph must outlive the decoder.
class MleDecoder {
 public:
  explicit MleDecoder(const DecodingHypergraph& h);
  MleDecoder(MleDecoder&&) noexcept;
  MleDecoder& operator=(MleDecoder&&) noexcept;
  ~MleDecoder();

  DecodeOutcome decode(const Syndrome& s);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Satisfiability of a cluster of Tanner-graph vertices: is there a
// configuration of the cluster's internal error vertices (those with all
// neighbors inside the cluster) reproducing the syndrome on the cluster's
// checks? Returns the flag and, if satisfiable, a full-width configuration
// supported on the internal error vertices.
struct SatisfactionResult {
  bool satisfiable = false;
  gf2::BitVec local;  // width = num_errors
};
SatisfactionResult check_satisfaction(const TannerGraph& g, const Syndrome& s,
                                      const std::vector<std::uint32_t>& cluster_checks,
                                      const std::vector<std::uint32_t>& cluster_errors);

// Hypergraph union-find: grows clusters on the Tanner graph, always advancing
// the smallest (then least recently updated, then lowest root index)
// unsatisfiable cluster by the minimum remaining boundary weight, merging
// across filled edges, until every cluster is satisfiable. eps in {-1, 0}
// scales edge weights by r^eps. Optional priors replace the mechanism
// probabilities when weighting edges. Throws std::runtime_error if the
// syndrome is not achievable.
DecodeOutcome decode_huf(const DecodingHypergraph& h, const Syndrome& s, int eps,
                         const std::vector<double>* priors = nullptr);

// Flooding sum-product belief propagation for a fixed number of rounds;
// returns per-mechanism posterior probabilities in (0, 1), clamped to
// [1e-12, 1 - 1e-12]. If `converged` is given, it reports whether messages
// were stable in the final round.
std::vector<double> bp_marginals(const TannerGraph& g, const Syndrome& s, int rounds,
                                 bool* converged = nullptr);

// BP posteriors fed into decode_huf as edge-weight priors.
DecodeOutcome decode_belief_huf(const DecodingHypergraph& h, const Syndrome& s, int eps,
                                int bp_rounds = 5);

// Uncorrelated baseline: each block decodes its own projection of the
// hypergraph (checks and observables restricted to the block; mechanisms keep
// their full probability, coinciding projections merge) with decode_mle. An
// infeasible block leaves its prediction at zero and clears `feasible`.
DecodeOutcome decode_independent(const DecodingHypergraph& h, const BlockAssignment& blocks,
                                 const Syndrome& s);

}  // namespace corrdec
