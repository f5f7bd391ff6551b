#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "corrdec/decoders.hpp"
#include "corrdec/experiments.hpp"
#include "corrdec/hypergraph.hpp"
#include "corrdec/surface.hpp"
#include "corrdec/tableau.hpp"

namespace corrdec {

// [[15,7,3]] quantum Hamming code: the same 4x15 check matrix for X and Z
// stabilizers (self-dual), transversal logicals X_L = all-X, Z_L = all-Z.
struct HammingCode {
  static constexpr int num_qubits = 15;
  std::array<std::uint16_t, 4> rows;  // bit i set <=> qubit i in the check

  static HammingCode make();
};

// One Pauli term of a conjugated error, with its complex amplitude.
struct CczTerm {
  PauliString pauli;  // 3 qubits, one per code block
  std::complex<double> amplitude;
};

// Conjugates a 3-qubit Pauli (one physical qubit from each code block) through
// CCZ: Z components commute through, each X/Y component picks up a CZ on the
// other two qubits, expanded into its 4-term Pauli superposition. Terms are
// returned in a canonical order with combined amplitudes.
std::vector<CczTerm> ccz_propagate(const PauliString& input);

// Decoding hypergraph of a transversal CCZ between three Hamming codes under
// single-qubit depolarizing noise of strength p: 24 checks (X checks of blocks
// 0..2, then Z checks), 6 observables (X_L flips of blocks 0..2, then Z_L
// flips). One mechanism per conjugated output term at probability
// input_probability / n_terms; coinciding signatures sum.
DecodingHypergraph build_ccz_hypergraph(double p);

// Full model: the correlated hypergraph, the per-block restriction (only
// output terms supported on a single code block), a representative physical
// Pauli per mechanism for applying corrections, and the block assignment.
struct CczModel {
  HammingCode code;
  double p = 0;
  DecodingHypergraph correlated;
  DecodingHypergraph independent;
  std::vector<PauliString> correlated_reps;   // 45-qubit Paulis
  std::vector<PauliString> independent_reps;
  BlockAssignment blocks;

  static CczModel make(double p);
};

// Initial logical basis per block: 0 => |0_L>, 1 => |1_L>, 2 => |+_L>.
using CczState = std::array<int, 3>;
std::vector<CczState> ccz_initial_states();  // the five states averaged over

// Ideal CCZ output for the given input: the prepared 45-qubit tableau and the
// logical stabilizer generators (operator, sign exponent) it must satisfy.
struct CczReference {
  StabilizerTableau tableau;
  std::vector<std::pair<PauliString, bool>> logical_generators;
};
CczReference ccz_reference_state(const CczState& state);

// One Monte-Carlo shot: sample a depolarizing triple per qubit position, apply
// the conjugated Clifford error, measure all checks noiselessly, decode with
// both hypergraphs, apply representative corrections, and score the logical
// stabilizers.
struct CczShotOutcome {
  bool correlated_ok = false;
  bool independent_ok = false;
};

// Persistent decoder pair for one model; construct once per thread and reuse
// across shots (the preprocessing dominates single-shot decode time).
struct CczDecoders {
  MleDecoder correlated;
  MleDecoder independent;
  explicit CczDecoders(const CczModel& model)
      : correlated(model.correlated), independent(model.independent) {}
};

CczShotOutcome run_ccz_shot(const CczModel& model, const CczReference& reference,
                            CczDecoders& decoders, Rng& rng);

// Averages over the five initial states; returns (correlated, independent)
// results with pooled counts.
std::pair<ExperimentResult, ExperimentResult> run_ccz_experiment(double p,
                                                                 std::uint64_t shots_per_state,
                                                                 std::uint64_t seed,
                                                                 int workers = 1);

}  // namespace corrdec
