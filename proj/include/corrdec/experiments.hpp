#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrdec/decoders.hpp"
#include "corrdec/hypergraph.hpp"
#include "corrdec/surface.hpp"

namespace corrdec {

enum class ExperimentKind { BellPerfect, BellNoisy, Deep, Ccz };
enum class DecoderKind { Mle, Huf, BeliefHuf, Independent };

const char* experiment_name(ExperimentKind kind);
const char* decoder_name(DecoderKind kind);
DecoderKind decoder_from_name(const std::string& name);  // throws on unknown

// Per-shot sub-seed derivation: identical shot streams for any worker count.
std::uint64_t derive_shot_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

struct ExperimentParams {
  ExperimentKind kind = ExperimentKind::BellPerfect;
  DecoderKind decoder = DecoderKind::Mle;
  int d = 3;
  double p = 0.01;
  double n_r = 1;    // deep circuit: syndrome rounds per gate layer
  double f_b = 1;    // bell-perfect: fraction of noise before the entangler
  int layers = 32;   // deep circuit: gate layers
  int eps = -1;      // union-find hyperedge-order exponent
  int bp_rounds = 5;
  std::uint64_t seed = 0;
  std::uint64_t shots = 1000;          // per circuit variant
  std::uint64_t stop_failures = 6000;  // stop early once this many failures accrue
  int workers = 1;
};

struct ShotRecord {
  std::uint64_t shot = 0;
  Syndrome syndrome;
  gf2::BitVec actual_flips;
  gf2::BitVec predicted_flips;
  bool success = false;
};

struct ExperimentResult {
  ExperimentParams params;
  std::uint64_t shots = 0;  // shots actually evaluated, pooled over basis variants
  std::uint64_t failures = 0;
  double p_hat = 0;
  double ci_lo = 0;
  double ci_hi = 1;

  static std::string csv_header();
  std::string csv_row() const;
  std::string to_json() const;
};

// Dispatches the configured decoder on one syndrome. `mle` supplies the
// preprocessed exact decoder and must be non-null when the decoder is Mle.
DecodeOutcome decode_with(const ExperimentParams& params, const DecodingHypergraph& h,
                          const BlockAssignment& blocks, const Syndrome& s, MleDecoder* mle);

// Builds the experiment circuit(s), extracts the hypergraph once, samples
// `shots` shots with per-shot sub-seeds (identical results for any worker
// count), decodes, and aggregates. Bell experiments run both the X- and
// Z-basis readout variants and pool their counts; a shot fails when the
// scored observable parity (Bell: XOR across codes; deep: every logical)
// is mispredicted. Optionally collects per-shot records.
ExperimentResult run_experiment(const ExperimentParams& params,
                                std::vector<ShotRecord>* records = nullptr);

}  // namespace corrdec
