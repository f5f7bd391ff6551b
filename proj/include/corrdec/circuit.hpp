#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrdec/hypergraph.hpp"
#include "corrdec/tableau.hpp"

namespace corrdec {

enum class Op : std::uint8_t {
  RX,           // reset to |+>
  RZ,           // reset to |0>
  H,
  X,
  Y,
  Z,
  S,
  CNOT,
  CZ,
  MX,           // one record per listed qubit
  MZ,
  MPP,          // measure a Pauli product, one record
  Permute,      // noiseless qubit relabeling
  Tick,         // moment boundary for idle-noise accounting
  XError,
  ZError,
  Depolarize1,
  Depolarize2,  // qubit list holds consecutive pairs
  Prep,         // project onto signed stabilizer generators (resets support)
};

struct Instruction {
  Op op{};
  std::vector<std::uint32_t> qubits;
  double probability = 0;                                      // noise channels
  PauliString pauli;                                           // MPP target
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // Permute
  std::vector<PauliString> generators;                         // Prep
  std::vector<bool> signs;                                     // Prep sign exponents
};

struct CliffordCircuit {
  std::size_t num_qubits = 0;
  std::vector<Instruction> instructions;
  std::vector<std::vector<std::uint32_t>> detectors;    // measurement-record sets
  std::vector<std::vector<std::uint32_t>> observables;  // measurement-record sets

  CliffordCircuit() = default;
  explicit CliffordCircuit(std::size_t nq) : num_qubits(nq) {}

  // Builder helpers; measurement helpers return the first new record index.
  void gate(Op op, std::vector<std::uint32_t> qs);
  void gate2(Op op, std::uint32_t a, std::uint32_t b) { gate(op, {a, b}); }
  void noise(Op op, std::vector<std::uint32_t> qs, double p);
  std::uint32_t measure(Op op, std::vector<std::uint32_t> qs);
  std::uint32_t measure_product(PauliString p);
  void permute(std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs);
  void prep(std::vector<PauliString> generators, std::vector<bool> signs);
  void tick() { instructions.push_back({Op::Tick, {}, 0, {}, {}, {}, {}}); }

  std::size_t num_measurements() const;

  std::string to_text() const;
  static CliffordCircuit from_text(const std::string& text);
};

// Reference parities of detectors/observables in the noiseless circuit
// (true = odd / -1). Throws if any detector parity depends on random
// measurement outcomes, naming the offending detector. Observables may be
// individually random (e.g. one half of an entangled logical pair); those are
// flagged instead and their reference is reported as false.
struct CircuitAnalysis {
  std::vector<bool> detector_reference;
  std::vector<bool> observable_reference;
  std::vector<bool> observable_deterministic;
};
CircuitAnalysis analyze(const CliffordCircuit& c);

// Measurement-record sign forms of the noiseless circuit, with every random
// outcome a fresh symbolic variable. Used by builders to derive detector sets.
std::vector<SignBits> symbolic_records(const CliffordCircuit& c);

// Detector/observable index sets flipped by a Pauli error inserted at an
// instruction boundary (before instructions[location]) and propagated forward
// through the remaining instructions as a Pauli frame.
struct FlipSets {
  std::vector<std::uint32_t> detectors;
  std::vector<std::uint32_t> observables;
};
FlipSets frame_flips(const CliffordCircuit& c, std::size_t location, const PauliString& error);

// One nontrivial Pauli term of a noise channel, with its signature obtained by
// conjugation through the rest of the circuit. Terms are listed per channel in
// canonical order: X_ERROR -> X; Z_ERROR -> Z; DEPOLARIZE1 -> X, Y, Z;
// DEPOLARIZE2 -> the 15 pairs (I,X), (I,Y), (I,Z), (X,I), (X,X), ... row major
// over {I,X,Y,Z} x {I,X,Y,Z} minus (I,I).
struct ChannelTerm {
  std::uint32_t instruction;
  PauliString error;  // full register width
  ErrorMechanism mechanism;
};
std::vector<ChannelTerm> enumerate_error_terms(const CliffordCircuit& c);

// Builds the decoding hypergraph: verifies detector determinism, enumerates
// all channel terms, and merges duplicate signatures.
DecodingHypergraph extract_hypergraph(const CliffordCircuit& c);

}  // namespace corrdec
