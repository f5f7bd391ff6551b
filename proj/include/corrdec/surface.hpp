#pragma once

#include <cstdint>
#include <vector>

#include "corrdec/circuit.hpp"

namespace corrdec {

// Partition of a hypergraph's checks and observables into logical blocks, used
// by the independent per-block decoder baseline.
struct BlockAssignment {
  std::size_t num_blocks = 0;
  std::vector<std::uint32_t> check_block;
  std::vector<std::uint32_t> observable_block;
};

namespace surface {

// Rotated surface code on a d x d data grid; data qubit (r, c) has index
// r*d + c. Plaquette (r, c) touches data {(r-1,c-1),(r-1,c),(r,c-1),(r,c)}
// clipped to the grid; X plaquettes sit where r+c is even. Top/bottom
// boundaries keep X plaquettes, left/right keep Z, corners are dropped.
struct Layout {
  struct Plaquette {
    bool is_x;
    int r, c;
    std::vector<std::uint32_t> data;  // local data indices
  };
  int d = 0;
  std::vector<Plaquette> plaquettes;  // sorted by (r, c)

  static Layout make(int d);

  std::size_t num_data() const { return static_cast<std::size_t>(d) * d; }
  std::vector<std::uint32_t> logical_x() const;  // left column (X-type)
  std::vector<std::uint32_t> logical_z() const;  // top row (Z-type)

  // Plaquette operator as a Pauli over a larger register at a qubit offset.
  PauliString plaquette_operator(std::size_t i, std::size_t total_qubits,
                                 std::uint32_t offset) const;
  PauliString logical_operator(bool x_type, std::size_t total_qubits, std::uint32_t offset) const;

  // Data-qubit relabeling (r, c) -> (c, d-1-r), the 90-degree rotation that
  // restores the standard orientation after a transversal Hadamard.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> rotation_pairs(std::uint32_t offset) const;

  // Data neighbor of plaquette i at syndrome-extraction step k (0..3), or -1
  // if the plaquette skips that step. Z ancillas visit NW, NE, SW, SE and
  // take CNOTs data->ancilla; X ancillas visit NW, SW, NE, SE, ancilla->data.
  int schedule_neighbor(std::size_t i, int step) const;
};

enum class Basis { X, Z };

struct BuiltCircuit {
  CliffordCircuit circuit;
  BlockAssignment blocks;
};

// Two codes prepared noiselessly in |+L> (control) and |0L> (target), X and Z
// flips p*f_b before and p*(1-f_b) after the transversal CNOT, noiseless
// transversal readout in the given basis. Checks are the readout-basis
// plaquettes of both codes; observables are the per-code logical operators
// (their XOR is the Bell-pair parity scored by the harness).
BuiltCircuit build_bell_perfect(int d, double p, double f_b, Basis basis);

// Same logical schedule with physical preparation, d noisy ancilla-based
// syndrome rounds before and after the CNOT, circuit-level noise of strength
// p throughout, and a noisy final transversal readout.
BuiltCircuit build_bell_noisy(int d, double p, Basis basis);

// Four codes prepared noiselessly in |+L>, `layers` layers of random
// transversal single-qubit gates ({H, X, Y, Z} per code) plus a random
// pairing into two transversal CNOTs, n_r syndrome rounds per layer
// (fractional n_r: one round every 1/n_r layers), circuit-level noise p;
// preparation, code rotation, the final round, and the logical readout are
// noiseless. Observables are the four forward-evolved initial logical X
// operators, read out as Pauli-product measurements.
BuiltCircuit build_deep_clifford(int d, double n_r, double p, int layers, std::uint64_t seed);

}  // namespace surface
}  // namespace corrdec
