#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "corrdec/gf2.hpp"
#include "corrdec/hypergraph.hpp"

namespace corrdec {

// Unsigned n-qubit Pauli operator in X/Z binary representation.
struct PauliString {
  std::size_t n = 0;
  gf2::BitVec x, z;

  PauliString() = default;
  explicit PauliString(std::size_t nq) : n(nq), x(nq), z(nq) {}

  // From text like "+XIZY" or "XZ"; length fixes n.
  static PauliString from_text(const std::string& text);

  void set_pauli(std::size_t q, char pauli);  // 'I','X','Y','Z'
  char pauli_at(std::size_t q) const;
  bool identity() const { return !x.any() && !z.any(); }
  bool commutes_with(const PauliString& other) const;
  std::string to_text() const;

  bool operator==(const PauliString& o) const { return x == o.x && z == o.z; }
};

// Sign exponent as an affine form over F2: constant bit XOR a combination of
// symbolic random-outcome variables. Concrete states never allocate variables.
struct SignBits {
  bool constant = false;
  std::vector<std::uint64_t> sym;

  bool is_concrete() const {
    for (auto w : sym)
      if (w) return false;
    return true;
  }
  void set_var(std::size_t v) {
    if (sym.size() <= v / 64) sym.resize(v / 64 + 1, 0);
    sym[v / 64] ^= std::uint64_t(1) << (v % 64);
  }
  void xor_with(const SignBits& o) {
    constant ^= o.constant;
    if (o.sym.size() > sym.size()) sym.resize(o.sym.size(), 0);
    for (std::size_t i = 0; i < o.sym.size(); ++i) sym[i] ^= o.sym[i];
  }
  bool operator==(const SignBits& o) const;
};

// Stabilizer tableau with destabilizer bookkeeping. When measured with
// OutcomeMode::Fresh, random measurement results become symbolic variables so
// that downstream parities can be checked for determinism.
class StabilizerTableau {
 public:
  enum class OutcomeMode { Random, Fresh };

  explicit StabilizerTableau(std::size_t num_qubits);  // |0...0>

  std::size_t num_qubits() const { return n_; }

  void h(std::size_t q);
  void s(std::size_t q);
  void x(std::size_t q);
  void y(std::size_t q);
  void z(std::size_t q);
  void cnot(std::size_t control, std::size_t target);
  void cz(std::size_t a, std::size_t b);
  // Relabels qubits: pairs (from, to); new qubit `to` carries old qubit `from`.
  void permute(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs);

  // Applies the Pauli p conditioned on an affine bit.
  void apply_pauli(const PauliString& p, const SignBits& scale);
  void apply_pauli(const PauliString& p) { apply_pauli(p, SignBits{true, {}}); }

  // Measures the Pauli observable p. The returned sign exponent is 0 for +1
  // and 1 for -1 outcomes; random outcomes draw from rng (Random) or become a
  // fresh symbolic variable (Fresh).
  SignBits measure_pauli(const PauliString& p, OutcomeMode mode, Rng* rng);

  SignBits measure_z(std::size_t q, OutcomeMode mode, Rng* rng);
  SignBits measure_x(std::size_t q, OutcomeMode mode, Rng* rng);

  void reset_z(std::size_t q, OutcomeMode mode, Rng* rng);
  void reset_x(std::size_t q, OutcomeMode mode, Rng* rng);

  // Projects the state onto the given stabilizer generators with the given
  // sign exponents (true = -1 eigenvalue), resolving conflicts by applying a
  // correction Pauli. Generators must pairwise commute and be independent.
  void prepare_stabilizers(const std::vector<PauliString>& generators,
                           const std::vector<bool>& sign_exponents);

  // +1 / -1 if p (as given) is in +/- the stabilizer group, 0 if some
  // stabilizer anticommutes with p. Requires a concrete-sign tableau row set.
  int expectation_pauli(const PauliString& p) const;

  // Stabilizer row access (i in [0, n)), mainly for tests.
  PauliString stabilizer(std::size_t i) const;
  const SignBits& stabilizer_sign(std::size_t i) const { return rows_[n_ + i].sign; }

  bool operator==(const StabilizerTableau& o) const;

 private:
  struct Row {
    gf2::BitVec x, z;
    SignBits sign;
  };

  std::size_t n_ = 0;
  std::vector<Row> rows_;  // 0..n-1 destabilizers, n..2n-1 stabilizers
  std::size_t num_sym_vars_ = 0;

  bool anticommutes(const Row& row, const PauliString& p) const;
  void rowsum(Row& h, const Row& i) const;  // h <- i * h with phase tracking
  SignBits deterministic_outcome(const PauliString& p) const;
};

}  // namespace corrdec
