#include "corrdec/tableau.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace corrdec {

PauliString PauliString::from_text(const std::string& text) {
  std::size_t start = 0;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) start = 1;
  PauliString p(text.size() - start);
  for (std::size_t q = 0; q < p.n; ++q) p.set_pauli(q, text[start + q]);
  return p;
}

void PauliString::set_pauli(std::size_t q, char pauli) {
  switch (pauli) {
    case 'I':
      x.set(q, false);
      z.set(q, false);
      break;
    case 'X':
      x.set(q, true);
      z.set(q, false);
      break;
    case 'Y':
      x.set(q, true);
      z.set(q, true);
      break;
    case 'Z':
      x.set(q, false);
      z.set(q, true);
      break;
    default:
      throw std::invalid_argument(std::string("unknown pauli letter: ") + pauli);
  }
}

char PauliString::pauli_at(std::size_t q) const {
  return "IXZY"[(x.get(q) ? 1 : 0) | (z.get(q) ? 2 : 0)];
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (n != other.n) throw std::invalid_argument("pauli length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < x.words().size(); ++w)
    acc ^= (x.words()[w] & other.z.words()[w]) ^ (z.words()[w] & other.x.words()[w]);
  return std::popcount(acc) % 2 == 0;
}

std::string PauliString::to_text() const {
  std::string out(n, 'I');
  for (std::size_t q = 0; q < n; ++q) out[q] = pauli_at(q);
  return out;
}

bool SignBits::operator==(const SignBits& o) const {
  if (constant != o.constant) return false;
  std::size_t m = std::max(sym.size(), o.sym.size());
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t a = i < sym.size() ? sym[i] : 0;
    std::uint64_t b = i < o.sym.size() ? o.sym[i] : 0;
    if (a != b) return false;
  }
  return true;
}

StabilizerTableau::StabilizerTableau(std::size_t num_qubits) : n_(num_qubits) {
  rows_.resize(2 * n_);
  for (std::size_t i = 0; i < 2 * n_; ++i) {
    rows_[i].x = gf2::BitVec(n_);
    rows_[i].z = gf2::BitVec(n_);
  }
  for (std::size_t q = 0; q < n_; ++q) {
    rows_[q].x.set(q, true);        // destabilizer X_q
    rows_[n_ + q].z.set(q, true);   // stabilizer Z_q
  }
}

void StabilizerTableau::h(std::size_t q) {
  for (auto& r : rows_) {
    bool xb = r.x.get(q), zb = r.z.get(q);
    if (xb && zb) r.sign.constant = !r.sign.constant;
    r.x.set(q, zb);
    r.z.set(q, xb);
  }
}

void StabilizerTableau::s(std::size_t q) {
  for (auto& r : rows_) {
    bool xb = r.x.get(q), zb = r.z.get(q);
    if (xb && zb) r.sign.constant = !r.sign.constant;
    r.z.set(q, zb ^ xb);
  }
}

void StabilizerTableau::x(std::size_t q) {
  for (auto& r : rows_)
    if (r.z.get(q)) r.sign.constant = !r.sign.constant;
}

void StabilizerTableau::y(std::size_t q) {
  for (auto& r : rows_)
    if (r.x.get(q) != r.z.get(q)) r.sign.constant = !r.sign.constant;
}

void StabilizerTableau::z(std::size_t q) {
  for (auto& r : rows_)
    if (r.x.get(q)) r.sign.constant = !r.sign.constant;
}

void StabilizerTableau::cnot(std::size_t control, std::size_t target) {
  for (auto& r : rows_) {
    bool xa = r.x.get(control), za = r.z.get(control);
    bool xb = r.x.get(target), zb = r.z.get(target);
    if (xa && zb && (xb == za)) r.sign.constant = !r.sign.constant;
    r.x.set(target, xb ^ xa);
    r.z.set(control, za ^ zb);
  }
}

void StabilizerTableau::cz(std::size_t a, std::size_t b) {
  h(b);
  cnot(a, b);
  h(b);
}

void StabilizerTableau::permute(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
  std::vector<std::size_t> perm(n_);
  for (std::size_t q = 0; q < n_; ++q) perm[q] = q;
  std::vector<bool> src(n_, false), dst(n_, false);
  for (auto [from, to] : pairs) {
    if (from >= n_ || to >= n_ || src[from] || dst[to])
      throw std::invalid_argument("invalid qubit permutation");
    src[from] = dst[to] = true;
    perm[from] = to;
  }
  for (std::size_t q = 0; q < n_; ++q)
    if (src[q] != dst[q]) throw std::invalid_argument("qubit permutation is not a bijection");
  for (auto& r : rows_) {
    gf2::BitVec nx(n_), nz(n_);
    for (std::size_t q = 0; q < n_; ++q) {
      if (r.x.get(q)) nx.set(perm[q], true);
      if (r.z.get(q)) nz.set(perm[q], true);
    }
    r.x = std::move(nx);
    r.z = std::move(nz);
  }
}

bool StabilizerTableau::anticommutes(const Row& row, const PauliString& p) const {
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < row.x.words().size(); ++w)
    acc ^= (row.x.words()[w] & p.z.words()[w]) ^ (row.z.words()[w] & p.x.words()[w]);
  return std::popcount(acc) % 2 == 1;
}

void StabilizerTableau::apply_pauli(const PauliString& p, const SignBits& scale) {
  if (p.n != n_) throw std::invalid_argument("pauli length mismatch");
  for (auto& r : rows_)
    if (anticommutes(r, p)) r.sign.xor_with(scale);
}

// h <- i * h. Tracks the i-power phase of the product word by word; the total
// must be even because rowsum only ever combines commuting-compatible rows.
void StabilizerTableau::rowsum(Row& h, const Row& i) const {
  int phase = 2 * (int(h.sign.constant) + int(i.sign.constant));
  for (std::size_t w = 0; w < h.x.words().size(); ++w) {
    std::uint64_t x1 = i.x.words()[w], z1 = i.z.words()[w];
    std::uint64_t x2 = h.x.words()[w], z2 = h.z.words()[w];
    std::uint64_t plus = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & z2 & x2) | (~x1 & z1 & x2 & ~z2);
    std::uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & z2 & ~x2) | (~x1 & z1 & x2 & z2);
    phase += std::popcount(plus) - std::popcount(minus);
  }
  // Odd totals only arise when updating destabilizer rows, whose signs are
  // never read; stabilizer-row combinations always commute and come out even.
  phase = ((phase % 4) + 4) % 4;
  h.sign.constant = phase >= 2;
  SignBits si = i.sign;
  si.constant = false;
  h.sign.xor_with(si);
  h.x.xor_with(i.x);
  h.z.xor_with(i.z);
}

SignBits StabilizerTableau::deterministic_outcome(const PauliString& p) const {
  Row scratch{gf2::BitVec(n_), gf2::BitVec(n_), SignBits{}};
  for (std::size_t i = 0; i < n_; ++i)
    if (anticommutes(rows_[i], p)) rowsum(scratch, rows_[n_ + i]);
  if (!(scratch.x == p.x) || !(scratch.z == p.z))
    throw std::logic_error("deterministic measurement did not reproduce the observable");
  return scratch.sign;
}

SignBits StabilizerTableau::measure_pauli(const PauliString& p, OutcomeMode mode, Rng* rng) {
  if (p.n != n_) throw std::invalid_argument("pauli length mismatch");
  std::size_t pivot = 2 * n_;
  for (std::size_t i = n_; i < 2 * n_; ++i) {
    if (anticommutes(rows_[i], p)) {
      pivot = i;
      break;
    }
  }
  if (pivot == 2 * n_) return deterministic_outcome(p);

  for (std::size_t i = 0; i < 2 * n_; ++i)
    if (i != pivot && anticommutes(rows_[i], p)) rowsum(rows_[i], rows_[pivot]);
  rows_[pivot - n_] = rows_[pivot];
  rows_[pivot].x = p.x;
  rows_[pivot].z = p.z;
  SignBits outcome;
  if (mode == OutcomeMode::Random) {
    if (!rng) throw std::invalid_argument("random measurement requires an rng");
    outcome.constant = (*rng)() & 1;
  } else {
    outcome.set_var(num_sym_vars_++);
  }
  rows_[pivot].sign = outcome;
  return outcome;
}

SignBits StabilizerTableau::measure_z(std::size_t q, OutcomeMode mode, Rng* rng) {
  PauliString p(n_);
  p.z.set(q, true);
  return measure_pauli(p, mode, rng);
}

SignBits StabilizerTableau::measure_x(std::size_t q, OutcomeMode mode, Rng* rng) {
  PauliString p(n_);
  p.x.set(q, true);
  return measure_pauli(p, mode, rng);
}

void StabilizerTableau::reset_z(std::size_t q, OutcomeMode mode, Rng* rng) {
  SignBits m = measure_z(q, mode, rng);
  PauliString flip(n_);
  flip.x.set(q, true);
  apply_pauli(flip, m);  // conditionally flip back to |0>
}

void StabilizerTableau::reset_x(std::size_t q, OutcomeMode mode, Rng* rng) {
  SignBits m = measure_x(q, mode, rng);
  PauliString flip(n_);
  flip.z.set(q, true);
  apply_pauli(flip, m);
}

void StabilizerTableau::prepare_stabilizers(const std::vector<PauliString>& generators,
                                            const std::vector<bool>& sign_exponents) {
  if (generators.size() != sign_exponents.size())
    throw std::invalid_argument("generator/sign count mismatch");
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (!generators[i].commutes_with(generators[j]))
        throw std::invalid_argument("preparation generators must commute");

  // Support qubits of the generator set; corrections are confined to them.
  std::vector<std::size_t> support;
  for (std::size_t q = 0; q < n_; ++q) {
    bool used = false;
    for (const auto& g : generators)
      if (g.x.get(q) || g.z.get(q)) used = true;
    if (used) support.push_back(q);
  }

  for (std::size_t i = 0; i < generators.size(); ++i) {
    const PauliString& g = generators[i];
    if (g.n != n_) throw std::invalid_argument("pauli length mismatch");
    SignBits target{sign_exponents[i], {}};
    std::size_t pivot = 2 * n_;
    for (std::size_t r = n_; r < 2 * n_; ++r) {
      if (anticommutes(rows_[r], g)) {
        pivot = r;
        break;
      }
    }
    if (pivot != 2 * n_) {
      // Random outcome: project and pin the measured sign to the target.
      for (std::size_t r = 0; r < 2 * n_; ++r)
        if (r != pivot && anticommutes(rows_[r], g)) rowsum(rows_[r], rows_[pivot]);
      rows_[pivot - n_] = rows_[pivot];
      rows_[pivot].x = g.x;
      rows_[pivot].z = g.z;
      rows_[pivot].sign = target;
      continue;
    }
    SignBits got = deterministic_outcome(g);
    if (!got.is_concrete())
      throw std::logic_error("preparation target has a symbolic deterministic sign");
    if (got.constant == sign_exponents[i]) continue;
    // Deterministic with the wrong sign: apply a Pauli that anticommutes with
    // this generator and commutes with all earlier ones.
    gf2::BitMatrix sys(i + 1, 2 * support.size());
    for (std::size_t j = 0; j <= i; ++j) {
      for (std::size_t k = 0; k < support.size(); ++k) {
        sys.set(j, 2 * k, generators[j].z.get(support[k]));
        sys.set(j, 2 * k + 1, generators[j].x.get(support[k]));
      }
    }
    gf2::BitVec rhs(i + 1);
    rhs.set(i, true);
    auto sol = gf2::solve(sys, rhs);
    if (!sol) throw std::logic_error("no correction pauli exists; generators dependent?");
    PauliString corr(n_);
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (sol->get(2 * k)) corr.x.set(support[k], true);
      if (sol->get(2 * k + 1)) corr.z.set(support[k], true);
    }
    apply_pauli(corr);
  }
}

int StabilizerTableau::expectation_pauli(const PauliString& p) const {
  if (p.n != n_) throw std::invalid_argument("pauli length mismatch");
  for (std::size_t i = n_; i < 2 * n_; ++i)
    if (anticommutes(rows_[i], p)) return 0;
  SignBits out = deterministic_outcome(p);
  if (!out.is_concrete())
    throw std::logic_error("expectation value depends on unresolved random outcomes");
  return out.constant ? -1 : 1;
}

PauliString StabilizerTableau::stabilizer(std::size_t i) const {
  PauliString p(n_);
  p.x = rows_[n_ + i].x;
  p.z = rows_[n_ + i].z;
  return p;
}

bool StabilizerTableau::operator==(const StabilizerTableau& o) const {
  if (n_ != o.n_) return false;
  for (std::size_t i = 0; i < 2 * n_; ++i) {
    if (!(rows_[i].x == o.rows_[i].x) || !(rows_[i].z == o.rows_[i].z) ||
        !(rows_[i].sign == o.rows_[i].sign))
      return false;
  }
  return true;
}

}  // namespace corrdec
