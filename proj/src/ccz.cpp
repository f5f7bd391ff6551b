#include "corrdec/ccz.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <thread>

#include "corrdec/decoders.hpp"
#include "corrdec/stats.hpp"

namespace corrdec {

namespace {

constexpr int kBlockQubits = HammingCode::num_qubits;
constexpr int kTotalQubits = 3 * kBlockQubits;

// A Pauli term in X^x Z^z form over the 3-qubit triple, with a complex
// coefficient. Multiplication picks up (-1)^(z1 . x2) when commuting the
// left Z part past the right X part.
struct XzTerm {
  std::complex<double> coeff;
  unsigned x = 0, z = 0;  // 3-bit masks
};

std::vector<XzTerm> multiply_terms(const std::vector<XzTerm>& lhs, const std::vector<XzTerm>& rhs) {
  std::vector<XzTerm> out;
  out.reserve(lhs.size() * rhs.size());
  for (const auto& a : lhs)
    for (const auto& b : rhs) {
      double sign = (std::popcount(a.z & b.x) % 2) ? -1.0 : 1.0;
      out.push_back({a.coeff * b.coeff * sign, a.x ^ b.x, a.z ^ b.z});
    }
  return out;
}

// CZ between the two qubits other than `q`, as 1/2 (I + Z_a + Z_b - Z_a Z_b).
std::vector<XzTerm> cz_expansion(unsigned q) {
  unsigned others = 0x7u & ~(1u << q);
  unsigned lo = others & (~others + 1);
  unsigned hi = others ^ lo;
  return {{0.5, 0, 0}, {0.5, 0, lo}, {0.5, 0, hi}, {-0.5, 0, others}};
}

}  // namespace

HammingCode HammingCode::make() {
  // Column of qubit i is the binary expansion of i + 1; rows are mutually
  // even-overlapping, so the same matrix serves as X and Z checks.
  HammingCode code;
  code.rows = {0, 0, 0, 0};
  for (int q = 0; q < num_qubits; ++q) {
    unsigned column = static_cast<unsigned>(q + 1);
    for (int r = 0; r < 4; ++r)
      if (column & (1u << (3 - r))) code.rows[r] |= static_cast<std::uint16_t>(1u << q);
  }
  return code;
}

std::vector<CczTerm> ccz_propagate(const PauliString& input) {
  if (input.n != 3) throw std::invalid_argument("ccz_propagate expects a 3-qubit Pauli");

  // CCZ P CCZ factorizes qubit-wise: Z passes through, X/Y gain a CZ on the
  // other two qubits. The factors are multiplied in qubit order.
  std::vector<XzTerm> product{{1.0, 0, 0}};
  for (unsigned q = 0; q < 3; ++q) {
    bool xbit = input.x.get(q), zbit = input.z.get(q);
    if (!xbit && !zbit) continue;
    // Y = i X Z in X^x Z^z form.
    std::complex<double> coeff = (xbit && zbit) ? std::complex<double>(0, 1) : 1.0;
    std::vector<XzTerm> factor{{coeff, xbit ? (1u << q) : 0u, zbit ? (1u << q) : 0u}};
    if (xbit) factor = multiply_terms(factor, cz_expansion(q));
    product = multiply_terms(product, factor);
  }

  std::map<std::pair<unsigned, unsigned>, std::complex<double>> combined;
  for (const auto& term : product) combined[{term.x, term.z}] += term.coeff;

  std::vector<CczTerm> out;
  for (const auto& [key, coeff] : combined) {
    auto [x, z] = key;
    if (std::abs(coeff) < 1e-12) continue;
    CczTerm term;
    term.pauli = PauliString(3);
    for (unsigned q = 0; q < 3; ++q) {
      term.pauli.x.set(q, (x >> q) & 1);
      term.pauli.z.set(q, (z >> q) & 1);
    }
    // Convert from X^x Z^z form to the Hermitian Pauli basis: XZ = -i Y.
    int ys = std::popcount(x & z) % 4;
    static const std::complex<double> minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    term.amplitude = coeff * minus_i_pow[ys];
    out.push_back(std::move(term));
  }
  return out;
}

namespace {

struct Signature {
  std::vector<std::uint32_t> checks, observables;
  bool operator<(const Signature& o) const {
    return std::tie(checks, observables) < std::tie(o.checks, o.observables);
  }
};

// Checks 0..11: X checks (block-major, 4 rows each); 12..23: Z checks.
// Observables 0..2: X_L flips per block; 3..5: Z_L flips.
Signature term_signature(const HammingCode& code, int qpos, const PauliString& triple) {
  Signature sig;
  for (int b = 0; b < 3; ++b)  // Z components anticommute with X-type operators
    if (triple.z.get(b))
      for (int r = 0; r < 4; ++r)
        if (code.rows[r] & (1u << qpos)) sig.checks.push_back(b * 4 + r);
  for (int b = 0; b < 3; ++b)
    if (triple.x.get(b))
      for (int r = 0; r < 4; ++r)
        if (code.rows[r] & (1u << qpos)) sig.checks.push_back(12 + b * 4 + r);
  for (int b = 0; b < 3; ++b)
    if (triple.z.get(b)) sig.observables.push_back(b);
  for (int b = 0; b < 3; ++b)
    if (triple.x.get(b)) sig.observables.push_back(3 + b);
  std::sort(sig.checks.begin(), sig.checks.end());
  std::sort(sig.observables.begin(), sig.observables.end());
  return sig;
}

PauliString term_representative(int qpos, const PauliString& triple) {
  PauliString rep(kTotalQubits);
  for (int b = 0; b < 3; ++b) {
    rep.x.set(b * kBlockQubits + qpos, triple.x.get(b));
    rep.z.set(b * kBlockQubits + qpos, triple.z.get(b));
  }
  return rep;
}

int blocks_touched(const PauliString& triple) {
  int count = 0;
  for (int b = 0; b < 3; ++b)
    if (triple.x.get(b) || triple.z.get(b)) ++count;
  return count;
}

struct Accumulator {
  std::map<Signature, std::pair<double, PauliString>> cells;

  void add(const Signature& sig, double probability, const PauliString& rep) {
    auto [it, inserted] = cells.try_emplace(sig, probability, rep);
    if (!inserted) it->second.first += probability;
  }

  DecodingHypergraph build(std::vector<PauliString>& reps_out) const {
    std::vector<ErrorMechanism> mechanisms;
    for (const auto& [sig, cell] : cells)
      mechanisms.push_back({cell.first, sig.checks, sig.observables});
    auto h = DecodingHypergraph::from_mechanisms(24, 6, std::move(mechanisms));
    reps_out.clear();
    for (const auto& m : h.mechanisms()) {
      auto it = cells.find(Signature{m.flipped_checks, m.flipped_observables});
      if (it == cells.end()) throw std::logic_error("ccz representative lookup failed");
      reps_out.push_back(it->second.second);
    }
    return h;
  }
};

PauliString block_logical(bool x_type, int block) {
  PauliString op(kTotalQubits);
  for (int i = 0; i < kBlockQubits; ++i)
    (x_type ? op.x : op.z).set(block * kBlockQubits + i, true);
  return op;
}

PauliString block_check(const HammingCode& code, bool x_type, int block, int row) {
  PauliString op(kTotalQubits);
  for (int i = 0; i < kBlockQubits; ++i)
    if (code.rows[row] & (1u << i)) (x_type ? op.x : op.z).set(block * kBlockQubits + i, true);
  return op;
}

}  // namespace

CczModel CczModel::make(double p) {
  if (!(p >= 0 && p < 0.5)) throw std::invalid_argument("ccz: p must lie in [0, 0.5)");
  CczModel model;
  model.code = HammingCode::make();
  model.p = p;

  Accumulator full, restricted;
  for (int qpos = 0; qpos < kBlockQubits; ++qpos) {
    for (unsigned code = 1; code < 64; ++code) {
      PauliString input(3);
      int weight = 0;
      for (unsigned b = 0; b < 3; ++b) {
        unsigned pauli = (code >> (2 * b)) & 3u;  // 0:I 1:X 2:Y 3:Z
        if (pauli == 0) continue;
        ++weight;
        input.x.set(b, pauli == 1 || pauli == 2);
        input.z.set(b, pauli == 2 || pauli == 3);
      }
      if (weight == 0) continue;
      double probability =
          std::pow(p / 3, weight) * std::pow(1 - p, 3 - weight);
      if (probability <= 0) continue;
      auto terms = ccz_propagate(input);
      double share = probability / terms.size();
      for (const auto& term : terms) {
        Signature sig = term_signature(model.code, qpos, term.pauli);
        PauliString rep = term_representative(qpos, term.pauli);
        full.add(sig, share, rep);
        if (blocks_touched(term.pauli) == 1) restricted.add(sig, share, rep);
      }
    }
  }
  model.correlated = full.build(model.correlated_reps);
  model.independent = restricted.build(model.independent_reps);

  model.blocks.num_blocks = 3;
  model.blocks.check_block.resize(24);
  for (std::uint32_t c = 0; c < 24; ++c) model.blocks.check_block[c] = (c % 12) / 4;
  model.blocks.observable_block = {0, 1, 2, 0, 1, 2};
  return model;
}

DecodingHypergraph build_ccz_hypergraph(double p) { return CczModel::make(p).correlated; }

std::vector<CczState> ccz_initial_states() {
  return {{0, 0, 0}, {0, 0, 2}, {0, 2, 2}, {1, 1, 2}, {1, 2, 2}};
}

CczReference ccz_reference_state(const CczState& state) {
  HammingCode code = HammingCode::make();
  CczReference ref{StabilizerTableau(kTotalQubits), {}};

  // Product-state preparation per block, then one combined projection: the
  // sign-fixing corrections inside prepare_stabilizers only respect earlier
  // generators of the same call, so the block checks must be listed ahead of
  // the logical generators.
  std::vector<PauliString> generators;
  std::vector<bool> signs;
  for (int b = 0; b < 3; ++b) {
    if (state[b] < 0 || state[b] > 2) throw std::invalid_argument("ccz state basis must be 0/1/2");
    if (state[b] == 2) {
      for (int q = 0; q < kBlockQubits; ++q) ref.tableau.h(b * kBlockQubits + q);
    } else if (state[b] == 1) {
      for (int q = 0; q < kBlockQubits; ++q) ref.tableau.x(b * kBlockQubits + q);
    }
    for (bool x_type : {true, false})
      for (int r = 0; r < 4; ++r) {
        generators.push_back(block_check(code, x_type, b, r));
        signs.push_back(false);
      }
  }

  // Logical stabilizers of the CCZ output. Z-basis blocks keep (-1)^v Z_L;
  // an X-basis block keeps X_L dressed by the CZ on the other two blocks,
  // which reduces to a Pauli whenever at least one of them is Z-basis.
  for (int b = 0; b < 3; ++b) {
    if (state[b] != 2) {
      ref.logical_generators.emplace_back(block_logical(false, b), state[b] == 1);
      generators.push_back(block_logical(false, b));
      signs.push_back(state[b] == 1);
      continue;
    }
    int j = (b + 1) % 3, k = (b + 2) % 3;
    PauliString op = block_logical(true, b);
    bool sign = false;
    if (state[j] != 2 && state[k] != 2) {
      sign = state[j] == 1 && state[k] == 1;
    } else if (state[j] != 2) {
      if (state[j] == 1) op.z.xor_with(block_logical(false, k).z);
    } else if (state[k] != 2) {
      if (state[k] == 1) op.z.xor_with(block_logical(false, j).z);
    } else {
      throw std::invalid_argument("ccz output is not a stabilizer state for three |+_L> inputs");
    }
    ref.logical_generators.emplace_back(op, sign);
    generators.push_back(op);
    signs.push_back(sign);
  }
  ref.tableau.prepare_stabilizers(generators, signs);
  return ref;
}

CczShotOutcome run_ccz_shot(const CczModel& model, const CczReference& reference,
                            CczDecoders& decoders, Rng& rng) {
  StabilizerTableau tableau = reference.tableau;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  for (int qpos = 0; qpos < kBlockQubits; ++qpos) {
    std::array<int, 3> pauli{};  // 0:I 1:X 2:Y 3:Z
    for (int b = 0; b < 3; ++b) {
      double u = uniform(rng);
      if (u < model.p) pauli[b] = 1 + std::min(2, static_cast<int>(u / (model.p / 3)));
    }
    // Conjugated error (P0 CZ12)(P1 CZ02)(P2 CZ01): rightmost factor first.
    for (int b = 2; b >= 0; --b) {
      if (pauli[b] == 0) continue;
      std::size_t q = static_cast<std::size_t>(b) * kBlockQubits + qpos;
      if (pauli[b] != 3) {
        int j = (b + 1) % 3, k = (b + 2) % 3;
        tableau.cz(j * kBlockQubits + qpos, k * kBlockQubits + qpos);
      }
      if (pauli[b] == 1) tableau.x(q);
      if (pauli[b] == 2) tableau.y(q);
      if (pauli[b] == 3) tableau.z(q);
    }
  }

  Syndrome syndrome{gf2::BitVec(24)};
  std::uint32_t idx = 0;
  for (bool x_type : {true, false})
    for (int b = 0; b < 3; ++b)
      for (int r = 0; r < 4; ++r) {
        SignBits outcome = tableau.measure_pauli(block_check(model.code, x_type, b, r),
                                                 StabilizerTableau::OutcomeMode::Random, &rng);
        syndrome.bits.set(idx++, outcome.constant);
      }

  auto score = [&](const DecodingHypergraph& h, const std::vector<PauliString>& reps,
                   MleDecoder& decoder) {
    DecodeOutcome out;
    try {
      out = decoder.decode(syndrome);
    } catch (const std::runtime_error&) {
      return false;
    }
    StabilizerTableau corrected = tableau;
    for (std::size_t j = 0; j < h.num_mechanisms(); ++j)
      if (out.configuration.fired.get(j)) corrected.apply_pauli(reps[j]);
    for (const auto& [op, sign] : reference.logical_generators)
      if (corrected.expectation_pauli(op) != (sign ? -1 : 1)) return false;
    return true;
  };

  return {score(model.correlated, model.correlated_reps, decoders.correlated),
          score(model.independent, model.independent_reps, decoders.independent)};
}

std::pair<ExperimentResult, ExperimentResult> run_ccz_experiment(double p,
                                                                 std::uint64_t shots_per_state,
                                                                 std::uint64_t seed, int workers) {
  if (shots_per_state < 1) throw std::invalid_argument("ccz: shots_per_state must be >= 1");
  workers = std::max(1, workers);
  CczModel model = CczModel::make(p);
  model.correlated.check_incidence();  // prewarm lazy caches before threading
  model.independent.check_incidence();

  auto states = ccz_initial_states();
  std::vector<CczDecoders> decoder_pool;
  decoder_pool.reserve(workers);
  for (int t = 0; t < workers; ++t) decoder_pool.emplace_back(model);
  std::uint64_t correlated_failures = 0, independent_failures = 0;
  for (std::size_t si = 0; si < states.size(); ++si) {
    CczReference reference = ccz_reference_state(states[si]);
    std::vector<CczShotOutcome> outcomes(shots_per_state);
    auto work = [&](int t) {
      for (std::uint64_t shot = t; shot < shots_per_state; shot += workers) {
        Rng rng(derive_shot_seed(seed, si, shot));
        outcomes[shot] = run_ccz_shot(model, reference, decoder_pool[t], rng);
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (const auto& outcome : outcomes) {
      if (!outcome.correlated_ok) ++correlated_failures;
      if (!outcome.independent_ok) ++independent_failures;
    }
  }

  auto finish = [&](DecoderKind decoder, std::uint64_t failures) {
    ExperimentResult result;
    result.params.kind = ExperimentKind::Ccz;
    result.params.decoder = decoder;
    result.params.d = 3;
    result.params.p = p;
    result.params.n_r = 0;
    result.params.f_b = 0;
    result.params.seed = seed;
    result.params.shots = shots_per_state;
    result.shots = shots_per_state * states.size();
    result.failures = failures;
    result.p_hat = static_cast<double>(failures) / result.shots;
    auto [lo, hi] = clopper_pearson(failures, result.shots);
    result.ci_lo = lo;
    result.ci_hi = hi;
    return result;
  };
  return {finish(DecoderKind::Mle, correlated_failures),
          finish(DecoderKind::Independent, independent_failures)};
}

}  // namespace corrdec
