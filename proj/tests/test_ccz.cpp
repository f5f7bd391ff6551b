#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "corrdec/ccz.hpp"
#include "corrdec/decoders.hpp"

using namespace corrdec;

namespace {

std::string term_text(const CczTerm& term) {
  std::string s;
  for (int q = 0; q < 3; ++q) s += term.pauli.pauli_at(q);
  return s;
}

std::map<std::string, std::complex<double>> expansion(const std::string& input) {
  std::map<std::string, std::complex<double>> out;
  for (const auto& term : ccz_propagate(PauliString::from_text(input)))
    out[term_text(term)] = term.amplitude;
  return out;
}

}  // namespace

TEST_CASE("Hamming code check matrix invariants") {
  HammingCode code = HammingCode::make();
  // Verbatim rows.
  const char* expected[4] = {"000000011111111", "000111100001111", "011001100110011",
                             "101010101010101"};
  for (int r = 0; r < 4; ++r)
    for (int q = 0; q < 15; ++q)
      CHECK(((code.rows[r] >> q) & 1) == (expected[r][q] == '1'));

  // Self-dual CSS condition: all pairwise (and self) overlaps are even.
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) CHECK(std::popcount(unsigned(code.rows[r] & code.rows[s])) % 2 == 0);

  // Columns are the distinct nonzero 4-bit vectors: distance 3 classical code.
  std::set<unsigned> columns;
  for (int q = 0; q < 15; ++q) {
    unsigned col = 0;
    for (int r = 0; r < 4; ++r) col |= ((code.rows[r] >> q) & 1u) << r;
    CHECK(col != 0);
    columns.insert(col);
  }
  CHECK(columns.size() == 15);

  // Transversal logicals commute with every check (even support overlap).
  for (int r = 0; r < 4; ++r) CHECK(std::popcount(unsigned(code.rows[r])) % 2 == 0);
}

TEST_CASE("ccz_propagate known expansions") {
  auto zzz = expansion("ZZZ");
  REQUIRE(zzz.size() == 1);
  CHECK(zzz["ZZZ"] == std::complex<double>(1, 0));

  auto iii = expansion("III");
  REQUIRE(iii.size() == 1);
  CHECK(iii["III"] == std::complex<double>(1, 0));

  auto xii = expansion("XII");
  REQUIRE(xii.size() == 4);
  CHECK(xii["XII"] == std::complex<double>(0.5, 0));
  CHECK(xii["XIZ"] == std::complex<double>(0.5, 0));
  CHECK(xii["XZI"] == std::complex<double>(0.5, 0));
  CHECK(xii["XZZ"] == std::complex<double>(-0.5, 0));

  // Y propagates like X: same CZ dressing on the other two qubits.
  auto iyi = expansion("IYI");
  REQUIRE(iyi.size() == 4);
  CHECK(iyi["IYI"] == std::complex<double>(0.5, 0));
  CHECK(iyi["ZYI"] == std::complex<double>(0.5, 0));
  CHECK(iyi["IYZ"] == std::complex<double>(0.5, 0));
  CHECK(iyi["ZYZ"] == std::complex<double>(-0.5, 0));

  // A Z spectator folds into the CZ expansion of the X component.
  auto xiz = expansion("XIZ");
  REQUIRE(xiz.size() == 4);
  CHECK(xiz["XIZ"] == std::complex<double>(0.5, 0));
  CHECK(xiz["XII"] == std::complex<double>(0.5, 0));
  CHECK(xiz["XZZ"] == std::complex<double>(0.5, 0));
  CHECK(xiz["XZI"] == std::complex<double>(-0.5, 0));

  // Unit total weight: the expansion is a unitary's Pauli decomposition.
  for (const char* input : {"XXI", "XYZ", "YYY", "XXX"}) {
    double total = 0;
    for (const auto& [text, amp] : expansion(input)) total += std::norm(amp);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(ccz_propagate(PauliString::from_text("XX")), std::invalid_argument);
}

TEST_CASE("ccz hypergraph structure and probabilities") {
  const double p = 0.01;
  CczModel model = CczModel::make(p);
  CHECK(model.correlated.num_checks() == 24);
  CHECK(model.correlated.num_observables() == 6);
  CHECK(model.independent.num_checks() == 24);
  CHECK(model.correlated.num_mechanisms() > model.independent.num_mechanisms());
  REQUIRE(model.correlated_reps.size() == model.correlated.num_mechanisms());
  REQUIRE(model.independent_reps.size() == model.independent.num_mechanisms());

  // Deterministic construction.
  CczModel again = CczModel::make(p);
  CHECK(again.correlated.num_mechanisms() == model.correlated.num_mechanisms());

  // Probability mass is conserved by the term split and signature merging:
  // each qubit triple contributes 1 - (1-p)^3 in total.
  double total = 0;
  for (const auto& m : model.correlated.mechanisms()) total += m.probability;
  CHECK(total == doctest::Approx(15 * (1 - std::pow(1 - p, 3))).epsilon(1e-9));

  // The single-Z mechanism on block 0, qubit 0 is an isolated signature:
  // it flips only X check 3 (column 1 = 0001) and the block-0 X logical.
  bool found = false;
  for (const auto& m : model.correlated.mechanisms()) {
    if (m.flipped_checks == std::vector<std::uint32_t>{3} &&
        m.flipped_observables == std::vector<std::uint32_t>{0}) {
      found = true;
      // Sole contribution: input ZII, a one-term expansion.
      CHECK(m.probability == doctest::Approx(p / 3 * (1 - p) * (1 - p)).epsilon(1e-9));
    }
  }
  CHECK(found);

  // Representatives reproduce their mechanism signatures: X components flip
  // Z checks / Z logicals, Z components flip X checks / X logicals.
  HammingCode code = HammingCode::make();
  for (std::size_t j = 0; j < model.correlated.num_mechanisms(); ++j) {
    const auto& rep = model.correlated_reps[j];
    std::vector<std::uint32_t> checks, observables;
    for (int b = 0; b < 3; ++b) {
      unsigned x_mask = 0, z_mask = 0;
      for (int i = 0; i < 15; ++i) {
        x_mask |= unsigned(rep.x.get(b * 15 + i)) << i;
        z_mask |= unsigned(rep.z.get(b * 15 + i)) << i;
      }
      for (int r = 0; r < 4; ++r)
        if (std::popcount(unsigned(code.rows[r] & z_mask)) % 2) checks.push_back(b * 4 + r);
      for (int r = 0; r < 4; ++r)
        if (std::popcount(unsigned(code.rows[r] & x_mask)) % 2) checks.push_back(12 + b * 4 + r);
      if (std::popcount(z_mask) % 2) observables.push_back(b);
      if (std::popcount(x_mask) % 2) observables.push_back(3 + b);
    }
    std::sort(checks.begin(), checks.end());
    std::sort(observables.begin(), observables.end());
    CHECK(checks == model.correlated.mechanisms()[j].flipped_checks);
    CHECK(observables == model.correlated.mechanisms()[j].flipped_observables);
  }

  // The independent restriction keeps only single-block error terms.
  for (std::size_t j = 0; j < model.independent.num_mechanisms(); ++j) {
    const auto& rep = model.independent_reps[j];
    int touched = 0;
    for (int b = 0; b < 3; ++b) {
      bool any = false;
      for (int i = 0; i < 15; ++i)
        any = any || rep.x.get(b * 15 + i) || rep.z.get(b * 15 + i);
      touched += any;
    }
    CHECK(touched == 1);
  }
}

TEST_CASE("reference states carry the CCZ output logical stabilizers") {
  // |1L 1L 1L>: all three logical Z at -1 (the CCZ phase is global).
  CczReference all_ones = ccz_reference_state({1, 1, 1});
  REQUIRE(all_ones.logical_generators.size() == 3);
  for (const auto& [op, sign] : all_ones.logical_generators) {
    CHECK(sign);
    CHECK(all_ones.tableau.expectation_pauli(op) == -1);
  }

  // Check operators are +1 in every reference state.
  HammingCode code = HammingCode::make();
  for (const auto& state : ccz_initial_states()) {
    CczReference ref = ccz_reference_state(state);
    for (bool x_type : {true, false})
      for (int b = 0; b < 3; ++b)
        for (int r = 0; r < 4; ++r) {
          PauliString check(45);
          for (int i = 0; i < 15; ++i)
            if (code.rows[r] & (1u << i)) (x_type ? check.x : check.z).set(b * 15 + i, true);
          CHECK(ref.tableau.expectation_pauli(check) == 1);
        }
    for (const auto& [op, sign] : ref.logical_generators)
      CHECK(ref.tableau.expectation_pauli(op) == (sign ? -1 : 1));
  }

  // |1L 1L +L>: the third block ends in |-L>.
  CczReference minus = ccz_reference_state({1, 1, 2});
  PauliString x3(45);
  for (int i = 0; i < 15; ++i) x3.x.set(2 * 15 + i, true);
  CHECK(minus.tableau.expectation_pauli(x3) == -1);

  // |1L +L +L>: a logical CZ between blocks 1 and 2.
  CczReference cz_state = ccz_reference_state({1, 2, 2});
  PauliString x1z2(45), z1x2(45);
  for (int i = 0; i < 15; ++i) {
    x1z2.x.set(1 * 15 + i, true);
    x1z2.z.set(2 * 15 + i, true);
    z1x2.z.set(1 * 15 + i, true);
    z1x2.x.set(2 * 15 + i, true);
  }
  CHECK(cz_state.tableau.expectation_pauli(x1z2) == 1);
  CHECK(cz_state.tableau.expectation_pauli(z1x2) == 1);

  CHECK_THROWS_AS(ccz_reference_state({2, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(ccz_reference_state({0, 0, 5}), std::invalid_argument);
}

TEST_CASE("noiseless shots always succeed") {
  CczModel model = CczModel::make(0.0);
  CczDecoders decoders(model);
  Rng rng(4);
  for (const auto& state : ccz_initial_states()) {
    CczReference ref = ccz_reference_state(state);
    for (int shot = 0; shot < 5; ++shot) {
      auto outcome = run_ccz_shot(model, ref, decoders, rng);
      CHECK(outcome.correlated_ok);
      CHECK(outcome.independent_ok);
    }
  }
  auto [corr, ind] = run_ccz_experiment(0.0, 20, 1);
  CHECK(corr.failures == 0);
  CHECK(ind.failures == 0);
  CHECK(corr.shots == 100);
}

TEST_CASE("ccz experiment determinism and decoder ordering") {
  auto [corr_a, ind_a] = run_ccz_experiment(0.018, 200, 42, 1);
  auto [corr_b, ind_b] = run_ccz_experiment(0.018, 200, 42, 4);
  CHECK(corr_a.failures == corr_b.failures);
  CHECK(ind_a.failures == ind_b.failures);
  CHECK(corr_a.shots == 1000);

  // Correlated decoding should not be significantly worse than per-block.
  double sigma = std::sqrt(double(corr_a.failures) + ind_a.failures + 1);
  CHECK(double(corr_a.failures) < double(ind_a.failures) + 2 * sigma);
  CHECK(corr_a.failures > 0);  // noise at this strength does cause failures
}
