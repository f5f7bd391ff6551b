#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corrdec/circuit.hpp"
#include "corrdec/dem_io.hpp"

using namespace corrdec;

namespace {

// Flips obtained by rerunning the noiseless tableau analysis with the error
// inserted as explicit Pauli gates, diffed against the unperturbed references.
FlipSets tableau_flips(const CliffordCircuit& c, std::size_t location, const PauliString& err) {
  CliffordCircuit mod = c;
  std::vector<Instruction> inserted;
  for (std::uint32_t q = 0; q < err.n; ++q) {
    char pa = err.pauli_at(q);
    if (pa == 'I') continue;
    Op op = pa == 'X' ? Op::X : pa == 'Y' ? Op::Y : Op::Z;
    inserted.push_back({op, {q}, 0, {}, {}, {}, {}});
  }
  mod.instructions.insert(mod.instructions.begin() + location, inserted.begin(), inserted.end());
  auto base = analyze(c);
  auto pert = analyze(mod);
  FlipSets out;
  for (std::size_t i = 0; i < base.detector_reference.size(); ++i)
    if (base.detector_reference[i] != pert.detector_reference[i])
      out.detectors.push_back(static_cast<std::uint32_t>(i));
  for (std::size_t i = 0; i < base.observable_reference.size(); ++i)
    if (base.observable_reference[i] != pert.observable_reference[i])
      out.observables.push_back(static_cast<std::uint32_t>(i));
  return out;
}

void check_frame_vs_tableau_everywhere(const CliffordCircuit& c) {
  for (std::size_t loc = 0; loc <= c.instructions.size(); ++loc) {
    for (std::uint32_t q = 0; q < c.num_qubits; ++q) {
      for (char pa : {'X', 'Y', 'Z'}) {
        PauliString err(c.num_qubits);
        err.set_pauli(q, pa);
        auto a = frame_flips(c, loc, err);
        auto b = tableau_flips(c, loc, err);
        REQUIRE(a.detectors == b.detectors);
        REQUIRE(a.observables == b.observables);
      }
    }
  }
}

// Distance-3 repetition code, one noisy round: data 0..2, ancillas 3..4,
// checks Z0Z1 and Z1Z2, logical Z read out from qubit 0.
CliffordCircuit repetition_circuit(double p) {
  CliffordCircuit c(5);
  c.gate(Op::RZ, {0, 1, 2, 3, 4});
  c.noise(Op::XError, {0, 1, 2}, p);
  c.gate(Op::CNOT, {0, 3, 1, 3, 1, 4, 2, 4});
  c.measure(Op::MZ, {3, 4});
  c.measure(Op::MZ, {0});
  c.detectors = {{0}, {1}};
  c.observables = {{2}};
  return c;
}

}  // namespace

TEST_CASE("builder validation") {
  CliffordCircuit c(2);
  CHECK_THROWS_AS(c.gate(Op::H, {2}), std::invalid_argument);
  CHECK_THROWS_AS(c.gate(Op::CNOT, {0}), std::invalid_argument);
  CHECK_THROWS_AS(c.noise(Op::XError, {0}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(c.noise(Op::XError, {0}, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(c.noise(Op::H, {0}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(c.measure(Op::H, {0}), std::invalid_argument);
  CHECK_THROWS_AS(c.measure_product(PauliString::from_text("XXX")), std::invalid_argument);
  CHECK(c.instructions.empty());
}

TEST_CASE("text round trip") {
  CliffordCircuit c(3);
  c.gate(Op::RZ, {0, 1, 2});
  c.gate(Op::H, {0});
  c.tick();
  c.gate(Op::S, {1});
  c.gate(Op::CNOT, {0, 1});
  c.gate(Op::CZ, {1, 2});
  c.noise(Op::Depolarize1, {0, 1}, 0.01);
  c.noise(Op::Depolarize2, {0, 1}, 0.002);
  c.noise(Op::XError, {2}, 0.1);
  c.noise(Op::ZError, {2}, 0.1);
  c.permute({{0, 2}, {2, 0}});
  c.prep({PauliString::from_text("XXI"), PauliString::from_text("ZZI")}, {false, true});
  c.measure_product(PauliString::from_text("ZZZ"));
  c.measure(Op::MZ, {0, 1});
  c.measure(Op::MX, {2});
  c.detectors = {{0, 1}, {2}};
  c.observables = {{3}};
  auto text = c.to_text();
  auto c2 = CliffordCircuit::from_text(text);
  CHECK(c2.to_text() == text);
  CHECK(c2.num_qubits == 3);
  CHECK(c2.num_measurements() == 4);
  CHECK(c2.detectors == c.detectors);
  CHECK(c2.observables == c.observables);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(CliffordCircuit::from_text("qubits 2\nFOO 0\n"),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(CliffordCircuit::from_text("H 0\n"), doctest::Contains("line 1"),
                       std::runtime_error);
  CHECK_THROWS_AS(CliffordCircuit::from_text("qubits 2\nH 5\n"), std::runtime_error);
  CHECK_THROWS_AS(CliffordCircuit::from_text(""), std::runtime_error);
}

TEST_CASE("analysis computes reference parities") {
  CliffordCircuit c(2);
  c.gate(Op::RZ, {0, 1});
  c.gate(Op::X, {1});
  c.measure(Op::MZ, {0, 1});
  c.detectors = {{0}, {1}};
  auto a = analyze(c);
  CHECK(a.detector_reference == std::vector<bool>{false, true});
}

TEST_CASE("non-deterministic detector is rejected by name") {
  CliffordCircuit c(1);
  c.gate(Op::RZ, {0});
  c.gate(Op::H, {0});
  c.measure(Op::MZ, {0});
  c.detectors = {{0}};
  CHECK_THROWS_WITH_AS(analyze(c), doctest::Contains("detector 0"), std::runtime_error);
  CHECK_THROWS_AS(extract_hypergraph(c), std::runtime_error);
}

TEST_CASE("correlated random outcomes still give deterministic parities") {
  CliffordCircuit c(2);
  c.gate(Op::RZ, {0, 1});
  c.gate(Op::H, {0});
  c.gate(Op::CNOT, {0, 1});
  c.measure(Op::MZ, {0, 1});
  c.detectors = {{0, 1}};
  auto a = analyze(c);
  CHECK(a.detector_reference == std::vector<bool>{false});
}

TEST_CASE("prep instruction pins generator signs") {
  CliffordCircuit c(2);
  c.prep({PauliString::from_text("XX"), PauliString::from_text("ZZ")}, {false, true});
  c.measure_product(PauliString::from_text("XX"));
  c.measure_product(PauliString::from_text("ZZ"));
  c.detectors = {{0}, {1}};
  auto a = analyze(c);
  CHECK(a.detector_reference == std::vector<bool>{false, true});
}

TEST_CASE("frame flips basic cases") {
  CliffordCircuit empty(1);
  auto f = frame_flips(empty, 0, PauliString::from_text("X"));
  CHECK(f.detectors.empty());
  CHECK(f.observables.empty());

  auto rep = repetition_circuit(0.01);
  // X on the middle data qubit after the reset flips both checks
  PauliString x1(5);
  x1.set_pauli(1, 'X');
  auto fx1 = frame_flips(rep, 1, x1);
  CHECK(fx1.detectors == std::vector<std::uint32_t>{0, 1});
  CHECK(fx1.observables.empty());
  // X on the boundary qubit flips one check and the logical readout
  PauliString x0(5);
  x0.set_pauli(0, 'X');
  auto fx0 = frame_flips(rep, 1, x0);
  CHECK(fx0.detectors == std::vector<std::uint32_t>{0});
  CHECK(fx0.observables == std::vector<std::uint32_t>{0});
  // Z errors are invisible to Z-basis readout here
  PauliString z1(5);
  z1.set_pauli(1, 'Z');
  CHECK(frame_flips(rep, 1, z1).detectors.empty());
  // before the reset the error is wiped out entirely
  CHECK(frame_flips(rep, 0, x1).detectors.empty());
  // an error after the measurements does nothing
  auto late = frame_flips(rep, rep.instructions.size(), x1);
  CHECK(late.detectors.empty());
}

TEST_CASE("frame matches tableau exhaustively on the repetition circuit") {
  check_frame_vs_tableau_everywhere(repetition_circuit(0.01));
}

TEST_CASE("frame matches tableau on a circuit with every gate kind") {
  CliffordCircuit c(4);
  c.gate(Op::RZ, {0, 1, 2, 3});
  c.gate(Op::H, {0});
  c.gate(Op::CNOT, {0, 1, 1, 2, 2, 3});
  c.gate(Op::S, {0});
  c.gate(Op::CZ, {0, 1});
  c.permute({{2, 3}, {3, 2}});
  c.gate(Op::RX, {0});  // decouple qubit 0 so Z-pair parities stay deterministic
  c.measure(Op::MX, {0});
  c.measure_product(PauliString::from_text("IIZZ"));
  c.measure(Op::MZ, {1, 2, 3});
  c.detectors = {{0}, {1, 3, 4}, {2, 3}};
  c.observables = {{3, 4}};
  analyze(c);  // all deterministic by construction
  check_frame_vs_tableau_everywhere(c);
}

TEST_CASE("extraction of the repetition circuit matches hand enumeration") {
  auto h = extract_hypergraph(repetition_circuit(0.01));
  REQUIRE(h.num_mechanisms() == 3);
  auto text = dem_io::serialize(h);
  CHECK(text ==
        "dem 1\nchecks 2\nobservables 1\n"
        "error 0.01 C0 L0\n"
        "error 0.01 C0 C1\n"
        "error 0.01 C1\n");
}

TEST_CASE("noiseless circuit extracts an empty hypergraph") {
  auto h = extract_hypergraph(repetition_circuit(0));
  CHECK(h.num_mechanisms() == 0);
}

TEST_CASE("term probabilities scale linearly in channel strength") {
  auto terms1 = enumerate_error_terms(repetition_circuit(0.02));
  auto terms2 = enumerate_error_terms(repetition_circuit(0.01));
  REQUIRE(terms1.size() == terms2.size());
  for (std::size_t i = 0; i < terms1.size(); ++i) {
    CHECK(terms1[i].mechanism.probability == doctest::Approx(2 * terms2[i].mechanism.probability)
                                                 .epsilon(1e-12));
    CHECK(terms1[i].mechanism.flipped_checks == terms2[i].mechanism.flipped_checks);
  }
}

TEST_CASE("depolarizing channels enumerate canonical terms") {
  CliffordCircuit c(2);
  c.gate(Op::RZ, {0, 1});
  c.noise(Op::Depolarize1, {0}, 0.03);
  c.noise(Op::Depolarize2, {0, 1}, 0.15);
  c.measure(Op::MZ, {0, 1});
  c.detectors = {{0}, {1}};
  auto terms = enumerate_error_terms(c);
  REQUIRE(terms.size() == 3 + 15);
  CHECK(terms[0].error.to_text() == "XI");
  CHECK(terms[1].error.to_text() == "YI");
  CHECK(terms[2].error.to_text() == "ZI");
  for (int i = 0; i < 3; ++i) CHECK(terms[i].mechanism.probability == doctest::Approx(0.01));
  CHECK(terms[3].error.to_text() == "IX");
  CHECK(terms[7].error.to_text() == "XX");
  for (std::size_t i = 3; i < terms.size(); ++i)
    CHECK(terms[i].mechanism.probability == doctest::Approx(0.01));
  // X-type halves flip the Z measurement of their qubit, Z-type are silent
  CHECK(terms[0].mechanism.flipped_checks == std::vector<std::uint32_t>{0});
  CHECK(terms[2].mechanism.flipped_checks.empty());
}
