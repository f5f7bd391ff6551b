#include "corrdec/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace corrdec {

namespace {

bool is_noise(Op op) {
  return op == Op::XError || op == Op::ZError || op == Op::Depolarize1 || op == Op::Depolarize2;
}

bool is_single_qubit_gate(Op op) {
  return op == Op::H || op == Op::X || op == Op::Y || op == Op::Z || op == Op::S;
}

bool is_pair_gate(Op op) { return op == Op::CNOT || op == Op::CZ; }

std::size_t records_of(const Instruction& ins) {
  if (ins.op == Op::MX || ins.op == Op::MZ) return ins.qubits.size();
  if (ins.op == Op::MPP) return 1;
  return 0;
}

std::vector<std::uint32_t> prep_support(const Instruction& ins, std::size_t nq) {
  std::vector<std::uint32_t> support;
  for (std::uint32_t q = 0; q < nq; ++q) {
    for (const auto& g : ins.generators) {
      if (g.x.get(q) || g.z.get(q)) {
        support.push_back(q);
        break;
      }
    }
  }
  return support;
}

void check_qubits(const std::vector<std::uint32_t>& qs, std::size_t nq) {
  for (auto q : qs)
    if (q >= nq) throw std::invalid_argument("qubit index out of range");
}

}  // namespace

void CliffordCircuit::gate(Op op, std::vector<std::uint32_t> qs) {
  if (!is_single_qubit_gate(op) && !is_pair_gate(op) && op != Op::RX && op != Op::RZ)
    throw std::invalid_argument("gate() expects a unitary gate or reset");
  if (is_pair_gate(op) && qs.size() % 2 != 0)
    throw std::invalid_argument("two-qubit gate needs an even qubit list");
  check_qubits(qs, num_qubits);
  instructions.push_back({op, std::move(qs), 0, {}, {}, {}, {}});
}

void CliffordCircuit::noise(Op op, std::vector<std::uint32_t> qs, double p) {
  if (!is_noise(op)) throw std::invalid_argument("noise() expects a noise channel");
  if (op == Op::Depolarize2 && qs.size() % 2 != 0)
    throw std::invalid_argument("two-qubit channel needs an even qubit list");
  if (!(p >= 0 && p < 0.5)) throw std::invalid_argument("channel probability must be in [0, 0.5)");
  check_qubits(qs, num_qubits);
  instructions.push_back({op, std::move(qs), p, {}, {}, {}, {}});
}

std::uint32_t CliffordCircuit::measure(Op op, std::vector<std::uint32_t> qs) {
  if (op != Op::MX && op != Op::MZ) throw std::invalid_argument("measure() expects MX or MZ");
  check_qubits(qs, num_qubits);
  auto first = static_cast<std::uint32_t>(num_measurements());
  instructions.push_back({op, std::move(qs), 0, {}, {}, {}, {}});
  return first;
}

std::uint32_t CliffordCircuit::measure_product(PauliString p) {
  if (p.n != num_qubits) throw std::invalid_argument("pauli width mismatch");
  auto first = static_cast<std::uint32_t>(num_measurements());
  instructions.push_back({Op::MPP, {}, 0, std::move(p), {}, {}, {}});
  return first;
}

void CliffordCircuit::permute(std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs) {
  for (auto [a, b] : pairs)
    if (a >= num_qubits || b >= num_qubits)
      throw std::invalid_argument("qubit index out of range");
  instructions.push_back({Op::Permute, {}, 0, {}, std::move(pairs), {}, {}});
}

void CliffordCircuit::prep(std::vector<PauliString> generators, std::vector<bool> signs) {
  if (generators.size() != signs.size())
    throw std::invalid_argument("generator/sign count mismatch");
  for (const auto& g : generators)
    if (g.n != num_qubits) throw std::invalid_argument("pauli width mismatch");
  instructions.push_back({Op::Prep, {}, 0, {}, {}, std::move(generators), std::move(signs)});
}

std::size_t CliffordCircuit::num_measurements() const {
  std::size_t n = 0;
  for (const auto& ins : instructions) n += records_of(ins);
  return n;
}

// ---------------------------------------------------------------------------
// Text form, one instruction per line.

namespace {

const std::map<Op, std::string> kOpNames = {
    {Op::RX, "RX"},           {Op::RZ, "RZ"},
    {Op::H, "H"},             {Op::X, "X"},
    {Op::Y, "Y"},             {Op::Z, "Z"},
    {Op::S, "S"},             {Op::CNOT, "CNOT"},
    {Op::CZ, "CZ"},           {Op::MX, "MX"},
    {Op::MZ, "MZ"},           {Op::MPP, "MPP"},
    {Op::Permute, "PERMUTE"}, {Op::Tick, "TICK"},
    {Op::XError, "X_ERROR"},  {Op::ZError, "Z_ERROR"},
    {Op::Depolarize1, "DEPOLARIZE1"}, {Op::Depolarize2, "DEPOLARIZE2"},
    {Op::Prep, "PREP"},
};

}  // namespace

std::string CliffordCircuit::to_text() const {
  std::ostringstream out;
  out << "qubits " << num_qubits << "\n";
  for (const auto& ins : instructions) {
    out << kOpNames.at(ins.op);
    if (is_noise(ins.op)) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "(%.17g)", ins.probability);
      out << buf;
    }
    if (ins.op == Op::MPP) out << " " << ins.pauli.to_text();
    if (ins.op == Op::Permute)
      for (auto [a, b] : ins.pairs) out << " " << a << ">" << b;
    if (ins.op == Op::Prep)
      for (std::size_t i = 0; i < ins.generators.size(); ++i)
        out << " " << (ins.signs[i] ? '-' : '+') << ins.generators[i].to_text();
    for (auto q : ins.qubits) out << " " << q;
    out << "\n";
  }
  for (const auto& det : detectors) {
    out << "DETECTOR";
    for (auto r : det) out << " " << r;
    out << "\n";
  }
  for (const auto& obs : observables) {
    out << "OBSERVABLE";
    for (auto r : obs) out << " " << r;
    out << "\n";
  }
  return out.str();
}

CliffordCircuit CliffordCircuit::from_text(const std::string& text) {
  CliffordCircuit c;
  bool have_qubits = false;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("circuit parse error at line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ws(line);
    std::string head;
    if (!(ws >> head)) continue;
    if (head == "qubits") {
      if (have_qubits) fail("duplicate qubits line");
      if (!(ws >> c.num_qubits)) fail("missing qubit count");
      have_qubits = true;
      continue;
    }
    if (!have_qubits) fail("qubits line must come first");
    if (head == "DETECTOR" || head == "OBSERVABLE") {
      std::vector<std::uint32_t> recs;
      std::uint32_t r;
      while (ws >> r) recs.push_back(r);
      (head == "DETECTOR" ? c.detectors : c.observables).push_back(std::move(recs));
      continue;
    }
    double prob = 0;
    if (auto paren = head.find('('); paren != std::string::npos) {
      if (head.back() != ')') fail("malformed probability");
      prob = std::stod(head.substr(paren + 1, head.size() - paren - 2));
      head.resize(paren);
    }
    Op op{};
    bool found = false;
    for (const auto& [k, v] : kOpNames)
      if (v == head) {
        op = k;
        found = true;
      }
    if (!found) fail("unknown instruction: " + head);
    try {
      if (op == Op::Tick) {
        c.tick();
      } else if (op == Op::MPP) {
        std::string pauli;
        if (!(ws >> pauli)) fail("MPP needs a pauli string");
        auto p = PauliString::from_text(pauli);
        if (p.n != c.num_qubits) fail("MPP width mismatch");
        c.measure_product(std::move(p));
      } else if (op == Op::Permute) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        std::string tok;
        while (ws >> tok) {
          auto gt = tok.find('>');
          if (gt == std::string::npos) fail("PERMUTE token needs from>to");
          pairs.emplace_back(std::stoul(tok.substr(0, gt)), std::stoul(tok.substr(gt + 1)));
        }
        c.permute(std::move(pairs));
      } else if (op == Op::Prep) {
        std::vector<PauliString> gens;
        std::vector<bool> signs;
        std::string tok;
        while (ws >> tok) {
          if (tok[0] != '+' && tok[0] != '-') fail("PREP generator needs a sign");
          signs.push_back(tok[0] == '-');
          auto p = PauliString::from_text(tok.substr(1));
          if (p.n != c.num_qubits) fail("PREP generator width mismatch");
          gens.push_back(std::move(p));
        }
        c.prep(std::move(gens), std::move(signs));
      } else {
        std::vector<std::uint32_t> qs;
        std::uint32_t q;
        while (ws >> q) qs.push_back(q);
        if (is_noise(op))
          c.noise(op, std::move(qs), prob);
        else if (op == Op::MX || op == Op::MZ)
          c.measure(op, std::move(qs));
        else
          c.gate(op, std::move(qs));
      }
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  if (!have_qubits) throw std::runtime_error("circuit parse error: missing qubits line");
  return c;
}

// ---------------------------------------------------------------------------
// Noiseless tableau run.

namespace {

void apply_instruction(StabilizerTableau& t, const Instruction& ins,
                       std::vector<SignBits>& records) {
  using Mode = StabilizerTableau::OutcomeMode;
  switch (ins.op) {
    case Op::RX:
      for (auto q : ins.qubits) t.reset_x(q, Mode::Fresh, nullptr);
      break;
    case Op::RZ:
      for (auto q : ins.qubits) t.reset_z(q, Mode::Fresh, nullptr);
      break;
    case Op::H:
      for (auto q : ins.qubits) t.h(q);
      break;
    case Op::X:
      for (auto q : ins.qubits) t.x(q);
      break;
    case Op::Y:
      for (auto q : ins.qubits) t.y(q);
      break;
    case Op::Z:
      for (auto q : ins.qubits) t.z(q);
      break;
    case Op::S:
      for (auto q : ins.qubits) t.s(q);
      break;
    case Op::CNOT:
      for (std::size_t i = 0; i < ins.qubits.size(); i += 2)
        t.cnot(ins.qubits[i], ins.qubits[i + 1]);
      break;
    case Op::CZ:
      for (std::size_t i = 0; i < ins.qubits.size(); i += 2) t.cz(ins.qubits[i], ins.qubits[i + 1]);
      break;
    case Op::MX:
      for (auto q : ins.qubits) records.push_back(t.measure_x(q, Mode::Fresh, nullptr));
      break;
    case Op::MZ:
      for (auto q : ins.qubits) records.push_back(t.measure_z(q, Mode::Fresh, nullptr));
      break;
    case Op::MPP:
      records.push_back(t.measure_pauli(ins.pauli, Mode::Fresh, nullptr));
      break;
    case Op::Permute:
      t.permute(ins.pairs);
      break;
    case Op::Prep:
      for (auto q : prep_support(ins, t.num_qubits())) t.reset_z(q, Mode::Fresh, nullptr);
      t.prepare_stabilizers(ins.generators, ins.signs);
      break;
    case Op::Tick:
    case Op::XError:
    case Op::ZError:
    case Op::Depolarize1:
    case Op::Depolarize2:
      break;
  }
}

}  // namespace

std::vector<SignBits> symbolic_records(const CliffordCircuit& c) {
  StabilizerTableau t(c.num_qubits);
  std::vector<SignBits> records;
  for (const auto& ins : c.instructions) apply_instruction(t, ins, records);
  return records;
}

CircuitAnalysis analyze(const CliffordCircuit& c) {
  auto records = symbolic_records(c);

  auto parity = [&](const std::vector<std::uint32_t>& recs, const char* what, std::size_t idx) {
    SignBits acc;
    for (auto r : recs) {
      if (r >= records.size())
        throw std::runtime_error(std::string(what) + " " + std::to_string(idx) +
                                 " references a missing measurement record");
      acc.xor_with(records[r]);
    }
    return acc;
  };

  CircuitAnalysis out;
  for (std::size_t i = 0; i < c.detectors.size(); ++i) {
    SignBits p = parity(c.detectors[i], "detector", i);
    if (!p.is_concrete())
      throw std::runtime_error("detector " + std::to_string(i) +
                               " is not deterministic in the noiseless circuit");
    out.detector_reference.push_back(p.constant);
  }
  for (std::size_t i = 0; i < c.observables.size(); ++i) {
    SignBits p = parity(c.observables[i], "observable", i);
    out.observable_deterministic.push_back(p.is_concrete());
    out.observable_reference.push_back(p.is_concrete() && p.constant);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pauli-frame propagation.

FlipSets frame_flips(const CliffordCircuit& c, std::size_t location, const PauliString& error) {
  if (error.n != c.num_qubits) throw std::invalid_argument("pauli width mismatch");
  if (location > c.instructions.size()) throw std::invalid_argument("location out of range");
  gf2::BitVec fx = error.x, fz = error.z;
  gf2::BitVec flipped(c.num_measurements());

  std::size_t rec = 0;
  for (std::size_t i = 0; i < c.instructions.size(); ++i) {
    const Instruction& ins = c.instructions[i];
    if (i < location) {
      rec += records_of(ins);
      continue;
    }
    switch (ins.op) {
      case Op::H:
        for (auto q : ins.qubits) {
          bool xb = fx.get(q), zb = fz.get(q);
          fx.set(q, zb);
          fz.set(q, xb);
        }
        break;
      case Op::S:
        for (auto q : ins.qubits) fz.set(q, fz.get(q) ^ fx.get(q));
        break;
      case Op::CNOT:
        for (std::size_t k = 0; k < ins.qubits.size(); k += 2) {
          auto a = ins.qubits[k], b = ins.qubits[k + 1];
          fx.set(b, fx.get(b) ^ fx.get(a));
          fz.set(a, fz.get(a) ^ fz.get(b));
        }
        break;
      case Op::CZ:
        for (std::size_t k = 0; k < ins.qubits.size(); k += 2) {
          auto a = ins.qubits[k], b = ins.qubits[k + 1];
          bool xa = fx.get(a), xb = fx.get(b);
          fz.set(b, fz.get(b) ^ xa);
          fz.set(a, fz.get(a) ^ xb);
        }
        break;
      case Op::Permute: {
        gf2::BitVec nx = fx, nz = fz;
        for (auto [from, to] : ins.pairs) {
          nx.set(to, fx.get(from));
          nz.set(to, fz.get(from));
        }
        fx = std::move(nx);
        fz = std::move(nz);
        break;
      }
      case Op::RX:
      case Op::RZ:
        for (auto q : ins.qubits) {
          fx.set(q, false);
          fz.set(q, false);
        }
        break;
      case Op::Prep:
        for (auto q : prep_support(ins, c.num_qubits)) {
          fx.set(q, false);
          fz.set(q, false);
        }
        break;
      case Op::MZ:
        for (auto q : ins.qubits) {
          if (fx.get(q)) flipped.set(rec, true);
          ++rec;
        }
        continue;
      case Op::MX:
        for (auto q : ins.qubits) {
          if (fz.get(q)) flipped.set(rec, true);
          ++rec;
        }
        continue;
      case Op::MPP: {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < fx.words().size(); ++w)
          acc ^= (fx.words()[w] & ins.pauli.z.words()[w]) ^ (fz.words()[w] & ins.pauli.x.words()[w]);
        if (std::popcount(acc) % 2) flipped.set(rec, true);
        ++rec;
        continue;
      }
      case Op::X:
      case Op::Y:
      case Op::Z:
      case Op::Tick:
      case Op::XError:
      case Op::ZError:
      case Op::Depolarize1:
      case Op::Depolarize2:
        break;
    }
    rec += records_of(ins);
  }

  FlipSets out;
  auto collect = [&](const std::vector<std::vector<std::uint32_t>>& groups,
                     std::vector<std::uint32_t>& dst) {
    for (std::size_t i = 0; i < groups.size(); ++i) {
      bool parity = false;
      for (auto r : groups[i]) parity ^= flipped.get(r);
      if (parity) dst.push_back(static_cast<std::uint32_t>(i));
    }
  };
  collect(c.detectors, out.detectors);
  collect(c.observables, out.observables);
  return out;
}

// ---------------------------------------------------------------------------
// Hypergraph extraction by a backward signature sweep: sig_x[q] (sig_z[q])
// holds, per detector/observable, whether an X (Z) error on q at the current
// boundary flips it.

std::vector<ChannelTerm> enumerate_error_terms(const CliffordCircuit& c) {
  const std::size_t nd = c.detectors.size(), no = c.observables.size();
  const std::size_t dim = nd + no;
  const std::size_t num_records = c.num_measurements();

  std::vector<gf2::BitVec> record_mask(num_records, gf2::BitVec(dim));
  for (std::size_t i = 0; i < nd; ++i)
    for (auto r : c.detectors[i]) {
      if (r >= num_records) throw std::runtime_error("detector references a missing record");
      record_mask[r].flip(i);
    }
  for (std::size_t i = 0; i < no; ++i)
    for (auto r : c.observables[i]) {
      if (r >= num_records) throw std::runtime_error("observable references a missing record");
      record_mask[r].flip(nd + i);
    }

  std::vector<std::size_t> rec_start(c.instructions.size(), 0);
  std::size_t rec = 0;
  for (std::size_t i = 0; i < c.instructions.size(); ++i) {
    rec_start[i] = rec;
    rec += records_of(c.instructions[i]);
  }

  std::vector<gf2::BitVec> sig_x(c.num_qubits, gf2::BitVec(dim));
  std::vector<gf2::BitVec> sig_z(c.num_qubits, gf2::BitVec(dim));

  auto mechanism_of = [&](const gf2::BitVec& sig, double p) {
    ErrorMechanism m;
    m.probability = p;
    for (std::size_t w = 0; w < sig.words().size(); ++w) {
      std::uint64_t bits = sig.words()[w];
      while (bits) {
        std::size_t b = 64 * w + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (b < nd)
          m.flipped_checks.push_back(static_cast<std::uint32_t>(b));
        else
          m.flipped_observables.push_back(static_cast<std::uint32_t>(b - nd));
      }
    }
    return m;
  };
  auto pauli_sig = [&](std::uint32_t q, int pauli) {  // 1=X, 2=Y, 3=Z
    gf2::BitVec s(dim);
    if (pauli == 1 || pauli == 2) s.xor_with(sig_x[q]);
    if (pauli == 3 || pauli == 2) s.xor_with(sig_z[q]);
    return s;
  };
  auto full_pauli = [&](std::initializer_list<std::pair<std::uint32_t, int>> parts) {
    PauliString p(c.num_qubits);
    for (auto [q, pa] : parts) {
      if (pa == 1 || pa == 2) p.x.set(q, true);
      if (pa == 3 || pa == 2) p.z.set(q, true);
    }
    return p;
  };

  std::vector<std::vector<ChannelTerm>> per_instruction(c.instructions.size());

  for (std::size_t ii = c.instructions.size(); ii-- > 0;) {
    const Instruction& ins = c.instructions[ii];
    switch (ins.op) {
      case Op::MZ:
        for (std::size_t k = 0; k < ins.qubits.size(); ++k)
          sig_x[ins.qubits[k]].xor_with(record_mask[rec_start[ii] + k]);
        break;
      case Op::MX:
        for (std::size_t k = 0; k < ins.qubits.size(); ++k)
          sig_z[ins.qubits[k]].xor_with(record_mask[rec_start[ii] + k]);
        break;
      case Op::MPP:
        for (std::uint32_t q = 0; q < c.num_qubits; ++q) {
          if (ins.pauli.z.get(q)) sig_x[q].xor_with(record_mask[rec_start[ii]]);
          if (ins.pauli.x.get(q)) sig_z[q].xor_with(record_mask[rec_start[ii]]);
        }
        break;
      case Op::RX:
      case Op::RZ:
        for (auto q : ins.qubits) {
          sig_x[q].clear();
          sig_z[q].clear();
        }
        break;
      case Op::Prep:
        for (auto q : prep_support(ins, c.num_qubits)) {
          sig_x[q].clear();
          sig_z[q].clear();
        }
        break;
      case Op::H:
        for (auto q : ins.qubits) std::swap(sig_x[q], sig_z[q]);
        break;
      case Op::S:
        // X before S acts as Y after S; Z is untouched.
        for (auto q : ins.qubits) sig_x[q].xor_with(sig_z[q]);
        break;
      case Op::CNOT:
        for (std::size_t k = 0; k < ins.qubits.size(); k += 2) {
          auto a = ins.qubits[k], b = ins.qubits[k + 1];
          sig_x[a].xor_with(sig_x[b]);
          sig_z[b].xor_with(sig_z[a]);
        }
        break;
      case Op::CZ:
        for (std::size_t k = 0; k < ins.qubits.size(); k += 2) {
          auto a = ins.qubits[k], b = ins.qubits[k + 1];
          sig_x[a].xor_with(sig_z[b]);
          sig_x[b].xor_with(sig_z[a]);
        }
        break;
      case Op::Permute: {
        std::vector<gf2::BitVec> keep_x, keep_z;
        for (auto [from, to] : ins.pairs) {
          (void)from;
          keep_x.push_back(sig_x[to]);
          keep_z.push_back(sig_z[to]);
        }
        for (std::size_t k = 0; k < ins.pairs.size(); ++k) {
          sig_x[ins.pairs[k].first] = std::move(keep_x[k]);
          sig_z[ins.pairs[k].first] = std::move(keep_z[k]);
        }
        break;
      }
      case Op::XError:
        if (ins.probability > 0)
          for (auto q : ins.qubits)
            per_instruction[ii].push_back({static_cast<std::uint32_t>(ii), full_pauli({{q, 1}}),
                                           mechanism_of(pauli_sig(q, 1), ins.probability)});
        break;
      case Op::ZError:
        if (ins.probability > 0)
          for (auto q : ins.qubits)
            per_instruction[ii].push_back({static_cast<std::uint32_t>(ii), full_pauli({{q, 3}}),
                                           mechanism_of(pauli_sig(q, 3), ins.probability)});
        break;
      case Op::Depolarize1:
        if (ins.probability > 0)
          for (auto q : ins.qubits)
            for (int pa : {1, 2, 3})
              per_instruction[ii].push_back({static_cast<std::uint32_t>(ii), full_pauli({{q, pa}}),
                                             mechanism_of(pauli_sig(q, pa), ins.probability / 3)});
        break;
      case Op::Depolarize2:
        if (ins.probability > 0)
          for (std::size_t k = 0; k < ins.qubits.size(); k += 2) {
            auto a = ins.qubits[k], b = ins.qubits[k + 1];
            for (int pa = 0; pa < 4; ++pa)
              for (int pb = 0; pb < 4; ++pb) {
                if (pa == 0 && pb == 0) continue;
                gf2::BitVec sig(dim);
                if (pa) sig.xor_with(pauli_sig(a, pa));
                if (pb) sig.xor_with(pauli_sig(b, pb));
                per_instruction[ii].push_back({static_cast<std::uint32_t>(ii),
                                               full_pauli({{a, pa}, {b, pb}}),
                                               mechanism_of(sig, ins.probability / 15)});
              }
          }
        break;
      case Op::X:
      case Op::Y:
      case Op::Z:
      case Op::Tick:
        break;
    }
  }

  std::vector<ChannelTerm> out;
  for (auto& terms : per_instruction)
    for (auto& t : terms) out.push_back(std::move(t));
  return out;
}

DecodingHypergraph extract_hypergraph(const CliffordCircuit& c) {
  analyze(c);  // rejects non-deterministic detectors/observables
  std::vector<ErrorMechanism> mechanisms;
  for (auto& term : enumerate_error_terms(c)) mechanisms.push_back(std::move(term.mechanism));
  return DecodingHypergraph::from_mechanisms(c.detectors.size(), c.observables.size(),
                                             std::move(mechanisms));
}

}  // namespace corrdec
