#include "corrdec/surface.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>

namespace corrdec::surface {

namespace {

void require_distance(int d) {
  if (d < 3 || d % 2 == 0) throw std::invalid_argument("code distance must be odd and >= 3");
}

}  // namespace

Layout Layout::make(int d) {
  require_distance(d);
  Layout lay;
  lay.d = d;
  for (int r = 0; r <= d; ++r) {
    for (int c = 0; c <= d; ++c) {
      bool is_x = (r + c) % 2 == 0;
      bool top_bottom = r == 0 || r == d;
      bool left_right = c == 0 || c == d;
      if (top_bottom && left_right) continue;                // corners
      if (top_bottom && !is_x) continue;                     // X boundary rows
      if (left_right && is_x) continue;                      // Z boundary columns
      Plaquette p{is_x, r, c, {}};
      for (auto [dr, dc] : {std::pair{-1, -1}, {-1, 0}, {0, -1}, {0, 0}}) {
        int rr = r + dr, cc = c + dc;
        if (rr >= 0 && rr < d && cc >= 0 && cc < d)
          p.data.push_back(static_cast<std::uint32_t>(rr * d + cc));
      }
      lay.plaquettes.push_back(std::move(p));
    }
  }
  return lay;
}

std::vector<std::uint32_t> Layout::logical_x() const {
  std::vector<std::uint32_t> qs;
  for (int r = 0; r < d; ++r) qs.push_back(static_cast<std::uint32_t>(r * d));
  return qs;
}

std::vector<std::uint32_t> Layout::logical_z() const {
  std::vector<std::uint32_t> qs;
  for (int c = 0; c < d; ++c) qs.push_back(static_cast<std::uint32_t>(c));
  return qs;
}

PauliString Layout::plaquette_operator(std::size_t i, std::size_t total_qubits,
                                       std::uint32_t offset) const {
  const Plaquette& p = plaquettes.at(i);
  PauliString op(total_qubits);
  for (auto q : p.data) (p.is_x ? op.x : op.z).set(offset + q, true);
  return op;
}

PauliString Layout::logical_operator(bool x_type, std::size_t total_qubits,
                                     std::uint32_t offset) const {
  PauliString op(total_qubits);
  for (auto q : x_type ? logical_x() : logical_z()) (x_type ? op.x : op.z).set(offset + q, true);
  return op;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Layout::rotation_pairs(
    std::uint32_t offset) const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      pairs.emplace_back(offset + r * d + c, offset + c * d + (d - 1 - r));
  return pairs;
}

int Layout::schedule_neighbor(std::size_t i, int step) const {
  const Plaquette& p = plaquettes.at(i);
  static constexpr std::pair<int, int> kZOrder[4] = {{-1, -1}, {-1, 0}, {0, -1}, {0, 0}};
  static constexpr std::pair<int, int> kXOrder[4] = {{-1, -1}, {0, -1}, {-1, 0}, {0, 0}};
  auto [dr, dc] = (p.is_x ? kXOrder : kZOrder)[step];
  int rr = p.r + dr, cc = p.c + dc;
  if (rr < 0 || rr >= d || cc < 0 || cc >= d) return -1;
  return rr * d + cc;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint32_t> iota_range(std::uint32_t start, std::uint32_t count) {
  std::vector<std::uint32_t> v(count);
  for (std::uint32_t i = 0; i < count; ++i) v[i] = start + i;
  return v;
}

// Solves A x = b for many right-hand sides with a single elimination pass.
std::vector<std::optional<gf2::BitVec>> solve_many(gf2::BitMatrix a,
                                                   const std::vector<gf2::BitVec>& bs) {
  std::size_t rows = a.rows(), cols = a.cols(), nb = bs.size();
  gf2::BitMatrix bm(rows, nb);
  for (std::size_t j = 0; j < nb; ++j)
    for (std::size_t r = 0; r < rows; ++r)
      if (bs[j].get(r)) bm.set(r, j, true);

  std::vector<std::size_t> pivot_row(cols, SIZE_MAX);
  std::size_t prow = 0;
  for (std::size_t col = 0; col < cols && prow < rows; ++col) {
    std::size_t hit = SIZE_MAX;
    for (std::size_t r = prow; r < rows; ++r)
      if (a.get(r, col)) {
        hit = r;
        break;
      }
    if (hit == SIZE_MAX) continue;
    a.swap_rows(hit, prow);
    bm.swap_rows(hit, prow);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != prow && a.get(r, col)) {
        a.xor_row(r, prow);
        bm.xor_row(r, prow);
      }
    pivot_row[col] = prow;
    ++prow;
  }

  std::vector<std::optional<gf2::BitVec>> out(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    bool ok = true;
    for (std::size_t r = prow; r < rows && ok; ++r)
      if (bm.get(r, j)) ok = false;
    if (!ok) continue;
    gf2::BitVec x(cols);
    for (std::size_t col = 0; col < cols; ++col)
      if (pivot_row[col] != SIZE_MAX && bm.get(pivot_row[col], j)) x.set(col, true);
    out[j] = std::move(x);
  }
  return out;
}

void conj_forward(PauliString& op, const Instruction& ins) {
  switch (ins.op) {
    case Op::H:
      for (auto q : ins.qubits) {
        bool xb = op.x.get(q), zb = op.z.get(q);
        op.x.set(q, zb);
        op.z.set(q, xb);
      }
      break;
    case Op::CNOT:
      for (std::size_t k = 0; k < ins.qubits.size(); k += 2) {
        auto a = ins.qubits[k], b = ins.qubits[k + 1];
        op.x.set(b, op.x.get(b) ^ op.x.get(a));
        op.z.set(a, op.z.get(a) ^ op.z.get(b));
      }
      break;
    case Op::Permute: {
      gf2::BitVec nx = op.x, nz = op.z;
      for (auto [from, to] : ins.pairs) {
        nx.set(to, op.x.get(from));
        nz.set(to, op.z.get(from));
      }
      op.x = std::move(nx);
      op.z = std::move(nz);
      break;
    }
    default:
      break;  // Pauli layers and noise do not move Pauli operators
  }
}

// A stabilizer with a known value at the current circuit boundary: either a
// preparation generator (record < 0) or a measured operator tied to a record.
// Operators are kept conjugated forward to the boundary as the circuit grows.
struct KnownStabilizer {
  PauliString op;
  std::int64_t record = -1;
};

// A measurement group reporting the value of `op` as the parity of `records`.
struct StabilizerGroup {
  PauliString op;
  std::vector<std::uint32_t> records;
  std::uint32_t block = 0;
};

// Declares a detector for each group whose operator lies in the span of the
// known stabilizers: the detector is the group's records plus the records of
// the known stabilizers in the (unique, since the knowns are independent)
// product. Groups outside the span measure genuinely random values and yield
// no detector.
void derive_detectors(CliffordCircuit& c, BlockAssignment& blocks,
                      const std::vector<KnownStabilizer>& known,
                      const std::vector<StabilizerGroup>& groups) {
  const std::size_t nq = c.num_qubits;
  gf2::BitMatrix a(2 * nq, known.size());
  for (std::size_t j = 0; j < known.size(); ++j)
    for (std::size_t q = 0; q < nq; ++q) {
      if (known[j].op.x.get(q)) a.set(q, j, true);
      if (known[j].op.z.get(q)) a.set(nq + q, j, true);
    }
  std::vector<gf2::BitVec> rhs;
  for (const auto& g : groups) {
    gf2::BitVec v(2 * nq);
    for (std::size_t q = 0; q < nq; ++q) {
      if (g.op.x.get(q)) v.set(q, true);
      if (g.op.z.get(q)) v.set(nq + q, true);
    }
    rhs.push_back(std::move(v));
  }

  auto sols = solve_many(std::move(a), rhs);
  for (std::size_t j = 0; j < groups.size(); ++j) {
    if (!sols[j]) continue;
    std::vector<std::uint32_t> det = groups[j].records;
    for (std::size_t k = 0; k < known.size(); ++k)
      if (sols[j]->get(k) && known[k].record >= 0)
        det.push_back(static_cast<std::uint32_t>(known[k].record));
    std::sort(det.begin(), det.end());
    c.detectors.push_back(std::move(det));
    blocks.check_block.push_back(groups[j].block);
  }
}

// One ancilla-based syndrome-extraction round over the given code blocks.
// Moments: ancilla reset, four CNOT steps, ancilla measurement; depolarizing
// idle noise on unaddressed qubits in every moment when p > 0. Returns the
// measurement record of each (block, plaquette).
struct CodeBlock {
  std::uint32_t data0, anc0;
};

std::vector<std::vector<std::uint32_t>> syndrome_round(CliffordCircuit& c, const Layout& lay,
                                                       const std::vector<CodeBlock>& blocks,
                                                       double p) {
  const std::size_t np = lay.plaquettes.size();
  const std::size_t nd = lay.num_data();
  std::vector<std::uint32_t> all;
  for (const auto& b : blocks) {
    auto d = iota_range(b.data0, static_cast<std::uint32_t>(nd));
    auto a = iota_range(b.anc0, static_cast<std::uint32_t>(np));
    all.insert(all.end(), d.begin(), d.end());
    all.insert(all.end(), a.begin(), a.end());
  }

  // reset moment
  std::vector<std::uint32_t> rx, rz;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < np; ++i)
      (lay.plaquettes[i].is_x ? rx : rz).push_back(b.anc0 + static_cast<std::uint32_t>(i));
  c.gate(Op::RX, rx);
  c.gate(Op::RZ, rz);
  if (p > 0) {
    c.noise(Op::ZError, rx, 2 * p / 3);
    c.noise(Op::XError, rz, 2 * p / 3);
    std::vector<std::uint32_t> idle;
    for (const auto& b : blocks) {
      auto d = iota_range(b.data0, static_cast<std::uint32_t>(nd));
      idle.insert(idle.end(), d.begin(), d.end());
    }
    c.noise(Op::Depolarize1, idle, p);
  }
  c.tick();

  // four coupling steps
  for (int step = 0; step < 4; ++step) {
    std::vector<std::uint32_t> pairs;
    for (const auto& b : blocks) {
      for (std::size_t i = 0; i < np; ++i) {
        int nb = lay.schedule_neighbor(i, step);
        if (nb < 0) continue;
        std::uint32_t data = b.data0 + static_cast<std::uint32_t>(nb);
        std::uint32_t anc = b.anc0 + static_cast<std::uint32_t>(i);
        if (lay.plaquettes[i].is_x) {
          pairs.push_back(anc);
          pairs.push_back(data);
        } else {
          pairs.push_back(data);
          pairs.push_back(anc);
        }
      }
    }
    {
      std::set<std::uint32_t> seen(pairs.begin(), pairs.end());
      if (seen.size() != pairs.size())
        throw std::logic_error("syndrome schedule uses a qubit twice in one step");
    }
    c.gate(Op::CNOT, pairs);
    if (p > 0) {
      c.noise(Op::Depolarize2, pairs, p);
      std::vector<std::uint32_t> idle;
      std::set<std::uint32_t> busy(pairs.begin(), pairs.end());
      for (auto q : all)
        if (!busy.count(q)) idle.push_back(q);
      c.noise(Op::Depolarize1, idle, p);
    }
    c.tick();
  }

  // measurement moment
  if (p > 0) {
    c.noise(Op::ZError, rx, 2 * p / 3);
    c.noise(Op::XError, rz, 2 * p / 3);
    std::vector<std::uint32_t> idle;
    for (const auto& b : blocks) {
      auto d = iota_range(b.data0, static_cast<std::uint32_t>(nd));
      idle.insert(idle.end(), d.begin(), d.end());
    }
    c.noise(Op::Depolarize1, idle, p);
  }
  std::vector<std::vector<std::uint32_t>> records(blocks.size(), std::vector<std::uint32_t>(np));
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t i = 0; i < np; ++i) {
      std::uint32_t anc = blocks[b].anc0 + static_cast<std::uint32_t>(i);
      records[b][i] = c.measure(lay.plaquettes[i].is_x ? Op::MX : Op::MZ, {anc});
    }
  c.tick();
  return records;
}

}  // namespace

// ---------------------------------------------------------------------------

BuiltCircuit build_bell_perfect(int d, double p, double f_b, Basis basis) {
  require_distance(d);
  if (!(p >= 0 && p < 0.5)) throw std::invalid_argument("p must be in [0, 0.5)");
  if (!(f_b >= 0 && f_b <= 1)) throw std::invalid_argument("f_b must be in [0, 1]");
  Layout lay = Layout::make(d);
  const auto nd = static_cast<std::uint32_t>(lay.num_data());
  const std::size_t nq = 2 * static_cast<std::size_t>(nd);

  CliffordCircuit c(nq);
  for (int block = 0; block < 2; ++block) {
    std::uint32_t off = block * nd;
    std::vector<PauliString> gens;
    for (std::size_t i = 0; i < lay.plaquettes.size(); ++i)
      gens.push_back(lay.plaquette_operator(i, nq, off));
    gens.push_back(lay.logical_operator(block == 0, nq, off));  // X_L or Z_L
    c.prep(std::move(gens), std::vector<bool>(lay.plaquettes.size() + 1, false));
  }
  auto everything = iota_range(0, static_cast<std::uint32_t>(nq));
  if (p * f_b > 0) {
    c.noise(Op::XError, everything, p * f_b);
    c.noise(Op::ZError, everything, p * f_b);
  }
  c.tick();
  std::vector<std::uint32_t> pairs;
  for (std::uint32_t i = 0; i < nd; ++i) {
    pairs.push_back(i);
    pairs.push_back(nd + i);
  }
  c.gate(Op::CNOT, pairs);
  if (p * (1 - f_b) > 0) {
    c.noise(Op::XError, everything, p * (1 - f_b));
    c.noise(Op::ZError, everything, p * (1 - f_b));
  }
  c.tick();

  bool x_basis = basis == Basis::X;
  std::uint32_t rec0 = c.measure(x_basis ? Op::MX : Op::MZ, everything);

  BlockAssignment blocks;
  blocks.num_blocks = 2;
  for (int block = 0; block < 2; ++block) {
    std::uint32_t off = block * nd;
    for (const auto& plq : lay.plaquettes) {
      if (plq.is_x != x_basis) continue;
      std::vector<std::uint32_t> det;
      for (auto q : plq.data) det.push_back(rec0 + off + q);
      c.detectors.push_back(std::move(det));
      blocks.check_block.push_back(block);
    }
    std::vector<std::uint32_t> obs;
    for (auto q : x_basis ? lay.logical_x() : lay.logical_z()) obs.push_back(rec0 + off + q);
    c.observables.push_back(std::move(obs));
    blocks.observable_block.push_back(block);
  }
  return {std::move(c), std::move(blocks)};
}

BuiltCircuit build_bell_noisy(int d, double p, Basis basis) {
  require_distance(d);
  if (!(p >= 0 && p < 0.5)) throw std::invalid_argument("p must be in [0, 0.5)");
  Layout lay = Layout::make(d);
  const auto nd = static_cast<std::uint32_t>(lay.num_data());
  const auto np = static_cast<std::uint32_t>(lay.plaquettes.size());
  const std::uint32_t stride = nd + np;
  const std::vector<CodeBlock> cb = {{0, nd}, {stride, stride + nd}};
  CliffordCircuit c(2 * stride);

  // physical preparation: control |+>^n, target |0>^n
  auto control_data = iota_range(cb[0].data0, nd);
  auto target_data = iota_range(cb[1].data0, nd);
  c.gate(Op::RX, control_data);
  c.gate(Op::RZ, target_data);
  if (p > 0) {
    c.noise(Op::ZError, control_data, 2 * p / 3);
    c.noise(Op::XError, target_data, 2 * p / 3);
  }
  c.tick();

  // known stabilizers at the current boundary: the product-state preparation
  BlockAssignment blocks;
  blocks.num_blocks = 2;
  std::vector<KnownStabilizer> frontier;
  for (auto q : control_data) {
    PauliString op(c.num_qubits);
    op.x.set(q, true);
    frontier.push_back({std::move(op), -1});
  }
  for (auto q : target_data) {
    PauliString op(c.num_qubits);
    op.z.set(q, true);
    frontier.push_back({std::move(op), -1});
  }
  auto do_round = [&]() {
    auto recs = syndrome_round(c, lay, cb, p);
    std::vector<StabilizerGroup> groups;
    std::vector<KnownStabilizer> next;
    for (std::uint32_t b = 0; b < 2; ++b)
      for (std::uint32_t i = 0; i < np; ++i) {
        PauliString op = lay.plaquette_operator(i, c.num_qubits, cb[b].data0);
        groups.push_back({op, {recs[b][i]}, b});
        next.push_back({std::move(op), recs[b][i]});
      }
    derive_detectors(c, blocks, frontier, groups);
    frontier = std::move(next);
    return recs;
  };
  for (int t = 0; t < d; ++t) do_round();

  // transversal CNOT moment
  std::vector<std::uint32_t> pairs;
  for (std::uint32_t i = 0; i < nd; ++i) {
    pairs.push_back(cb[0].data0 + i);
    pairs.push_back(cb[1].data0 + i);
  }
  c.gate(Op::CNOT, pairs);
  for (auto& k : frontier) conj_forward(k.op, c.instructions.back());
  if (p > 0) {
    c.noise(Op::Depolarize2, pairs, p);
    std::vector<std::uint32_t> idle;
    for (int b = 0; b < 2; ++b) {
      auto a = iota_range(cb[b].anc0, np);
      idle.insert(idle.end(), a.begin(), a.end());
    }
    c.noise(Op::Depolarize1, idle, p);
  }
  c.tick();

  for (int t = 0; t < d; ++t) do_round();

  // noisy transversal readout; each readout-basis plaquette's data parity is
  // compared against the last syndrome round
  bool x_basis = basis == Basis::X;
  std::vector<std::uint32_t> all_data = control_data;
  all_data.insert(all_data.end(), target_data.begin(), target_data.end());
  if (p > 0) c.noise(x_basis ? Op::ZError : Op::XError, all_data, 2 * p / 3);
  std::uint32_t rec_data = c.measure(x_basis ? Op::MX : Op::MZ, all_data);
  {
    std::vector<StabilizerGroup> groups;
    for (std::uint32_t b = 0; b < 2; ++b)
      for (std::uint32_t i = 0; i < np; ++i) {
        if (lay.plaquettes[i].is_x != x_basis) continue;
        StabilizerGroup g{lay.plaquette_operator(i, c.num_qubits, cb[b].data0), {}, b};
        for (auto q : lay.plaquettes[i].data) g.records.push_back(rec_data + b * nd + q);
        groups.push_back(std::move(g));
      }
    derive_detectors(c, blocks, frontier, groups);
  }

  for (std::uint32_t b = 0; b < 2; ++b) {
    std::vector<std::uint32_t> obs;
    for (auto q : x_basis ? lay.logical_x() : lay.logical_z()) obs.push_back(rec_data + b * nd + q);
    c.observables.push_back(std::move(obs));
    blocks.observable_block.push_back(b);
  }
  return {std::move(c), std::move(blocks)};
}

// ---------------------------------------------------------------------------

BuiltCircuit build_deep_clifford(int d, double n_r, double p, int layers, std::uint64_t seed) {
  require_distance(d);
  if (!(p >= 0 && p < 0.5)) throw std::invalid_argument("p must be in [0, 0.5)");
  if (layers < 1) throw std::invalid_argument("layers must be >= 1");
  int rounds_per_layer = 0, layers_per_round = 0;
  if (n_r >= 1) {
    rounds_per_layer = static_cast<int>(std::llround(n_r));
    if (std::abs(n_r - rounds_per_layer) > 1e-9)
      throw std::invalid_argument("n_r >= 1 must be an integer");
  } else {
    if (n_r <= 0) throw std::invalid_argument("n_r must be positive");
    layers_per_round = static_cast<int>(std::llround(1 / n_r));
    if (std::abs(1 / n_r - layers_per_round) > 1e-9 || layers_per_round < 2)
      throw std::invalid_argument("fractional n_r must be the inverse of an integer");
  }

  Layout lay = Layout::make(d);
  const auto nd = static_cast<std::uint32_t>(lay.num_data());
  const auto np = static_cast<std::uint32_t>(lay.plaquettes.size());
  const std::uint32_t stride = nd + np;
  const int kCodes = 4;
  std::vector<CodeBlock> cb;
  for (int b = 0; b < kCodes; ++b)
    cb.push_back({static_cast<std::uint32_t>(b) * stride,
                  static_cast<std::uint32_t>(b) * stride + nd});
  const std::size_t nq = static_cast<std::size_t>(kCodes) * stride;
  CliffordCircuit c(nq);
  Rng rng(seed);

  // noiseless |+L> preparation per code
  for (int b = 0; b < kCodes; ++b) {
    std::vector<PauliString> gens;
    for (std::size_t i = 0; i < np; ++i) gens.push_back(lay.plaquette_operator(i, nq, cb[b].data0));
    gens.push_back(lay.logical_operator(true, nq, cb[b].data0));
    c.prep(std::move(gens), std::vector<bool>(np + 1, false));
  }
  c.tick();

  // the four logical X operators, conjugated forward through the gate layers
  std::vector<PauliString> logicals;
  for (int b = 0; b < kCodes; ++b) logicals.push_back(lay.logical_operator(true, nq, cb[b].data0));

  // known stabilizers at the current boundary, starting from the preparation
  // generators and conjugated through the gate layers alongside the logicals
  BlockAssignment blocks;
  blocks.num_blocks = kCodes;
  std::vector<KnownStabilizer> frontier;
  for (int b = 0; b < kCodes; ++b) {
    for (std::uint32_t i = 0; i < np; ++i)
      frontier.push_back({lay.plaquette_operator(i, nq, cb[b].data0), -1});
    frontier.push_back({lay.logical_operator(true, nq, cb[b].data0), -1});
  }

  auto track = [&](const Instruction& ins) {
    for (auto& op : logicals) conj_forward(op, ins);
    for (auto& k : frontier) conj_forward(k.op, ins);
  };

  // round schedule, with the final round always present and noiseless
  std::vector<int> rounds_after(layers, 0);
  for (int layer = 0; layer < layers; ++layer) {
    if (rounds_per_layer > 0)
      rounds_after[layer] = rounds_per_layer;
    else if ((layer + 1) % layers_per_round == 0)
      rounds_after[layer] = 1;
  }
  if (rounds_after[layers - 1] == 0) rounds_after[layers - 1] = 1;
  int total_rounds = 0;
  for (int r : rounds_after) total_rounds += r;

  auto everything = iota_range(0, static_cast<std::uint32_t>(nq));
  auto do_round = [&](double round_p) {
    auto recs = syndrome_round(c, lay, cb, round_p);
    std::vector<StabilizerGroup> groups;
    std::vector<KnownStabilizer> next;
    for (std::uint32_t b = 0; b < kCodes; ++b)
      for (std::uint32_t i = 0; i < np; ++i) {
        PauliString op = lay.plaquette_operator(i, nq, cb[b].data0);
        groups.push_back({op, {recs[b][i]}, b});
        next.push_back({std::move(op), recs[b][i]});
      }
    derive_detectors(c, blocks, frontier, groups);
    frontier = std::move(next);
  };
  int emitted = 0;
  for (int layer = 0; layer < layers; ++layer) {
    // transversal single-qubit gate per code
    for (int b = 0; b < kCodes; ++b) {
      switch (rng() % 4) {
        case 0: {  // H_L: physical H everywhere, then the noiseless rotation
          c.gate(Op::H, iota_range(cb[b].data0, nd));
          track(c.instructions.back());
          c.permute(lay.rotation_pairs(cb[b].data0));
          track(c.instructions.back());
          break;
        }
        case 1: {  // X_L
          std::vector<std::uint32_t> qs;
          for (auto q : lay.logical_x()) qs.push_back(cb[b].data0 + q);
          c.gate(Op::X, qs);
          break;
        }
        case 2: {  // Y_L = X_L Z_L
          std::vector<std::uint32_t> xs, zs;
          for (auto q : lay.logical_x()) xs.push_back(cb[b].data0 + q);
          for (auto q : lay.logical_z()) zs.push_back(cb[b].data0 + q);
          c.gate(Op::X, xs);
          c.gate(Op::Z, zs);
          break;
        }
        case 3: {  // Z_L
          std::vector<std::uint32_t> qs;
          for (auto q : lay.logical_z()) qs.push_back(cb[b].data0 + q);
          c.gate(Op::Z, qs);
          break;
        }
      }
    }
    if (p > 0) c.noise(Op::Depolarize1, everything, p);
    c.tick();

    // random pairing into two transversal CNOTs
    std::array<int, 4> order = {0, 1, 2, 3};
    for (int i = 3; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
    std::vector<std::uint32_t> pairs;
    for (int pair = 0; pair < 2; ++pair) {
      int ctrl = order[2 * pair], tgt = order[2 * pair + 1];
      for (std::uint32_t i = 0; i < nd; ++i) {
        pairs.push_back(cb[ctrl].data0 + i);
        pairs.push_back(cb[tgt].data0 + i);
      }
    }
    c.gate(Op::CNOT, pairs);
    track(c.instructions.back());
    if (p > 0) {
      c.noise(Op::Depolarize2, pairs, p);
      std::vector<std::uint32_t> idle;
      for (int b = 0; b < kCodes; ++b) {
        auto a = iota_range(cb[b].anc0, np);
        idle.insert(idle.end(), a.begin(), a.end());
      }
      c.noise(Op::Depolarize1, idle, p);
    }
    c.tick();

    for (int r = 0; r < rounds_after[layer]; ++r) {
      ++emitted;
      do_round(emitted == total_rounds ? 0.0 : p);
    }
  }

  // noiseless logical readout
  std::vector<std::uint32_t> obs_records;
  for (int b = 0; b < kCodes; ++b) obs_records.push_back(c.measure_product(logicals[b]));

  for (std::uint32_t b = 0; b < kCodes; ++b) {
    c.observables.push_back({obs_records[b]});
    blocks.observable_block.push_back(b);
  }
  return {std::move(c), std::move(blocks)};
}

}  // namespace corrdec::surface
