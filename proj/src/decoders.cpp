#include "corrdec/decoders.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace corrdec {

namespace {

// Compares two configurations as sorted fired-index sequences.
bool lex_less(const gf2::BitVec& a, const gf2::BitVec& b) {
  std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool ba = a.get(i), bb = b.get(i);
    if (ba != bb) return ba;  // the one firing the smaller index first wins,
  }                           // and a strict prefix fires `i` where the longer
  return false;               // set does not... both orderings agree: set-bit
}                             // first at the lowest differing index is smaller

struct MleSearch {
  const DecodingHypergraph& h;
  std::size_t num_mech, num_checks;
  std::vector<double> cost;                                // > 0 per flip
  std::vector<bool> default_fired;                         // p > 0.5
  const std::vector<std::vector<std::uint32_t>>& incidence;  // check -> mechs

  gf2::BitVec flips;     // current flip set relative to defaults
  gf2::BitVec residual;  // syndrome still to explain
  std::vector<bool> banned;
  double current_cost = 0;

  bool have_best = false;
  gf2::BitVec best_config;
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t nodes = 0;

  explicit MleSearch(const DecodingHypergraph& hh)
      : h(hh),
        num_mech(hh.num_mechanisms()),
        num_checks(hh.num_checks()),
        incidence(hh.check_incidence()),
        flips(hh.num_mechanisms()),
        residual(hh.num_checks()),
        banned(hh.num_mechanisms(), false) {
    cost.resize(num_mech);
    default_fired.resize(num_mech);
    for (std::size_t j = 0; j < num_mech; ++j) {
      double p = h.mechanisms()[j].probability;
      cost[j] = std::abs(std::log((1 - p) / p));
      default_fired[j] = p > 0.5;
    }
    build_group_tables();
    gf2::BitVec defaults(num_mech);
    for (std::size_t j = 0; j < num_mech; ++j) defaults.set(j, default_fired[j]);
    default_syndrome = h.syndrome_of({defaults}).bits;
  }

  // Syndrome produced by the default firing set; per-call residuals are
  // taken relative to it.
  gf2::BitVec default_syndrome;

  // Clears all per-call state so the instance can decode another syndrome.
  void reset(const Syndrome& s) {
    if (s.bits.size() != num_checks) throw std::invalid_argument("syndrome width mismatch");
    flips = gf2::BitVec(num_mech);
    residual = s.bits;
    residual.xor_with(default_syndrome);
    std::fill(banned.begin(), banned.end(), false);
    current_cost = 0;
    have_best = false;
    best_cost = std::numeric_limits<double>::infinity();
    nodes = 0;
    sync_group_state();
  }

  DecodeOutcome run(const Syndrome& s, std::vector<std::uint8_t>& blocked) {
    reset(s);
    seed_greedy();
    if (std::getenv("MLE_DEBUG"))
      std::fprintf(stderr, "[mle] seed=%.4f group=%.4f pack=%.4f\n", best_cost, group_bound(),
                   completion_bound(blocked));
    dfs(blocked);
    if (!have_best) throw std::runtime_error("syndrome is not achievable");
    DecodeOutcome out;
    out.configuration.fired = best_config;
    out.predicted_flips = h.observable_flips(out.configuration);
    out.nodes_expanded = nodes;
    return out;
  }

  // Checks partitioned into groups of at most kGroupBits, with an exact
  // min-cost table per group over all of its sub-syndromes. Each mechanism's
  // cost is shared across the groups it touches, so the per-group minima sum
  // to an admissible completion bound that respects parity, not just coverage.
  static constexpr std::size_t kGroupBits = 16;
  std::size_t num_groups = 0;
  std::vector<std::vector<double>> group_table;  // 2^|group| entries each
  std::vector<std::uint32_t> group_of, bit_of;   // per check
  std::vector<std::uint32_t> group_state;        // residual restricted to each group

  // Groups checks so that as many mechanisms as possible stay within one
  // group: greedy merging of the pair of groups spanned by the most
  // mechanism weight, while both fit in kGroupBits bits.
  void assign_groups() {
    std::vector<std::vector<std::uint32_t>> members(num_checks);
    std::vector<std::vector<double>> span(num_checks, std::vector<double>(num_checks, 0));
    for (std::uint32_t c = 0; c < num_checks; ++c) members[c] = {c};
    for (std::size_t j = 0; j < num_mech; ++j) {
      const auto& checks = h.mechanisms()[j].flipped_checks;
      for (std::size_t a = 0; a < checks.size(); ++a)
        for (std::size_t b = a + 1; b < checks.size(); ++b) {
          span[checks[a]][checks[b]] += cost[j];
          span[checks[b]][checks[a]] += cost[j];
        }
    }
    while (true) {
      double best_w = 0;
      std::uint32_t best_a = 0, best_b = 0;
      for (std::uint32_t a = 0; a < num_checks; ++a) {
        if (members[a].empty()) continue;
        for (std::uint32_t b = a + 1; b < num_checks; ++b) {
          if (members[b].empty() || members[a].size() + members[b].size() > kGroupBits) continue;
          if (span[a][b] > best_w) {
            best_w = span[a][b];
            best_a = a;
            best_b = b;
          }
        }
      }
      if (best_w <= 0) break;
      for (std::uint32_t c = 0; c < num_checks; ++c) {
        span[best_a][c] += span[best_b][c];
        span[c][best_a] += span[c][best_b];
        span[best_b][c] = span[c][best_b] = 0;
      }
      members[best_a].insert(members[best_a].end(), members[best_b].begin(),
                             members[best_b].end());
      members[best_b].clear();
    }
    // Pack remaining singletons/groups together where capacity allows.
    std::vector<std::vector<std::uint32_t>> packed;
    for (auto& m : members) {
      if (m.empty()) continue;
      bool placed = false;
      for (auto& grp : packed)
        if (grp.size() + m.size() <= kGroupBits) {
          grp.insert(grp.end(), m.begin(), m.end());
          placed = true;
          break;
        }
      if (!placed) packed.push_back(m);
    }
    num_groups = packed.size();
    group_of.resize(num_checks);
    bit_of.resize(num_checks);
    for (std::uint32_t g = 0; g < packed.size(); ++g)
      for (std::uint32_t k = 0; k < packed[g].size(); ++k) {
        group_of[packed[g][k]] = g;
        bit_of[packed[g][k]] = k;
      }
  }

  void build_group_tables() {
    if (num_checks == 0 || num_mech == 0) return;
    assign_groups();
    group_state.assign(num_groups, 0);
    std::vector<std::vector<std::uint32_t>> masks(num_mech,
                                                  std::vector<std::uint32_t>(num_groups, 0));
    std::vector<std::vector<std::uint32_t>> touched(num_mech);
    for (std::size_t j = 0; j < num_mech; ++j) {
      for (auto c : h.mechanisms()[j].flipped_checks)
        masks[j][group_of[c]] |= 1u << bit_of[c];
      for (std::uint32_t g = 0; g < num_groups; ++g)
        if (masks[j][g]) touched[j].push_back(g);
    }
    std::vector<std::uint32_t> group_size(num_groups, 0);
    for (std::size_t c = 0; c < num_checks; ++c)
      group_size[group_of[c]] = std::max(group_size[group_of[c]], bit_of[c] + 1);

    // Any nonnegative split of each mechanism's cost across the groups it
    // touches yields an admissible bound, so the split is tuned iteratively:
    // groups whose shortest paths actually use a mechanism receive more of
    // its cost, and the highest-scoring tables are kept.
    std::vector<std::vector<double>> share(num_mech);
    for (std::size_t j = 0; j < num_mech; ++j)
      share[j].assign(touched[j].size(), touched[j].empty() ? 0 : cost[j] / touched[j].size());

    const double inf = std::numeric_limits<double>::infinity();
    bool cross = false;
    for (std::size_t j = 0; j < num_mech; ++j) cross = cross || touched[j].size() > 1;
    const int rounds = cross ? 8 : 1;
    double best_score = -inf;
    std::vector<std::vector<double>> tables(num_groups);
    std::vector<std::vector<double>> usage(num_mech);  // per (mechanism, touched group)

    for (int round = 0; round < rounds; ++round) {
      for (std::size_t j = 0; j < num_mech; ++j) usage[j].assign(touched[j].size(), 0.0);
      double score = 0;
      for (std::size_t g = 0; g < num_groups; ++g) {
        // distinct masks within the group, each at the cheapest share; credit
        // usage to the mechanism providing that cheapest share
        std::unordered_map<std::uint32_t, std::pair<double, std::uint32_t>> cheapest;
        for (std::size_t j = 0; j < num_mech; ++j) {
          for (std::size_t t = 0; t < touched[j].size(); ++t) {
            if (touched[j][t] != g) continue;
            auto [it, fresh] =
                cheapest.try_emplace(masks[j][g], std::make_pair(share[j][t], std::uint32_t(j)));
            if (!fresh && share[j][t] < it->second.first)
              it->second = {share[j][t], std::uint32_t(j)};
          }
        }
        struct Edge {
          std::uint32_t mask, mech;
          double weight;
        };
        std::vector<Edge> edges;
        edges.reserve(cheapest.size());
        for (const auto& [mask, mw] : cheapest) edges.push_back({mask, mw.second, mw.first});
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return a.mask < b.mask; });

        auto& dist = tables[g];
        dist.assign(std::size_t{1} << group_size[g], inf);
        dist[0] = 0;
        std::vector<std::uint32_t> via(dist.size(), UINT32_MAX);  // edge index into `edges`
        using Item = std::pair<double, std::uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
        queue.emplace(0.0, 0);
        // states are weighted by how likely they are to arise as residuals:
        // sparse sub-syndromes dominate, so weight decays with popcount
        auto state_weight = [](std::uint32_t s) {
          double w = 1;
          for (int b = std::popcount(s); b > 0; --b) w *= 0.15;
          return w;
        };
        while (!queue.empty()) {
          auto [d, s] = queue.top();
          queue.pop();
          if (d > dist[s]) continue;
          if (via[s] != UINT32_MAX) {
            const Edge& e = edges[via[s]];
            for (std::size_t t = 0; t < touched[e.mech].size(); ++t)
              if (touched[e.mech][t] == g) usage[e.mech][t] += state_weight(s);
          }
          for (std::uint32_t ei = 0; ei < edges.size(); ++ei) {
            std::uint32_t next = s ^ edges[ei].mask;
            if (d + edges[ei].weight < dist[next]) {
              dist[next] = d + edges[ei].weight;
              via[next] = ei;
              queue.emplace(dist[next], next);
            }
          }
        }
        for (std::uint32_t s = 0; s < dist.size(); ++s)
          if (dist[s] < inf) score += state_weight(s) * dist[s];
      }
      if (std::getenv("MLE_DEBUG"))
        std::fprintf(stderr, "[mle] share round %d score %.1f\n", round, score);
      if (score > best_score) {
        best_score = score;
        group_table = tables;
      }
      if (round + 1 == rounds) break;
      // shift each crossing mechanism's cost toward the groups that use it
      for (std::size_t j = 0; j < num_mech; ++j) {
        if (touched[j].size() < 2) continue;
        double total = 0;
        for (double u : usage[j]) total += u + 0.05;
        for (std::size_t t = 0; t < touched[j].size(); ++t) {
          double target = cost[j] * (usage[j][t] + 0.05) / total;
          share[j][t] = 0.5 * share[j][t] + 0.5 * target;
        }
      }
    }
  }

  double group_bound() const {
    double bound = 0;
    for (std::size_t g = 0; g < num_groups; ++g) bound += group_table[g][group_state[g]];
    return bound;
  }

  void sync_group_state() {
    std::fill(group_state.begin(), group_state.end(), 0);
    for (std::size_t c = 0; c < num_checks; ++c)
      if (residual.get(c) && !group_of.empty()) group_state[group_of[c]] ^= 1u << bit_of[c];
  }

  gf2::BitVec config_of(const gf2::BitVec& flip_set) const {
    gf2::BitVec cfg(num_mech);
    for (std::size_t j = 0; j < num_mech; ++j)
      cfg.set(j, default_fired[j] ^ flip_set.get(j));
    return cfg;
  }

  // Admissible completion bound: a set of residual checks sharing no usable
  // mechanism each forces a distinct flip of at least its cheapest incident
  // mechanism. Returns infinity when some residual check has no usable
  // mechanism at all.
  double completion_bound(std::vector<std::uint8_t>& blocked) const {
    // Disjoint-check packing: residual checks sharing no usable mechanism
    // each force a distinct flip of at least their cheapest incident one.
    double packing = 0;
    std::fill(blocked.begin(), blocked.end(), 0);
    for (std::size_t ci = 0; ci < num_checks; ++ci) {
      if (!residual.get(ci)) continue;
      double cheapest = std::numeric_limits<double>::infinity();
      bool overlap = false;
      for (auto j : incidence[ci]) {
        if (banned[j]) continue;
        if (blocked[j]) overlap = true;
        cheapest = std::min(cheapest, cost[j]);
      }
      if (cheapest == std::numeric_limits<double>::infinity()) return cheapest;
      if (overlap) continue;
      packing += cheapest;
      for (auto j : incidence[ci]) blocked[j] = 1;
    }
    // Fractional set cover: every residual check claims at least the cheapest
    // cost-per-covered-residual-check among its usable mechanisms.
    double fractional = 0;
    for (std::size_t ci = 0; ci < num_checks; ++ci) {
      if (!residual.get(ci)) continue;
      double cheapest = std::numeric_limits<double>::infinity();
      for (auto j : incidence[ci]) {
        if (banned[j]) continue;
        std::size_t covered = 0;
        for (auto c : h.mechanisms()[j].flipped_checks) covered += residual.get(c);
        cheapest = std::min(cheapest, cost[j] / covered);
      }
      fractional += cheapest;
    }
    return std::max(packing, fractional);
  }

  // Greedy initial solution to seed the upper bound: repeatedly clear the
  // lowest residual check with the mechanism of least cost per newly cleared
  // check. Failure to converge just leaves the search unseeded.
  void seed_greedy() {
    for (std::size_t steps = 0; steps < 4 * num_checks && residual.any(); ++steps) {
      std::size_t ci = residual.lowest_set();
      double best_ratio = std::numeric_limits<double>::infinity();
      double fallback_ratio = std::numeric_limits<double>::infinity();
      std::size_t pick = num_mech, fallback = num_mech;
      for (auto j : incidence[ci]) {
        if (flips.get(j)) continue;
        std::ptrdiff_t cleared = 0, covered = 0;
        for (auto c : h.mechanisms()[j].flipped_checks) {
          cleared += residual.get(c) ? 1 : -1;
          covered += residual.get(c);
        }
        if (cleared > 0) {
          double ratio = cost[j] / cleared;
          if (ratio < best_ratio) {
            best_ratio = ratio;
            pick = j;
          }
        } else if (covered > 0) {
          // no net-improving move may exist; remember the cheapest mechanism
          // per covered check so the walk can cut through quiet checks
          double ratio = cost[j] / covered;
          if (ratio < fallback_ratio) {
            fallback_ratio = ratio;
            fallback = j;
          }
        }
      }
      if (pick == num_mech) pick = fallback;
      if (pick == num_mech) break;
      flip(pick);
      current_cost += cost[pick];
    }
    if (!residual.any()) {
      best_cost = current_cost;
      best_config = config_of(flips);
      have_best = true;
    }
    // rewind to the root state
    for (std::size_t j = 0; j < num_mech; ++j)
      if (flips.get(j)) {
        current_cost -= cost[j];
        flip(j);
      }
  }

  void flip(std::size_t j) {
    flips.flip(j);
    for (auto c : h.mechanisms()[j].flipped_checks) {
      residual.flip(c);
      if (num_groups) group_state[group_of[c]] ^= 1u << bit_of[c];
    }
  }

  void dfs(std::vector<std::uint8_t>& blocked) {
    ++nodes;
    if ((nodes & ((1u << 22) - 1)) == 0 && std::getenv("MLE_DEBUG"))
      std::fprintf(stderr, "[mle] nodes=%zu best=%.4f cur=%.4f flips=%zu resid=%zu\n", nodes,
                   best_cost, current_cost, flips.popcount(), residual.popcount());
    if (!residual.any()) {
      if (!have_best || current_cost < best_cost - 1e-12 ||
          (current_cost < best_cost + 1e-12 && lex_less(config_of(flips), best_config))) {
        best_cost = std::min(best_cost, current_cost);
        best_config = config_of(flips);
        have_best = true;
      }
      return;
    }
    // cheap table bound first; the packing/cover bound only if still alive
    if (current_cost + group_bound() > best_cost + 1e-12) return;
    if (current_cost + completion_bound(blocked) > best_cost + 1e-12) return;

    // branch on the residual check with the fewest usable mechanisms
    std::size_t branch_check = num_checks;
    std::size_t branch_degree = SIZE_MAX;
    for (std::size_t ci = 0; ci < num_checks; ++ci) {
      if (!residual.get(ci)) continue;
      std::size_t deg = 0;
      for (auto j : incidence[ci])
        if (!banned[j]) ++deg;
      if (deg < branch_degree) {
        branch_degree = deg;
        branch_check = ci;
      }
    }
    if (branch_degree == 0 || branch_check == num_checks) return;

    std::vector<std::uint32_t> candidates;
    std::vector<double> ratio;
    for (auto j : incidence[branch_check])
      if (!banned[j]) {
        std::ptrdiff_t cleared = 0;
        for (auto c : h.mechanisms()[j].flipped_checks) cleared += residual.get(c) ? 1 : -1;
        candidates.push_back(j);
        // net-improving moves first, ordered by cost per cleared check, so
        // the first descent acts greedily; the rest ordered by raw cost
        ratio.push_back(cleared > 0 ? cost[j] / cleared - 1e6 : cost[j]);
      }
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ratio[a] < ratio[b]; });
    std::vector<std::uint32_t> sorted;
    sorted.reserve(candidates.size());
    for (auto k : order) sorted.push_back(candidates[k]);
    candidates.swap(sorted);

    // every completion flips at least one candidate; partition by the first
    // (in the order above) candidate flipped
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      std::uint32_t j = candidates[k];
      if (current_cost + cost[j] > best_cost + 1e-12) continue;
      flip(j);
      banned[j] = true;
      current_cost += cost[j];
      for (std::size_t m = 0; m < k; ++m) banned[candidates[m]] = true;
      dfs(blocked);
      for (std::size_t m = 0; m < k; ++m) banned[candidates[m]] = false;
      current_cost -= cost[j];
      banned[j] = false;
      flip(j);
    }
  }
};

}  // namespace

struct MleDecoder::Impl {
  MleSearch search;
  std::vector<std::uint8_t> blocked;
  explicit Impl(const DecodingHypergraph& h) : search(h), blocked(h.num_mechanisms(), 0) {}
};

MleDecoder::MleDecoder(const DecodingHypergraph& h) : impl_(std::make_unique<Impl>(h)) {}
MleDecoder::MleDecoder(MleDecoder&&) noexcept = default;
MleDecoder& MleDecoder::operator=(MleDecoder&&) noexcept = default;
MleDecoder::~MleDecoder() = default;

DecodeOutcome MleDecoder::decode(const Syndrome& s) { return impl_->search.run(s, impl_->blocked); }

DecodeOutcome decode_mle(const DecodingHypergraph& h, const Syndrome& s) {
  MleDecoder decoder(h);
  return decoder.decode(s);
}

// ---------------------------------------------------------------------------

SatisfactionResult check_satisfaction(const TannerGraph& g, const Syndrome& s,
                                      const std::vector<std::uint32_t>& cluster_checks,
                                      const std::vector<std::uint32_t>& cluster_errors) {
  std::vector<std::uint8_t> in_check(g.num_checks, 0), in_error(g.num_errors, 0);
  for (auto c : cluster_checks) in_check[c] = 1;
  for (auto e : cluster_errors) in_error[e] = 1;

  // internal error vertices: every neighboring check lies in the cluster
  std::vector<std::uint32_t> internal;
  for (auto e : cluster_errors) {
    bool ok = true;
    for (auto eid : g.error_edges[e])
      if (!in_check[g.edges[eid].check]) {
        ok = false;
        break;
      }
    if (ok) internal.push_back(e);
  }

  gf2::BitMatrix hmat(cluster_checks.size(), internal.size());
  for (std::size_t col = 0; col < internal.size(); ++col)
    for (auto eid : g.error_edges[internal[col]]) {
      auto it = std::find(cluster_checks.begin(), cluster_checks.end(), g.edges[eid].check);
      hmat.set(static_cast<std::size_t>(it - cluster_checks.begin()), col, true);
    }
  gf2::BitVec rhs(cluster_checks.size());
  for (std::size_t r = 0; r < cluster_checks.size(); ++r)
    rhs.set(r, s.bits.get(cluster_checks[r]));

  SatisfactionResult res;
  res.local = gf2::BitVec(g.num_errors);
  auto sol = gf2::solve(hmat, rhs);
  if (!sol) return res;
  res.satisfiable = true;

  // Any member of the solution coset is a valid local configuration; prefer a
  // cheap one so degenerate clusters pick likely corrections. Small kernels
  // are enumerated exactly, larger ones improved greedily.
  std::vector<double> cost(internal.size());
  for (std::size_t col = 0; col < internal.size(); ++col) {
    double p = std::clamp(g.priors[internal[col]], 1e-12, 1 - 1e-12);
    cost[col] = std::abs(std::log((1 - p) / p));
  }
  auto cost_of = [&](const gf2::BitVec& x) {
    double total = 0;
    for (std::size_t col = 0; col < internal.size(); ++col)
      if (x.get(col)) total += cost[col];
    return total;
  };
  auto kernel = gf2::kernel_basis(hmat);
  gf2::BitVec best = *sol;
  double best_cost = cost_of(best);
  if (kernel.size() <= 12) {
    for (std::uint64_t mask = 1; mask < (1ull << kernel.size()); ++mask) {
      gf2::BitVec x = *sol;
      for (std::size_t k = 0; k < kernel.size(); ++k)
        if (mask >> k & 1) x.xor_with(kernel[k]);
      double cx = cost_of(x);
      if (cx < best_cost - 1e-12 || (cx < best_cost + 1e-12 && lex_less(x, best))) {
        best_cost = std::min(best_cost, cx);
        best = std::move(x);
      }
    }
  } else {
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& k : kernel) {
        gf2::BitVec x = best;
        x.xor_with(k);
        double cx = cost_of(x);
        if (cx < best_cost - 1e-12) {
          best_cost = cx;
          best = std::move(x);
          improved = true;
        }
      }
    }
  }
  for (std::size_t col = 0; col < internal.size(); ++col)
    if (best.get(col)) res.local.set(internal[col], true);
  return res;
}

// ---------------------------------------------------------------------------

namespace {

struct ClusterForest {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> size;
  std::vector<std::vector<std::uint32_t>> members;  // valid at roots

  explicit ClusterForest(std::size_t n) : parent(n), size(n, 1), members(n) {
    for (std::uint32_t v = 0; v < n; ++v) {
      parent[v] = v;
      members[v] = {v};
    }
  }
  std::uint32_t find(std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  // Merges and returns the surviving root.
  std::uint32_t merge(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    auto& ma = members[a];
    auto& mb = members[b];
    ma.insert(ma.end(), mb.begin(), mb.end());
    mb.clear();
    mb.shrink_to_fit();
    return a;
  }
};

}  // namespace

DecodeOutcome decode_huf(const DecodingHypergraph& h, const Syndrome& s, int eps,
                         const std::vector<double>* priors) {
  if (eps != -1 && eps != 0) throw std::invalid_argument("eps must be -1 or 0");
  if (s.bits.size() != h.num_checks()) throw std::invalid_argument("syndrome width mismatch");
  TannerGraph g = h.tanner_view(eps, priors);
  const std::size_t M = g.num_checks, N = g.num_errors;
  const std::size_t V = M + N;  // vertex ids: checks, then errors at M + j
  auto edge_other = [&](std::size_t eid, std::uint32_t v) {
    const auto& e = g.edges[eid];
    return v == e.check ? static_cast<std::uint32_t>(M + e.error) : e.check;
  };
  auto vertex_edges = [&](std::uint32_t v) -> const std::vector<std::uint32_t>& {
    return v < M ? g.check_edges[v] : g.error_edges[v - M];
  };

  ClusterForest forest(V);
  std::vector<double> fill(g.edges.size(), 0);
  std::vector<std::uint64_t> stamp(V, 0);
  std::uint64_t clock = 0;
  std::unordered_map<std::uint32_t, gf2::BitVec> solutions;
  // Every unsatisfiable cluster contains at least one flipped check, so the
  // flipped checks are permanent probes: a probe's cluster is unsatisfiable
  // exactly when no solution is cached for its root (clusters are re-checked
  // on every merge, and clusters without flipped checks are trivially
  // satisfiable).
  std::vector<std::uint32_t> probes;
  for (std::uint32_t c = 0; c < M; ++c)
    if (s.bits.get(c)) probes.push_back(c);

  auto run_check = [&](std::uint32_t root) {
    std::vector<std::uint32_t> checks, errors;
    for (auto v : forest.members[root])
      (v < M ? checks : errors).push_back(v < M ? v : v - static_cast<std::uint32_t>(M));
    auto res = check_satisfaction(g, s, checks, errors);
    if (res.satisfiable)
      solutions[root] = std::move(res.local);
    else
      solutions.erase(root);
    return res.satisfiable;
  };

  std::size_t merges = 0;
  const std::size_t merge_limit = V + 1;
  while (true) {
    // current unsatisfiable clusters; select the smallest, breaking ties by
    // least recent update then by root index
    std::vector<std::uint32_t> roots;
    for (auto v : probes) {
      auto r = forest.find(v);
      if (!solutions.count(r)) roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    if (roots.empty()) break;
    std::uint32_t sel = roots[0];
    for (auto r : roots)
      if (std::tuple(forest.size[r], stamp[r], r) < std::tuple(forest.size[sel], stamp[sel], sel))
        sel = r;

    // boundary edges of the selected cluster
    std::vector<std::uint32_t> boundary;
    for (auto v : forest.members[sel])
      for (auto eid : vertex_edges(v))
        if (forest.find(edge_other(eid, v)) != sel) boundary.push_back(eid);
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    if (boundary.empty()) throw std::runtime_error("syndrome is not achievable");

    double delta = std::numeric_limits<double>::infinity();
    for (auto eid : boundary) delta = std::min(delta, g.edges[eid].weight - fill[eid]);
    std::uint32_t cur = sel;
    std::vector<std::uint32_t> filled;
    for (auto eid : boundary) {
      fill[eid] += delta;
      if (fill[eid] >= g.edges[eid].weight - 1e-12) filled.push_back(eid);
    }
    for (auto eid : filled) {
      std::uint32_t a = forest.find(g.edges[eid].check);
      std::uint32_t b = forest.find(static_cast<std::uint32_t>(M + g.edges[eid].error));
      if (a == b) continue;
      solutions.erase(a);
      solutions.erase(b);
      cur = forest.merge(a, b);
      if (++merges > merge_limit) throw std::logic_error("union-find merge budget exceeded");
    }
    stamp[cur] = ++clock;
    run_check(cur);
  }

  DecodeOutcome out;
  out.configuration.fired = gf2::BitVec(N);
  for (auto& [root, local] : solutions) {
    (void)root;
    out.configuration.fired.xor_with(local);
  }
  out.predicted_flips = h.observable_flips(out.configuration);
  {
    std::vector<std::uint8_t> seen(V, 0);
    for (std::uint32_t v = 0; v < V; ++v) seen[forest.find(v)] = 1;
    out.cluster_count = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
  }
  if (h.syndrome_of(out.configuration).bits != s.bits)
    throw std::logic_error("union-find produced an inconsistent configuration");
  return out;
}

// ---------------------------------------------------------------------------

DecodeOutcome decode_independent(const DecodingHypergraph& h, const BlockAssignment& blocks,
                                 const Syndrome& s) {
  if (blocks.check_block.size() != h.num_checks() ||
      blocks.observable_block.size() != h.num_observables())
    throw std::invalid_argument("block assignment width mismatch");

  DecodeOutcome out;
  out.predicted_flips = gf2::BitVec(h.num_observables());
  std::vector<gf2::BitVec> block_configs;
  std::size_t total_mechs = 0;

  for (std::uint32_t b = 0; b < blocks.num_blocks; ++b) {
    std::vector<std::uint32_t> check_ids, obs_ids;
    std::vector<std::uint32_t> check_map(h.num_checks(), UINT32_MAX);
    std::vector<std::uint32_t> obs_map(h.num_observables(), UINT32_MAX);
    for (std::uint32_t c = 0; c < h.num_checks(); ++c)
      if (blocks.check_block[c] == b) {
        check_map[c] = static_cast<std::uint32_t>(check_ids.size());
        check_ids.push_back(c);
      }
    for (std::uint32_t o = 0; o < h.num_observables(); ++o)
      if (blocks.observable_block[o] == b) {
        obs_map[o] = static_cast<std::uint32_t>(obs_ids.size());
        obs_ids.push_back(o);
      }

    // project every mechanism onto this block at its full probability
    std::vector<ErrorMechanism> projected;
    for (const auto& m : h.mechanisms()) {
      ErrorMechanism pm;
      pm.probability = m.probability;
      for (auto c : m.flipped_checks)
        if (check_map[c] != UINT32_MAX) pm.flipped_checks.push_back(check_map[c]);
      for (auto o : m.flipped_observables)
        if (obs_map[o] != UINT32_MAX) pm.flipped_observables.push_back(obs_map[o]);
      if (!pm.flipped_checks.empty() || !pm.flipped_observables.empty())
        projected.push_back(std::move(pm));
    }
    auto hb = DecodingHypergraph::from_mechanisms(check_ids.size(), obs_ids.size(),
                                                  std::move(projected));
    Syndrome sb{gf2::BitVec(check_ids.size())};
    for (std::size_t i = 0; i < check_ids.size(); ++i) sb.bits.set(i, s.bits.get(check_ids[i]));

    total_mechs += hb.num_mechanisms();
    try {
      auto sub = decode_mle(hb, sb);
      out.nodes_expanded += sub.nodes_expanded;
      for (std::size_t i = 0; i < obs_ids.size(); ++i)
        if (sub.predicted_flips.get(i)) out.predicted_flips.set(obs_ids[i], true);
      block_configs.push_back(std::move(sub.configuration.fired));
    } catch (const std::runtime_error&) {
      out.feasible = false;
      block_configs.push_back(gf2::BitVec(hb.num_mechanisms()));
    }
  }

  // per-block configurations concatenated over the projected mechanism spaces
  out.configuration.fired = gf2::BitVec(total_mechs);
  std::size_t at = 0;
  for (const auto& cfg : block_configs) {
    for (std::size_t j = 0; j < cfg.size(); ++j)
      if (cfg.get(j)) out.configuration.fired.set(at + j, true);
    at += cfg.size();
  }
  return out;
}

}  // namespace corrdec
