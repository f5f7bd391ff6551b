#include "corrdec/experiments.hpp"

#include <algorithm>
#include <memory>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "corrdec/circuit.hpp"
#include "corrdec/stats.hpp"

namespace corrdec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

bool parity(const gf2::BitVec& bits, std::size_t width) {
  bool odd = false;
  for (std::size_t i = 0; i < width; ++i) odd ^= bits.get(i);
  return odd;
}

}  // namespace

std::uint64_t derive_shot_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream + 1)) ^ index);
}

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::BellPerfect: return "bell-perfect";
    case ExperimentKind::BellNoisy: return "bell-noisy";
    case ExperimentKind::Deep: return "deep";
    case ExperimentKind::Ccz: return "ccz";
  }
  return "?";
}

const char* decoder_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::Mle: return "mle";
    case DecoderKind::Huf: return "huf";
    case DecoderKind::BeliefHuf: return "belief-huf";
    case DecoderKind::Independent: return "independent";
  }
  return "?";
}

DecoderKind decoder_from_name(const std::string& name) {
  if (name == "mle") return DecoderKind::Mle;
  if (name == "huf") return DecoderKind::Huf;
  if (name == "belief-huf") return DecoderKind::BeliefHuf;
  if (name == "independent") return DecoderKind::Independent;
  throw std::invalid_argument("unknown decoder: " + name);
}

DecodeOutcome decode_with(const ExperimentParams& params, const DecodingHypergraph& h,
                          const BlockAssignment& blocks, const Syndrome& s, MleDecoder* mle) {
  switch (params.decoder) {
    case DecoderKind::Mle: return mle->decode(s);
    case DecoderKind::Huf: return decode_huf(h, s, params.eps);
    case DecoderKind::BeliefHuf: return decode_belief_huf(h, s, params.eps, params.bp_rounds);
    case DecoderKind::Independent: return decode_independent(h, blocks, s);
  }
  throw std::logic_error("unreachable decoder kind");
}

std::string ExperimentResult::csv_header() {
  return "experiment,decoder,d,p,n_r,f_b,seed,shots,failures,p_hat,ci_lo,ci_hi";
}

std::string ExperimentResult::csv_row() const {
  std::ostringstream out;
  out.precision(10);
  out << experiment_name(params.kind) << ',' << decoder_name(params.decoder) << ',' << params.d
      << ',' << params.p << ',' << params.n_r << ',' << params.f_b << ',' << params.seed << ','
      << shots << ',' << failures << ',' << p_hat << ',' << ci_lo << ',' << ci_hi;
  return out.str();
}

std::string ExperimentResult::to_json() const {
  nlohmann::json j{{"experiment", experiment_name(params.kind)},
                   {"decoder", decoder_name(params.decoder)},
                   {"d", params.d},
                   {"p", params.p},
                   {"n_r", params.n_r},
                   {"f_b", params.f_b},
                   {"layers", params.layers},
                   {"seed", params.seed},
                   {"shots", shots},
                   {"failures", failures},
                   {"p_hat", p_hat},
                   {"ci_lo", ci_lo},
                   {"ci_hi", ci_hi}};
  return j.dump();
}

ExperimentResult run_experiment(const ExperimentParams& params, std::vector<ShotRecord>* records) {
  if (params.shots < 1) throw std::invalid_argument("run_experiment: shots must be >= 1");
  if (params.kind == ExperimentKind::Ccz)
    throw std::invalid_argument("run_experiment: the CCZ experiment has its own entry point");
  const int workers = std::max(1, params.workers);

  struct Variant {
    DecodingHypergraph h;
    BlockAssignment blocks;
  };
  std::vector<Variant> variants;
  const bool bell = params.kind != ExperimentKind::Deep;
  try {
    if (params.kind == ExperimentKind::BellPerfect) {
      for (auto basis : {surface::Basis::X, surface::Basis::Z}) {
        auto built = surface::build_bell_perfect(params.d, params.p, params.f_b, basis);
        variants.push_back({extract_hypergraph(built.circuit), std::move(built.blocks)});
      }
    } else if (params.kind == ExperimentKind::BellNoisy) {
      for (auto basis : {surface::Basis::X, surface::Basis::Z}) {
        auto built = surface::build_bell_noisy(params.d, params.p, basis);
        variants.push_back({extract_hypergraph(built.circuit), std::move(built.blocks)});
      }
    } else {
      auto built =
          surface::build_deep_clifford(params.d, params.n_r, params.p, params.layers, params.seed);
      variants.push_back({extract_hypergraph(built.circuit), std::move(built.blocks)});
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("run_experiment(") + experiment_name(params.kind) +
                             ", d=" + std::to_string(params.d) +
                             ", p=" + std::to_string(params.p) + "): " + e.what());
  }
  for (auto& v : variants) v.h.check_incidence();  // prewarm the lazy cache before threading

  ExperimentResult result;
  result.params = params;

  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const auto& variant = variants[vi];
    const std::size_t num_obs = variant.h.num_observables();
    // The exact decoder amortizes its per-hypergraph preprocessing across
    // shots; one stateful instance per worker.
    std::vector<std::unique_ptr<MleDecoder>> mle_pool(workers);
    if (params.decoder == DecoderKind::Mle)
      for (int t = 0; t < workers; ++t) mle_pool[t] = std::make_unique<MleDecoder>(variant.h);
    std::uint64_t done = 0, failures = 0;
    const std::uint64_t chunk_size = std::max<std::uint64_t>(64, workers * 64u);

    while (done < params.shots && failures < params.stop_failures) {
      std::uint64_t chunk = std::min<std::uint64_t>(chunk_size, params.shots - done);
      std::vector<ShotRecord> chunk_records(chunk);
      auto work = [&](int t) {
        for (std::uint64_t i = t; i < chunk; i += workers) {
          std::uint64_t shot = done + i;
          Rng rng(derive_shot_seed(params.seed, vi, shot));
          SampledShot sampled = variant.h.sample(rng);
          DecodeOutcome out =
              decode_with(params, variant.h, variant.blocks, sampled.syndrome, mle_pool[t].get());
          bool ok;
          if (bell) {
            ok = out.feasible && parity(out.predicted_flips, num_obs) ==
                                     parity(sampled.observable_flips, num_obs);
          } else {
            ok = out.feasible && out.predicted_flips == sampled.observable_flips;
          }
          chunk_records[i] = {shot, std::move(sampled.syndrome),
                             std::move(sampled.observable_flips), std::move(out.predicted_flips),
                             ok};
        }
      };
      if (workers == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
      }
      // Consume in shot order so the stop rule is worker-count independent.
      for (std::uint64_t i = 0; i < chunk; ++i) {
        if (!chunk_records[i].success) ++failures;
        if (records) records->push_back(std::move(chunk_records[i]));
        ++done;
        if (failures >= params.stop_failures) break;
      }
    }
    result.shots += done;
    result.failures += failures;
  }

  result.p_hat = static_cast<double>(result.failures) / result.shots;
  auto [lo, hi] = clopper_pearson(result.failures, result.shots);
  result.ci_lo = lo;
  result.ci_hi = hi;
  return result;
}

}  // namespace corrdec
