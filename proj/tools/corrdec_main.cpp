// corrdec: command-line driver for hypergraph decoding experiments.
//
// Subcommands:
//   dem parse|sample|decode   — error-model file utilities
//   experiment <kind>         — Monte-Carlo grids (bell-perfect, bell-noisy, deep, ccz)
//   fit threshold|scaling|cost — scaling fits over experiment CSV output
//
// Exit codes: 0 success, 1 usage error, 2 input data error, 3 runtime/fit failure.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "corrdec/ccz.hpp"
#include "corrdec/decoders.hpp"
#include "corrdec/dem_io.hpp"
#include "corrdec/experiments.hpp"
#include "corrdec/fits.hpp"
#include "corrdec/stats.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Writes to `path`, or stdout when the path is empty or "-".
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + path);
  out << text;
}

std::string bits_text(const corrdec::gf2::BitVec& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits.get(i)) s[i] = '1';
  return s;
}

corrdec::gf2::BitVec bits_parse(const std::string& text) {
  corrdec::gf2::BitVec bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1')
      bits.set(i, true);
    else if (text[i] != '0')
      throw InputError("invalid bit character in '" + text + "'");
  }
  return bits;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

// ---------------------------------------------------------------------------
// dem

int cmd_dem_parse(const std::string& path) {
  corrdec::DecodingHypergraph h;
  try {
    h = corrdec::dem_io::parse(read_file(path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  std::cout << corrdec::dem_io::serialize(h);
  return 0;
}

int cmd_dem_sample(const std::string& path, std::uint64_t shots, std::uint64_t seed,
                   const std::string& out_path) {
  corrdec::DecodingHypergraph h;
  try {
    h = corrdec::dem_io::parse(read_file(path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  std::ostringstream out;
  out << "shot,syndrome,observables\n";
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    corrdec::Rng rng(corrdec::derive_shot_seed(seed, 0, shot));
    corrdec::SampledShot sampled = h.sample(rng);
    out << shot << ',' << bits_text(sampled.syndrome.bits) << ','
        << bits_text(sampled.observable_flips) << '\n';
  }
  write_output(out_path, out.str());
  return 0;
}

// Pulls a syndrome bitstring of the expected width out of a CSV or raw line.
bool extract_syndrome(const std::string& line, std::size_t width, corrdec::gf2::BitVec* bits) {
  for (const auto& field : split_csv(line)) {
    if (field.size() != width) continue;
    bool ok = true;
    for (char c : field) ok = ok && (c == '0' || c == '1');
    if (!ok) continue;
    *bits = bits_parse(field);
    return true;
  }
  return false;
}

int cmd_dem_decode(const std::string& path, const std::string& decoder_name,
                   const std::string& syndromes_path, int eps, int bp_rounds,
                   const std::string& out_path) {
  corrdec::DecoderKind decoder;
  try {
    decoder = corrdec::decoder_from_name(decoder_name);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  corrdec::DecodingHypergraph h;
  try {
    h = corrdec::dem_io::parse(read_file(path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }

  // A bare error-model file carries no block partition, so the independent
  // baseline degenerates to a single block (equivalent to mle).
  corrdec::BlockAssignment blocks;
  blocks.num_blocks = 1;
  blocks.check_block.assign(h.num_checks(), 0);
  blocks.observable_block.assign(h.num_observables(), 0);

  std::istringstream lines(syndromes_path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                                 : read_file(syndromes_path));
  corrdec::ExperimentParams params;
  params.decoder = decoder;
  params.eps = eps;
  params.bp_rounds = bp_rounds;
  corrdec::MleDecoder mle(h);

  std::ostringstream out;
  out << "shot,syndrome,predicted\n";
  std::string line;
  std::uint64_t shot = 0;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    corrdec::gf2::BitVec bits(h.num_checks());
    if (!extract_syndrome(line, h.num_checks(), &bits)) {
      if (line_no == 1) continue;  // header
      throw InputError(syndromes_path + ":" + std::to_string(line_no) +
                       ": no syndrome field of width " + std::to_string(h.num_checks()));
    }
    corrdec::DecodeOutcome decoded =
        corrdec::decode_with(params, h, blocks, corrdec::Syndrome{bits}, &mle);
    out << shot << ',' << bits_text(bits) << ',' << bits_text(decoded.predicted_flips) << '\n';
    ++shot;
  }
  write_output(out_path, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// experiment

struct GridConfig {
  std::vector<int> d{3};
  std::vector<double> p{0.01};
  std::vector<double> n_r{1};
  std::vector<double> f_b{1};
  std::string decoder = "mle";
  int layers = 32;
  int eps = -1;
  int bp_rounds = 5;
  std::uint64_t shots = 1000;
  std::uint64_t stop_failures = 6000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string csv_path;
  std::string json_path;
};

std::string experiment_csv_header() {
  return corrdec::ExperimentResult::csv_header() + ",per_round";
}

std::string experiment_csv_row(const corrdec::ExperimentResult& r) {
  std::ostringstream out;
  out << r.csv_row() << ',';
  if (r.params.kind == corrdec::ExperimentKind::Deep) {
    out.precision(10);
    out << corrdec::logical_error_per_round(r.p_hat, r.params.n_r, r.params.layers);
  }
  return out.str();
}

void print_summary(const std::vector<corrdec::ExperimentResult>& results) {
  std::printf("%-12s %-11s %3s %9s %5s %5s %9s %9s %9s %11s %11s\n", "experiment", "decoder", "d",
              "p", "n_r", "f_b", "shots", "failures", "p_hat", "ci_lo", "ci_hi");
  for (const auto& r : results)
    std::printf("%-12s %-11s %3d %9.6g %5g %5g %9llu %9llu %9.3e %11.3e %11.3e\n",
                corrdec::experiment_name(r.params.kind), corrdec::decoder_name(r.params.decoder),
                r.params.d, r.params.p, r.params.n_r, r.params.f_b,
                static_cast<unsigned long long>(r.shots),
                static_cast<unsigned long long>(r.failures), r.p_hat, r.ci_lo, r.ci_hi);
}

int cmd_experiment(const std::string& kind_name, const GridConfig& cfg) {
  corrdec::ExperimentKind kind;
  if (kind_name == "bell-perfect")
    kind = corrdec::ExperimentKind::BellPerfect;
  else if (kind_name == "bell-noisy")
    kind = corrdec::ExperimentKind::BellNoisy;
  else if (kind_name == "deep")
    kind = corrdec::ExperimentKind::Deep;
  else if (kind_name == "ccz")
    kind = corrdec::ExperimentKind::Ccz;
  else
    throw UsageError("unknown experiment: " + kind_name);

  corrdec::DecoderKind decoder;
  try {
    decoder = corrdec::decoder_from_name(cfg.decoder);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }

  // Validate the whole grid before doing any work.
  if (cfg.shots < 1) throw UsageError("--shots must be >= 1");
  for (int d : cfg.d)
    if (d < 3 || d % 2 == 0) throw UsageError("--d values must be odd and >= 3");
  for (double p : cfg.p)
    if (!(p >= 0) || p >= 1) throw UsageError("--p values must lie in [0, 1)");
  for (double f_b : cfg.f_b)
    if (!(f_b >= 0) || f_b > 1) throw UsageError("--fb values must lie in [0, 1]");
  for (double n_r : cfg.n_r)
    if (!(n_r > 0)) throw UsageError("--nr values must be positive");
  if (cfg.layers < 1) throw UsageError("--layers must be >= 1");
  if (cfg.eps != -1 && cfg.eps != 0) throw UsageError("--eps must be -1 or 0");

  std::vector<corrdec::ExperimentResult> results;
  std::ostringstream csv;
  csv << experiment_csv_header() << '\n';
  auto flush_outputs = [&] {
    if (!cfg.csv_path.empty()) write_output(cfg.csv_path, csv.str());
  };

  try {
    if (kind == corrdec::ExperimentKind::Ccz) {
      for (double p : cfg.p) {
        auto [corr, ind] = corrdec::run_ccz_experiment(p, cfg.shots, cfg.seed, cfg.workers);
        for (const auto& r : {corr, ind}) {
          results.push_back(r);
          csv << experiment_csv_row(r) << '\n';
        }
        flush_outputs();
      }
    } else {
      // Bell-noisy has no f_b axis; deep has no f_b axis; bell experiments
      // have no n_r axis. Collapse unused axes to a single pass.
      std::vector<double> f_bs = kind == corrdec::ExperimentKind::BellPerfect ? cfg.f_b
                                                                              : std::vector<double>{1};
      std::vector<double> n_rs =
          kind == corrdec::ExperimentKind::Deep ? cfg.n_r : std::vector<double>{1};
      for (int d : cfg.d)
        for (double p : cfg.p)
          for (double n_r : n_rs)
            for (double f_b : f_bs) {
              corrdec::ExperimentParams params;
              params.kind = kind;
              params.decoder = decoder;
              params.d = d;
              params.p = p;
              params.n_r = n_r;
              params.f_b = f_b;
              params.layers = cfg.layers;
              params.eps = cfg.eps;
              params.bp_rounds = cfg.bp_rounds;
              params.seed = cfg.seed;
              params.shots = cfg.shots;
              params.stop_failures = cfg.stop_failures;
              params.workers = cfg.workers;
              corrdec::ExperimentResult r = corrdec::run_experiment(params);
              results.push_back(r);
              csv << experiment_csv_row(r) << '\n';
              flush_outputs();
            }
    }
  } catch (const std::exception& e) {
    flush_outputs();
    throw std::runtime_error(std::string("experiment cell failed: ") + e.what());
  }

  flush_outputs();
  if (!cfg.json_path.empty()) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t i = 0; i < results.size(); ++i)
      out << "  " << results[i].to_json() << (i + 1 < results.size() ? ",\n" : "\n");
    out << "]\n";
    write_output(cfg.json_path, out.str());
  }
  print_summary(results);
  return 0;
}

// ---------------------------------------------------------------------------
// fit

struct CsvRow {
  std::string experiment, decoder;
  int d = 0;
  double p = 0, n_r = 1, f_b = 1, p_hat = 0;
  double per_round = -1;  // < 0 when absent
};

std::vector<CsvRow> read_experiment_csv(const std::string& path, const std::string& decoder_filter) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw UsageError(path + ": empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_csv(line);
  auto col = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  int c_exp = col("experiment"), c_dec = col("decoder"), c_d = col("d"), c_p = col("p"),
      c_nr = col("n_r"), c_fb = col("f_b"), c_ph = col("p_hat"), c_pr = col("per_round");
  if (c_exp < 0 || c_dec < 0 || c_d < 0 || c_p < 0 || c_ph < 0)
    throw UsageError(path + ": CSV schema mismatch (need experiment,decoder,d,p,p_hat columns)");

  std::vector<CsvRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    if (fields.size() < header.size())
      throw InputError(path + ":" + std::to_string(line_no) + ": short CSV row");
    CsvRow row;
    try {
      row.experiment = fields[c_exp];
      row.decoder = fields[c_dec];
      row.d = std::stoi(fields[c_d]);
      row.p = std::stod(fields[c_p]);
      if (c_nr >= 0) row.n_r = std::stod(fields[c_nr]);
      if (c_fb >= 0) row.f_b = std::stod(fields[c_fb]);
      row.p_hat = std::stod(fields[c_ph]);
      if (c_pr >= 0 && !fields[c_pr].empty()) row.per_round = std::stod(fields[c_pr]);
    } catch (const std::exception&) {
      throw InputError(path + ":" + std::to_string(line_no) + ": malformed CSV field");
    }
    if (!decoder_filter.empty() && row.decoder != decoder_filter) continue;
    rows.push_back(row);
  }
  return rows;
}

int cmd_fit_threshold(const std::string& input, const std::string& decoder_filter,
                      const std::string& out_path) {
  std::vector<corrdec::RatePoint> points;
  for (const auto& row : read_experiment_csv(input, decoder_filter))
    points.push_back({row.d, row.p, row.n_r, row.p_hat});
  corrdec::UniversalFit fit = fit_universal_scaling(points);
  nlohmann::json j{{"fit", "universal-scaling"}, {"p_th", fit.p_th}, {"nu", fit.nu},
                   {"a", fit.a},                 {"b", fit.b},       {"c", fit.c},
                   {"residual", fit.residual},   {"points", points.size()}};
  write_output(out_path, j.dump(2) + "\n");
  return 0;
}

nlohmann::json heuristic_to_json(const corrdec::HeuristicFit& fit, std::size_t points) {
  nlohmann::json alphas = nlohmann::json::array();
  for (const auto& [n_r, alpha] : fit.alphas) alphas.push_back({{"n_r", n_r}, {"alpha", alpha}});
  return {{"fit", "heuristic-scaling"},        {"C", fit.c},
          {"alphas", alphas},                  {"excluded_n_r", fit.excluded_n_r},
          {"residual", fit.residual},          {"points", points}};
}

corrdec::HeuristicFit heuristic_from_json(const nlohmann::json& j) {
  if (!j.contains("fit") || j["fit"] != "heuristic-scaling")
    throw UsageError("cost fit expects a heuristic-scaling JSON report as input");
  corrdec::HeuristicFit fit;
  fit.c = j.at("C").get<double>();
  for (const auto& entry : j.at("alphas"))
    fit.alphas.emplace_back(entry.at("n_r").get<double>(), entry.at("alpha").get<double>());
  return fit;
}

int cmd_fit_scaling(const std::string& input, const std::string& decoder_filter,
                    const std::string& out_path) {
  std::vector<corrdec::RatePoint> points;
  for (const auto& row : read_experiment_csv(input, decoder_filter))
    points.push_back({row.d, row.p, row.n_r, row.p_hat});
  corrdec::HeuristicFit fit = fit_heuristic_scaling(points);
  write_output(out_path, heuristic_to_json(fit, points.size()).dump(2) + "\n");
  return 0;
}

int cmd_fit_cost(const std::string& input, double target, const std::string& out_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(input));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(input + ": " + e.what());
  }
  corrdec::HeuristicFit fit = heuristic_from_json(j);
  std::vector<corrdec::CostRow> rows = corrdec::spacetime_cost(fit, target);
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : rows)
    table.push_back({{"n_r", row.n_r},
                     {"d_star", row.d_star},
                     {"cost_space_time", row.cost_space_time},
                     {"cost_rounds_only", row.cost_rounds_only}});
  nlohmann::json report{{"fit", "space-time-cost"}, {"target_p_l", target}, {"rows", table}};
  write_output(out_path, report.dump(2) + "\n");
  return 0;
}

// Fills grid options from a JSON config file for flags not given on the
// command line.
void apply_config(const CLI::App* sub, const std::string& config_path, GridConfig* cfg) {
  if (config_path.empty()) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(config_path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(config_path + ": " + e.what());
  }
  auto unset = [&](const std::string& flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  try {
    if (j.contains("d") && unset("--d")) cfg->d = j["d"].get<std::vector<int>>();
    if (j.contains("p") && unset("--p")) cfg->p = j["p"].get<std::vector<double>>();
    if (j.contains("n_r") && unset("--nr")) cfg->n_r = j["n_r"].get<std::vector<double>>();
    if (j.contains("f_b") && unset("--fb")) cfg->f_b = j["f_b"].get<std::vector<double>>();
    if (j.contains("decoder") && unset("--decoder")) cfg->decoder = j["decoder"].get<std::string>();
    if (j.contains("layers") && unset("--layers")) cfg->layers = j["layers"].get<int>();
    if (j.contains("eps") && unset("--eps")) cfg->eps = j["eps"].get<int>();
    if (j.contains("bp_rounds") && unset("--bp-rounds"))
      cfg->bp_rounds = j["bp_rounds"].get<int>();
    if (j.contains("shots") && unset("--shots")) cfg->shots = j["shots"].get<std::uint64_t>();
    if (j.contains("stop_failures") && unset("--stop-failures"))
      cfg->stop_failures = j["stop_failures"].get<std::uint64_t>();
    if (j.contains("seed") && unset("--seed")) cfg->seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers") && unset("--workers")) cfg->workers = j["workers"].get<int>();
    if (j.contains("csv") && unset("--csv")) cfg->csv_path = j["csv"].get<std::string>();
    if (j.contains("json") && unset("--json")) cfg->json_path = j["json"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(config_path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoding-hypergraph construction, joint decoding, and scaling experiments"};
  app.require_subcommand(1);

  // dem ------------------------------------------------------------------
  CLI::App* dem = app.add_subcommand("dem", "Error-model file utilities");
  dem->require_subcommand(1);

  std::string parse_path;
  CLI::App* dem_parse = dem->add_subcommand("parse", "Validate a file and print canonical form");
  dem_parse->add_option("file", parse_path, "error-model file")->required();

  std::string sample_path, sample_out;
  std::uint64_t sample_shots = 10, sample_seed = 0;
  CLI::App* dem_sample = dem->add_subcommand("sample", "Sample syndrome/observable shots as CSV");
  dem_sample->add_option("file", sample_path, "error-model file")->required();
  dem_sample->add_option("--shots", sample_shots, "number of shots");
  dem_sample->add_option("--seed", sample_seed, "RNG seed");
  dem_sample->add_option("--out", sample_out, "output CSV path (default stdout)");

  std::string decode_path, decode_decoder = "mle", decode_syndromes, decode_out;
  int decode_eps = -1, decode_bp = 5;
  CLI::App* dem_decode = dem->add_subcommand("decode", "Decode syndromes from a CSV or bit lines");
  dem_decode->add_option("file", decode_path, "error-model file")->required();
  dem_decode->add_option("--decoder", decode_decoder, "mle | huf | belief-huf | independent");
  dem_decode->add_option("--syndromes", decode_syndromes, "syndrome CSV ('-' for stdin)")
      ->required();
  dem_decode->add_option("--eps", decode_eps, "union-find hyperedge-order exponent (-1 or 0)");
  dem_decode->add_option("--bp-rounds", decode_bp, "belief-propagation rounds");
  dem_decode->add_option("--out", decode_out, "output CSV path (default stdout)");

  // experiment -----------------------------------------------------------
  CLI::App* experiment = app.add_subcommand("experiment", "Monte-Carlo experiment grids");
  experiment->require_subcommand(1);
  GridConfig grid;
  std::string grid_config_path;
  std::vector<CLI::App*> experiment_subs;
  for (const char* name : {"bell-perfect", "bell-noisy", "deep", "ccz"}) {
    CLI::App* sub = experiment->add_subcommand(name, std::string("Run the ") + name + " grid");
    sub->add_option("--d", grid.d, "code distances (comma-separated)")->delimiter(',');
    sub->add_option("--p", grid.p, "physical error rates (comma-separated)")->delimiter(',');
    sub->add_option("--nr", grid.n_r, "syndrome rounds per layer (deep only)")->delimiter(',');
    sub->add_option("--fb", grid.f_b, "noise fraction before the entangler (bell-perfect only)")
        ->delimiter(',');
    sub->add_option("--decoder", grid.decoder, "mle | huf | belief-huf | independent");
    sub->add_option("--layers", grid.layers, "gate layers (deep only)");
    sub->add_option("--eps", grid.eps, "union-find hyperedge-order exponent (-1 or 0)");
    sub->add_option("--bp-rounds", grid.bp_rounds, "belief-propagation rounds");
    sub->add_option("--shots", grid.shots, "shots per grid cell (ccz: per initial state)");
    sub->add_option("--stop-failures", grid.stop_failures, "stop a cell early at this many failures");
    sub->add_option("--seed", grid.seed, "RNG seed");
    sub->add_option("--workers", grid.workers, "worker threads (results independent of N)");
    sub->add_option("--csv", grid.csv_path, "CSV output path");
    sub->add_option("--json", grid.json_path, "JSON output path");
    sub->add_option("--config", grid_config_path, "JSON config supplying unset flags");
    experiment_subs.push_back(sub);
  }

  // fit ------------------------------------------------------------------
  CLI::App* fit = app.add_subcommand("fit", "Scaling fits over experiment CSV output");
  fit->require_subcommand(1);

  std::string thr_input, thr_decoder, thr_out;
  CLI::App* fit_threshold = fit->add_subcommand("threshold", "Universal-scaling collapse fit");
  fit_threshold->add_option("--input", thr_input, "experiment CSV")->required();
  fit_threshold->add_option("--decoder", thr_decoder, "use only rows from this decoder");
  fit_threshold->add_option("--out", thr_out, "JSON report path (default stdout)");

  std::string scl_input, scl_decoder, scl_out;
  CLI::App* fit_scaling = fit->add_subcommand("scaling", "Heuristic suppression-law fit");
  fit_scaling->add_option("--input", scl_input, "experiment CSV")->required();
  fit_scaling->add_option("--decoder", scl_decoder, "use only rows from this decoder");
  fit_scaling->add_option("--out", scl_out, "JSON report path (default stdout)");

  std::string cost_input, cost_out;
  double cost_target = 1e-6;
  CLI::App* fit_cost = fit->add_subcommand("cost", "Space-time cost table from a scaling fit");
  fit_cost->add_option("--input", cost_input, "heuristic-scaling JSON report")->required();
  fit_cost->add_option("--target", cost_target, "target logical error rate");
  fit_cost->add_option("--out", cost_out, "JSON report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dem_parse->parsed()) return cmd_dem_parse(parse_path);
    if (dem_sample->parsed()) return cmd_dem_sample(sample_path, sample_shots, sample_seed, sample_out);
    if (dem_decode->parsed())
      return cmd_dem_decode(decode_path, decode_decoder, decode_syndromes, decode_eps, decode_bp,
                            decode_out);
    for (CLI::App* sub : experiment_subs)
      if (sub->parsed()) {
        apply_config(sub, grid_config_path, &grid);
        return cmd_experiment(sub->get_name(), grid);
      }
    if (fit_threshold->parsed()) return cmd_fit_threshold(thr_input, thr_decoder, thr_out);
    if (fit_scaling->parsed()) return cmd_fit_scaling(scl_input, scl_decoder, scl_out);
    if (fit_cost->parsed()) return cmd_fit_cost(cost_input, cost_target, cost_out);
    std::cerr << "no subcommand selected\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
