#include "corrdec/dem_io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace corrdec::dem_io {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& msg) {
  throw std::runtime_error("dem parse error at line " + std::to_string(line_no) + ": " + msg);
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream in(body);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

std::size_t parse_count(const std::string& tok, std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument("");
    return static_cast<std::size_t>(v);
  } catch (...) {
    fail(line_no, std::string("expected nonnegative integer for ") + what);
  }
}

}  // namespace

DecodingHypergraph parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  int header_stage = 0;  // 0: dem, 1: checks, 2: observables, 3: errors
  std::size_t num_checks = 0, num_observables = 0;
  std::vector<ErrorMechanism> mechanisms;

  while (std::getline(in, line)) {
    ++line_no;
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    switch (header_stage) {
      case 0:
        if (toks.size() != 2 || toks[0] != "dem" || toks[1] != "1")
          fail(line_no, "expected 'dem 1'");
        header_stage = 1;
        break;
      case 1:
        if (toks.size() != 2 || toks[0] != "checks") fail(line_no, "expected 'checks <N>'");
        num_checks = parse_count(toks[1], line_no, "checks");
        header_stage = 2;
        break;
      case 2:
        if (toks.size() != 2 || toks[0] != "observables")
          fail(line_no, "expected 'observables <K>'");
        num_observables = parse_count(toks[1], line_no, "observables");
        header_stage = 3;
        break;
      default: {
        if (toks[0] != "error") fail(line_no, "expected 'error <p> <targets...>'");
        if (toks.size() < 3) fail(line_no, "error line needs a probability and a target");
        double p = 0;
        try {
          std::size_t pos = 0;
          p = std::stod(toks[1], &pos);
          if (pos != toks[1].size()) throw std::invalid_argument("");
        } catch (...) {
          fail(line_no, "bad probability '" + toks[1] + "'");
        }
        if (!(p > 0.0 && p < 1.0)) fail(line_no, "probability must lie strictly in (0,1)");
        ErrorMechanism m;
        m.probability = p;
        for (std::size_t i = 2; i < toks.size(); ++i) {
          const std::string& t = toks[i];
          if (t.size() < 2 || (t[0] != 'C' && t[0] != 'L')) fail(line_no, "bad target '" + t + "'");
          std::size_t idx = parse_count(t.substr(1), line_no, "target index");
          if (t[0] == 'C') {
            if (idx >= num_checks) fail(line_no, "check index " + std::to_string(idx) + " >= declared count");
            m.flipped_checks.push_back(static_cast<std::uint32_t>(idx));
          } else {
            if (idx >= num_observables)
              fail(line_no, "observable index " + std::to_string(idx) + " >= declared count");
            m.flipped_observables.push_back(static_cast<std::uint32_t>(idx));
          }
        }
        std::sort(m.flipped_checks.begin(), m.flipped_checks.end());
        m.flipped_checks.erase(std::unique(m.flipped_checks.begin(), m.flipped_checks.end()),
                               m.flipped_checks.end());
        std::sort(m.flipped_observables.begin(), m.flipped_observables.end());
        m.flipped_observables.erase(
            std::unique(m.flipped_observables.begin(), m.flipped_observables.end()),
            m.flipped_observables.end());
        mechanisms.push_back(std::move(m));
        break;
      }
    }
  }
  if (header_stage != 3) fail(line_no + 1, "incomplete header");
  return DecodingHypergraph::from_mechanisms(num_checks, num_observables, std::move(mechanisms));
}

std::string serialize(const DecodingHypergraph& h) {
  std::vector<const ErrorMechanism*> order;
  order.reserve(h.num_mechanisms());
  for (const auto& m : h.mechanisms()) order.push_back(&m);
  std::sort(order.begin(), order.end(), [](const ErrorMechanism* a, const ErrorMechanism* b) {
    if (a->flipped_checks != b->flipped_checks) return a->flipped_checks < b->flipped_checks;
    return a->flipped_observables < b->flipped_observables;
  });
  std::string out = "dem 1\n";
  out += "checks " + std::to_string(h.num_checks()) + "\n";
  out += "observables " + std::to_string(h.num_observables()) + "\n";
  char buf[64];
  for (const auto* m : order) {
    std::snprintf(buf, sizeof buf, "%.17g", m->probability);
    out += "error ";
    out += buf;
    for (auto c : m->flipped_checks) out += " C" + std::to_string(c);
    for (auto k : m->flipped_observables) out += " L" + std::to_string(k);
    out += "\n";
  }
  return out;
}

}  // namespace corrdec::dem_io
