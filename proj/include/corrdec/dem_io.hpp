#pragma once

#include <string>

#include "corrdec/hypergraph.hpp"

namespace corrdec::dem_io {

// Line-oriented error-model text format:
//   dem 1
//   checks <N>
//   observables <K>
//   error <p> C<i> ... L<k> ...
// '#' starts a comment, blank lines are ignored. Duplicate error lines merge.
DecodingHypergraph parse(const std::string& text);

// Canonical form: header followed by error lines sorted by signature,
// probabilities printed with 17 significant digits.
std::string serialize(const DecodingHypergraph& h);

}  // namespace corrdec::dem_io
