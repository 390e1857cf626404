// fit_io.hpp — Self-describing text serialization of correlation fits

#pragma once

#include <string>

#include "sbheom/fit.hpp"

namespace sbheom {

// Canonical JSON document for a fit: basis kinds and parameters, linear
// coefficients, closure matrices, residual summary, target hash. Doubles are
// emitted in shortest round-trip form, so parse(dump) round-trips bit-exactly.
std::string to_json_text(const CorrelationFit& fit);
CorrelationFit fit_from_json_text(const std::string& text);

void save_fit(const std::string& path, const CorrelationFit& fit);
CorrelationFit load_fit(const std::string& path);

}  // namespace sbheom
