// checkpoint.hpp — Binary ADO-state checkpoints

#pragma once

#include <cstdint>
#include <string>

#include "sbheom/heom.hpp"

namespace sbheom {

struct CheckpointHeader {
  int n_real = 0;
  int n_imag = 0;
  int depth = 0;
  StateRole role = StateRole::Density;
  double time = 0.0;
  std::uint64_t fit_hash = 0;
};

// Layout: magic "SBHADO1\n", header fields, then one 2x2 complex block per
// ADO in canonical enumeration order as little-endian f64 pairs
// (row-major: re00, im00, re01, im01, re10, im10, re11, im11).
void save_checkpoint(const std::string& path, const AdoState& state,
                     std::uint64_t fit_hash, double time);

// Reads the header only (cheap existence/compatibility check).
CheckpointHeader read_checkpoint_header(const std::string& path);

// Rebuilds the hierarchy space from the header (subject to `ado_budget`)
// and loads the blocks.
AdoState load_checkpoint(const std::string& path, CheckpointHeader& header,
                         std::uint64_t ado_budget = HierarchySpace::kDefaultBudget);

}  // namespace sbheom
