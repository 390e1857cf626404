#include "sbheom/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "sbheom/errors.hpp"

namespace sbheom {

namespace {

constexpr char kMagic[8] = {'S', 'B', 'H', 'A', 'D', 'O', '1', '\n'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

CheckpointHeader read_header_stream(std::istream& in, const std::string& path,
                                    std::uint64_t& count) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw ConfigError("checkpoint: '" + path + "' is not an ADO checkpoint");
  }
  CheckpointHeader h;
  std::int32_t n_real = 0, n_imag = 0, depth = 0, role = 0;
  read_pod(in, n_real);
  read_pod(in, n_imag);
  read_pod(in, depth);
  read_pod(in, role);
  read_pod(in, h.time);
  read_pod(in, h.fit_hash);
  read_pod(in, count);
  if (!in) throw ConfigError("checkpoint: truncated header in '" + path + "'");
  h.n_real = n_real;
  h.n_imag = n_imag;
  h.depth = depth;
  h.role = role == 0 ? StateRole::Density : StateRole::Quasi;
  return h;
}

}  // namespace

void save_checkpoint(const std::string& path, const AdoState& state,
                     std::uint64_t fit_hash, double time) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("checkpoint: cannot open '" + path + "' for writing");
  out.write(kMagic, 8);
  const HierarchySpace& space = state.space();
  write_pod(out, static_cast<std::int32_t>(space.n_real()));
  write_pod(out, static_cast<std::int32_t>(space.n_imag()));
  write_pod(out, static_cast<std::int32_t>(space.depth()));
  write_pod(out, static_cast<std::int32_t>(state.role() == StateRole::Density ? 0 : 1));
  write_pod(out, time);
  write_pod(out, fit_hash);
  write_pod(out, static_cast<std::uint64_t>(state.size()));
  for (std::size_t i = 0; i < state.size(); ++i) {
    const Eigen::Matrix2cd& b = state.block(i);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        write_pod(out, b(r, c).real());
        write_pod(out, b(r, c).imag());
      }
    }
  }
  if (!out) throw ConfigError("checkpoint: write failure on '" + path + "'");
}

CheckpointHeader read_checkpoint_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("checkpoint: cannot open '" + path + "'");
  std::uint64_t count = 0;
  return read_header_stream(in, path, count);
}

AdoState load_checkpoint(const std::string& path, CheckpointHeader& header,
                         std::uint64_t ado_budget) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("checkpoint: cannot open '" + path + "'");
  std::uint64_t count = 0;
  header = read_header_stream(in, path, count);

  auto space = std::make_shared<HierarchySpace>(header.n_real, header.n_imag,
                                                header.depth, ado_budget);
  if (space->size() != count) {
    throw ConfigError("checkpoint: block count mismatch in '" + path + "'");
  }
  AdoState state(space, header.role);
  for (std::size_t i = 0; i < state.size(); ++i) {
    double re = 0.0, im = 0.0;
    Eigen::Matrix2cd& b = state.block(i);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        read_pod(in, re);
        read_pod(in, im);
        b(r, c) = {re, im};
      }
    }
  }
  if (!in) throw ConfigError("checkpoint: truncated data in '" + path + "'");
  return state;
}

}  // namespace sbheom
