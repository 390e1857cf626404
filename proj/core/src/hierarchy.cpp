#include "sbheom/hierarchy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "sbheom/errors.hpp"

namespace sbheom {

int AdoIndex::order() const {
  return std::accumulate(occ_real.begin(), occ_real.end(), 0) +
         std::accumulate(occ_imag.begin(), occ_imag.end(), 0);
}

std::uint64_t HierarchySpace::count_ados(int n_real, int n_imag, int depth) {
  // binomial(slots + depth, depth) with saturation
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  const int n = n_real + n_imag + depth;
  const int k = std::min(depth, n_real + n_imag);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (c > cap / num) return cap;
    c = c * num / static_cast<std::uint64_t>(i);
  }
  return c;
}

// Count of occupation vectors of length `len` with sum <= budget.
std::uint64_t HierarchySpace::vectors_within(int len, int budget) const {
  if (budget < 0) return 0;
  return binom_[static_cast<std::size_t>(len) * static_cast<std::size_t>(binom_cols_) +
                static_cast<std::size_t>(budget)];
}

HierarchySpace::HierarchySpace(int n_real, int n_imag, int depth,
                               std::uint64_t ado_budget)
    : n_real_(n_real), n_imag_(n_imag), depth_(depth) {
  if (n_real < 0 || n_imag < 0 || n_real + n_imag < 1) {
    throw ConfigError("hierarchy: need at least one basis slot");
  }
  if (depth < 0) throw ConfigError("hierarchy: depth must be >= 0");

  const std::uint64_t count = count_ados(n_real, n_imag, depth);
  if (count > ado_budget) {
    throw BudgetError("hierarchy: " + std::to_string(count) +
                          " ADOs exceed the configured budget of " +
                          std::to_string(ado_budget),
                      count, ado_budget);
  }

  const int slots = n_real + n_imag;
  size_ = static_cast<std::size_t>(count);

  // vectors_within(l, b) = binomial(l + b, l), tabulated for ranking.
  binom_cols_ = depth + 1;
  binom_.assign(static_cast<std::size_t>(slots + 1) * static_cast<std::size_t>(binom_cols_), 1);
  for (int l = 1; l <= slots; ++l) {
    for (int b = 1; b <= depth; ++b) {
      binom_[static_cast<std::size_t>(l) * static_cast<std::size_t>(binom_cols_) +
             static_cast<std::size_t>(b)] =
          vectors_within(l, b - 1) + vectors_within(l - 1, b);
    }
  }

  // Enumerate in ascending lexicographic order.
  occ_.assign(size_ * static_cast<std::size_t>(slots), 0);
  order_.assign(size_, 0);
  std::vector<int> v(static_cast<std::size_t>(slots), 0);
  std::size_t idx = 0;
  while (true) {
    int sum = 0;
    for (int j = 0; j < slots; ++j) sum += v[static_cast<std::size_t>(j)];
    for (int j = 0; j < slots; ++j) {
      occ_[idx * static_cast<std::size_t>(slots) + static_cast<std::size_t>(j)] =
          static_cast<std::uint16_t>(v[static_cast<std::size_t>(j)]);
    }
    order_[idx] = static_cast<std::uint16_t>(sum);
    ++idx;

    // next vector in lexicographic order with sum <= depth
    int j = slots - 1;
    while (j >= 0) {
      ++v[static_cast<std::size_t>(j)];
      ++sum;
      if (sum <= depth) break;
      sum -= v[static_cast<std::size_t>(j)];
      v[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }

  // Neighbor tables via combinatorial ranking.
  if (size_ > static_cast<std::size_t>(kNone32)) {
    throw BudgetError("hierarchy: enumeration exceeds the 32-bit index range",
                      size_, static_cast<std::uint64_t>(kNone32));
  }
  raise_.assign(size_ * static_cast<std::size_t>(slots), kNone32);
  lower_.assign(size_ * static_cast<std::size_t>(slots), kNone32);
  std::vector<int> w(static_cast<std::size_t>(slots));
  for (std::size_t a = 0; a < size_; ++a) {
    for (int j = 0; j < slots; ++j) {
      w[static_cast<std::size_t>(j)] = occupation(a, j);
    }
    const int h = order(a);
    for (int j = 0; j < slots; ++j) {
      if (h < depth) {
        ++w[static_cast<std::size_t>(j)];
        raise_[a * static_cast<std::size_t>(slots) + static_cast<std::size_t>(j)] =
            static_cast<std::uint32_t>(position(w));
        --w[static_cast<std::size_t>(j)];
      }
      if (w[static_cast<std::size_t>(j)] > 0) {
        --w[static_cast<std::size_t>(j)];
        lower_[a * static_cast<std::size_t>(slots) + static_cast<std::size_t>(j)] =
            static_cast<std::uint32_t>(position(w));
        ++w[static_cast<std::size_t>(j)];
      }
    }
  }
}

std::size_t HierarchySpace::position(std::span<const int> occ) const {
  const int slots = n_real_ + n_imag_;
  if (static_cast<int>(occ.size()) != slots) return npos;
  int budget = depth_;
  std::uint64_t rank = 0;
  for (int j = 0; j < slots; ++j) {
    const int vj = occ[static_cast<std::size_t>(j)];
    if (vj < 0 || vj > budget) return npos;
    // vectors whose j-th component is smaller than vj, prefix equal
    for (int c = 0; c < vj; ++c) {
      rank += vectors_within(slots - 1 - j, budget - c);
    }
    budget -= vj;
  }
  return static_cast<std::size_t>(rank);
}

AdoIndex HierarchySpace::index_at(std::size_t ado) const {
  AdoIndex out;
  out.occ_real.resize(static_cast<std::size_t>(n_real_));
  out.occ_imag.resize(static_cast<std::size_t>(n_imag_));
  for (int j = 0; j < n_real_; ++j) out.occ_real[static_cast<std::size_t>(j)] = occupation(ado, j);
  for (int j = 0; j < n_imag_; ++j) {
    out.occ_imag[static_cast<std::size_t>(j)] = occupation(ado, n_real_ + j);
  }
  return out;
}

}  // namespace sbheom
