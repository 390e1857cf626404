// hierarchy.hpp — Enumeration of ADO occupation indices up to a truncation order

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace sbheom {

// One ADO index: occupation counts per basis function, real slots first.
struct AdoIndex {
  std::vector<int> occ_real;
  std::vector<int> occ_imag;

  int order() const;
};

// All occupation vectors with total order <= depth, in ascending
// lexicographic order, with O(slots) rank lookup and precomputed
// raise/lower neighbor tables.
class HierarchySpace {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  static constexpr std::uint64_t kDefaultBudget = 5'000'000;

  // Number of ADOs, binomial(n_real + n_imag + depth, depth); saturates at
  // uint64 max on overflow.
  static std::uint64_t count_ados(int n_real, int n_imag, int depth);

  // Throws BudgetError (naming the count) if the enumeration would exceed
  // `ado_budget` entries; ConfigError on invalid sizes.
  HierarchySpace(int n_real, int n_imag, int depth,
                 std::uint64_t ado_budget = kDefaultBudget);

  std::size_t size() const noexcept { return size_; }
  int n_real() const noexcept { return n_real_; }
  int n_imag() const noexcept { return n_imag_; }
  int depth() const noexcept { return depth_; }
  int slots() const noexcept { return n_real_ + n_imag_; }

  // Occupation of `slot` (real slots 0..n_real-1, then imaginary).
  int occupation(std::size_t ado, int slot) const {
    return static_cast<int>(occ_[ado * static_cast<std::size_t>(slots()) +
                                 static_cast<std::size_t>(slot)]);
  }
  // Total order h of an ADO.
  int order(std::size_t ado) const { return static_cast<int>(order_[ado]); }

  AdoIndex index_at(std::size_t ado) const;

  // Rank of an occupation vector (length slots()); npos if out of range.
  std::size_t position(std::span<const int> occ) const;

  // Neighbor with one more unit in `slot` (npos at the truncation boundary)
  // and with one fewer (npos when the slot is empty).
  std::size_t raise(std::size_t ado, int slot) const {
    const std::uint32_t v =
        raise_[ado * static_cast<std::size_t>(slots()) + static_cast<std::size_t>(slot)];
    return v == kNone32 ? npos : static_cast<std::size_t>(v);
  }
  std::size_t lower(std::size_t ado, int slot) const {
    const std::uint32_t v =
        lower_[ado * static_cast<std::size_t>(slots()) + static_cast<std::size_t>(slot)];
    return v == kNone32 ? npos : static_cast<std::size_t>(v);
  }
  // Same-order move of one unit from `from` to `to`.
  std::size_t shift(std::size_t ado, int from, int to) const {
    const std::size_t down = lower(ado, from);
    return down == npos ? npos : raise(down, to);
  }

 private:
  static constexpr std::uint32_t kNone32 = static_cast<std::uint32_t>(-1);

  int n_real_ = 0;
  int n_imag_ = 0;
  int depth_ = 0;
  std::size_t size_ = 0;
  std::vector<std::uint16_t> occ_;    // size_ x slots
  std::vector<std::uint16_t> order_;  // total order per ADO
  std::vector<std::uint32_t> raise_;  // size_ x slots, kNone32 = no neighbor
  std::vector<std::uint32_t> lower_;
  std::vector<std::uint64_t> binom_;  // binomial table for ranking
  int binom_cols_ = 0;

  std::uint64_t vectors_within(int len, int budget) const;
};

}  // namespace sbheom
