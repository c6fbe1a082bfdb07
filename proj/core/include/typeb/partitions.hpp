#pragma once

// Pair partitions, type-B colorings and set partitions of small ground sets,
// with the crossing / nesting statistics used by the moment formulas.
//
// Positions are 1-based throughout, matching the usual combinatorial
// notation [2n] = {1, ..., 2n}.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace typeb {

/// One block (w, z) of a pairing, w < z.
struct Arc {
  int open = 0;
  int close = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// A pair partition of [2n] in canonical form: blocks sorted by opener.
class Pairing {
 public:
  Pairing() = default;

  /// Validates and canonicalizes (sorts by opener). Throws InputError when the
  /// arcs do not partition {1, ..., 2n}.
  explicit Pairing(std::vector<Arc> arcs);

  int size() const noexcept { return static_cast<int>(arcs_.size()); }
  std::span<const Arc> arcs() const noexcept { return arcs_; }
  const Arc& arc(int i) const { return arcs_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Pairing&, const Pairing&) = default;

 private:
  friend void for_each_pairing(int, const std::function<void(const Pairing&)>&);

  std::vector<Arc> arcs_;
};

/// A pairing plus a sign per block. Bit i of `negative_mask` set means block i
/// (in canonical order) is colored -1.
class TypeBPairing {
 public:
  TypeBPairing(Pairing pairing, std::uint32_t negative_mask);

  const Pairing& pairing() const noexcept { return pairing_; }
  std::uint32_t negative_mask() const noexcept { return mask_; }
  int sign(int block) const { return (mask_ >> block) & 1u ? -1 : +1; }

 private:
  Pairing pairing_;
  std::uint32_t mask_;
};

/// Set partition of [k]; blocks ordered by their smallest element, each block
/// sorted ascending.
struct SetPartition {
  int ground = 0;
  std::vector<std::vector<int>> blocks;

  int block_count() const noexcept { return static_cast<int>(blocks.size()); }
  friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

/// Calls `visit` once per pairing of [2n], in the recursive order "pair the
/// smallest free position with each later free position, left to right".
/// The Pairing reference is only valid for the duration of the call.
void for_each_pairing(int n, const std::function<void(const Pairing&)>& visit);

/// Materialized version of for_each_pairing: (2n-1)!! pairings.
std::vector<Pairing> enumerate_pairings(int n);

/// (2n-1)!!, with 1 for n = 0.
std::uint64_t double_factorial_odd(int n);

int crossings(const Pairing& p);
int nestings(const Pairing& p);
int negative_blocks(const TypeBPairing& tb);

/// Nesting pairs whose inner block is colored -1.
int cnb(const TypeBPairing& tb);

/// For each block, how many blocks of `p` nest over it (w_i < w_j < z_j < z_i
/// with j the given block). cnb(tb) is the sum of these over negative blocks.
std::vector<int> cover_counts(const Pairing& p);

/// Groups positions of `tuple` carrying equal values. Throws InputError on an
/// empty tuple.
SetPartition partition_class(std::span<const int> tuple);

/// All set partitions of [k] whose blocks have size >= 2, in restricted-growth
/// order.
std::vector<SetPartition> enumerate_set_partitions_min2(int k);

/// All set partitions of [k] whose blocks all have even size.
std::vector<SetPartition> enumerate_set_partitions_even(int k);

}  // namespace typeb
