#include "typeb/partitions.hpp"

#include <algorithm>
#include <map>

#include "typeb/errors.hpp"

namespace typeb {

Pairing::Pairing(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
  const auto n = arcs_.size();
  std::vector<bool> seen(2 * n + 1, false);
  for (const Arc& a : arcs_) {
    if (a.open >= a.close) throw InputError("pairing block must satisfy w < z");
    if (a.open < 1 || a.close > static_cast<int>(2 * n)) {
      throw InputError("pairing position outside [2n]");
    }
    if (seen[a.open] || seen[a.close]) throw InputError("pairing position repeated");
    seen[a.open] = seen[a.close] = true;
  }
  std::sort(arcs_.begin(), arcs_.end(),
            [](const Arc& x, const Arc& y) { return x.open < y.open; });
}

TypeBPairing::TypeBPairing(Pairing pairing, std::uint32_t negative_mask)
    : pairing_(std::move(pairing)), mask_(negative_mask) {
  const int n = pairing_.size();
  if (n < 32 && (mask_ >> n) != 0) throw InputError("coloring has bits beyond block count");
}

namespace {

// In-place backtracking: `used` marks taken positions, arcs grow in opener
// order so every emitted list is already canonical.
void pair_recursive(int n2, std::vector<char>& used, std::vector<Arc>& arcs,
                    const std::function<void(const std::vector<Arc>&)>& emit) {
  int first = 1;
  while (first <= n2 && used[first]) ++first;
  if (first > n2) {
    emit(arcs);
    return;
  }
  used[first] = 1;
  for (int partner = first + 1; partner <= n2; ++partner) {
    if (used[partner]) continue;
    used[partner] = 1;
    arcs.push_back({first, partner});
    pair_recursive(n2, used, arcs, emit);
    arcs.pop_back();
    used[partner] = 0;
  }
  used[first] = 0;
}

}  // namespace

void for_each_pairing(int n, const std::function<void(const Pairing&)>& visit) {
  if (n < 0) throw InputError("pairing block count must be non-negative");
  std::vector<char> used(static_cast<std::size_t>(2 * n + 1), 0);
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(n));
  Pairing scratch;
  pair_recursive(2 * n, used, arcs, [&](const std::vector<Arc>& a) {
    scratch.arcs_.assign(a.begin(), a.end());
    visit(scratch);
  });
}

std::vector<Pairing> enumerate_pairings(int n) {
  std::vector<Pairing> out;
  out.reserve(double_factorial_odd(n));
  for_each_pairing(n, [&out](const Pairing& p) { out.push_back(p); });
  return out;
}

std::uint64_t double_factorial_odd(int n) {
  std::uint64_t r = 1;
  for (int k = 2 * n - 1; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

int crossings(const Pairing& p) {
  int count = 0;
  const auto arcs = p.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    for (std::size_t j = 0; j < arcs.size(); ++j) {
      if (arcs[i].open < arcs[j].open && arcs[j].open < arcs[i].close &&
          arcs[i].close < arcs[j].close) {
        ++count;
      }
    }
  }
  return count;
}

int nestings(const Pairing& p) {
  int count = 0;
  for (int c : cover_counts(p)) count += c;
  return count;
}

std::vector<int> cover_counts(const Pairing& p) {
  const auto arcs = p.arcs();
  std::vector<int> covers(arcs.size(), 0);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    for (std::size_t j = 0; j < arcs.size(); ++j) {
      if (arcs[i].open < arcs[j].open && arcs[j].close < arcs[i].close) ++covers[j];
    }
  }
  return covers;
}

int negative_blocks(const TypeBPairing& tb) {
  int count = 0;
  for (int i = 0; i < tb.pairing().size(); ++i) count += tb.sign(i) < 0 ? 1 : 0;
  return count;
}

int cnb(const TypeBPairing& tb) {
  const auto covers = cover_counts(tb.pairing());
  int count = 0;
  for (std::size_t j = 0; j < covers.size(); ++j) {
    if (tb.sign(static_cast<int>(j)) < 0) count += covers[j];
  }
  return count;
}

SetPartition partition_class(std::span<const int> tuple) {
  if (tuple.empty()) throw InputError("partition_class needs a nonempty tuple");
  SetPartition out;
  out.ground = static_cast<int>(tuple.size());
  std::map<int, std::size_t> block_of;
  for (std::size_t pos = 0; pos < tuple.size(); ++pos) {
    auto [it, inserted] = block_of.try_emplace(tuple[pos], out.blocks.size());
    if (inserted) out.blocks.emplace_back();
    out.blocks[it->second].push_back(static_cast<int>(pos) + 1);
  }
  return out;
}

namespace {

// Blocks are generated by always placing the smallest unassigned element
// together with a chosen subset of the larger unassigned ones.
void set_partitions_recursive(std::vector<int>& remaining, std::vector<std::vector<int>>& blocks,
                              int ground, bool even_only, std::vector<SetPartition>& out) {
  if (remaining.empty()) {
    out.push_back({ground, blocks});
    return;
  }
  const int head = remaining.front();
  const int others = static_cast<int>(remaining.size()) - 1;
  // Enumerate companion subsets in lexicographic order of their index lists.
  std::vector<int> pick;
  const std::function<void(int)> choose = [&](int from) {
    const int size = static_cast<int>(pick.size()) + 1;
    if (size >= 2 && (!even_only || size % 2 == 0)) {
      std::vector<int> block{head};
      std::vector<int> rest;
      std::size_t cursor = 0;
      for (int t = 1; t <= others; ++t) {
        if (cursor < pick.size() && pick[cursor] == t) {
          block.push_back(remaining[t]);
          ++cursor;
        } else {
          rest.push_back(remaining[t]);
        }
      }
      blocks.push_back(std::move(block));
      set_partitions_recursive(rest, blocks, ground, even_only, out);
      blocks.pop_back();
    }
    for (int t = from; t <= others; ++t) {
      pick.push_back(t);
      choose(t + 1);
      pick.pop_back();
    }
  };
  choose(1);
}

std::vector<SetPartition> set_partitions_filtered(int k, bool even_only) {
  if (k < 0) throw InputError("ground-set size must be non-negative");
  std::vector<int> remaining(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) remaining[i] = i + 1;
  std::vector<std::vector<int>> blocks;
  std::vector<SetPartition> out;
  set_partitions_recursive(remaining, blocks, k, even_only, out);
  return out;
}

}  // namespace

std::vector<SetPartition> enumerate_set_partitions_min2(int k) {
  return set_partitions_filtered(k, false);
}

std::vector<SetPartition> enumerate_set_partitions_even(int k) {
  return set_partitions_filtered(k, true);
}

}  // namespace typeb
