#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "siedm/esp.hpp"

namespace siedm::detail {

inline std::uint64_t pair_key(SymbolId left, SymbolId right) {
  return (std::uint64_t{left} << 32) | right;
}

// Replaces every block by its variable: a 2-block AB by D(A,B), a 3-block
// ABC by D(A, D(B,C)) with the inner variable flagged intermediate.
template <class Dict>
std::vector<SymbolId> apply_blocks(std::span<const SymbolId> seq,
                                   std::span<const std::uint8_t> blocks, Dict& dict) {
  std::vector<SymbolId> out;
  out.reserve(blocks.size());
  std::size_t pos = 0;
  for (std::uint8_t len : blocks) {
    if (len == 2) {
      out.push_back(dict(seq[pos], seq[pos + 1], false));
    } else {
      const SymbolId inner = dict(seq[pos + 1], seq[pos + 2], true);
      out.push_back(dict(seq[pos], inner, false));
    }
    pos += len;
  }
  return out;
}

// Canonical order of one round's rules: stable sort on the left child, so
// rules sharing a left child keep their creation order.
inline std::vector<std::uint32_t> canonical_order(std::span<const Rule> round) {
  std::vector<std::uint32_t> order(round.size());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return round[a].left < round[b].left;
  });
  return order;
}

}  // namespace siedm::detail
