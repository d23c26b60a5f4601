#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace siedm {

/*
 * Sequence over a large integer alphabet [0, alphabet_size) with
 * access/rank/select. The values are kept in a plain array; rank and select
 * go through the permutation that lists positions grouped by symbol (one
 * offset per symbol), so select is O(1) and rank is a binary search inside
 * the symbol's position list.
 *
 * Positions are 0-based, rank is inclusive, select takes a 1-based k.
 */
class IntSequence {
 public:
  IntSequence() = default;
  IntSequence(std::vector<std::uint32_t> values, std::uint32_t alphabet_size);

  std::size_t size() const { return values_.size(); }
  std::uint32_t alphabet_size() const { return alphabet_size_; }

  std::uint32_t access(std::size_t i) const;
  std::size_t rank(std::uint32_t v, std::size_t i) const;
  std::size_t select(std::uint32_t v, std::size_t k) const;
  std::size_t count(std::uint32_t v) const;

  std::span<const std::uint32_t> values() const { return values_; }
  std::size_t size_in_bytes() const;

  friend bool operator==(const IntSequence& a, const IntSequence& b) {
    return a.alphabet_size_ == b.alphabet_size_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::uint32_t> values_;
  std::vector<std::uint32_t> offsets_;    // alphabet_size + 1 entries
  std::vector<std::uint32_t> positions_;  // grouped by symbol, ascending
  std::uint32_t alphabet_size_ = 0;
};

}  // namespace siedm
