#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace siedm {

using SymbolId = std::uint32_t;

struct CharVecEntry {
  SymbolId symbol;
  std::uint32_t count;

  friend bool operator==(const CharVecEntry&, const CharVecEntry&) = default;
};

// Sparse frequency vector over symbols. Entries are sorted by symbol and
// every stored count is >= 1, so the key set is exactly the support V(X).
class CharVec {
 public:
  CharVec() = default;
  CharVec(std::initializer_list<CharVecEntry> entries);
  static CharVec unit(SymbolId symbol);
  // Accepts unsorted entries with repeats; zero counts are dropped.
  static CharVec from_entries(std::vector<CharVecEntry> entries);

  std::uint32_t operator[](SymbolId symbol) const;
  bool contains(SymbolId symbol) const { return (*this)[symbol] != 0; }
  std::span<const CharVecEntry> entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  std::uint64_t mass() const;
  bool empty() const { return entries_.empty(); }

  void add(SymbolId symbol, std::uint32_t count = 1);
  CharVec& operator+=(const CharVec& other);
  friend CharVec operator+(const CharVec& a, const CharVec& b);

  friend bool operator==(const CharVec&, const CharVec&) = default;

 private:
  std::vector<CharVecEntry> entries_;
};

// ||a - b||_1
std::uint64_t l1_distance(const CharVec& a, const CharVec& b);

}  // namespace siedm
