#include "siedm/char_vec.hpp"

#include <algorithm>

namespace siedm {

CharVec::CharVec(std::initializer_list<CharVecEntry> entries)
    : CharVec(from_entries(std::vector<CharVecEntry>(entries))) {}

CharVec CharVec::unit(SymbolId symbol) {
  CharVec v;
  v.entries_.push_back({symbol, 1});
  return v;
}

CharVec CharVec::from_entries(std::vector<CharVecEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const CharVecEntry& a, const CharVecEntry& b) { return a.symbol < b.symbol; });
  CharVec v;
  for (const auto& e : entries) {
    if (e.count == 0) continue;
    if (!v.entries_.empty() && v.entries_.back().symbol == e.symbol) {
      v.entries_.back().count += e.count;
    } else {
      v.entries_.push_back(e);
    }
  }
  return v;
}

std::uint32_t CharVec::operator[](SymbolId symbol) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), symbol,
                             [](const CharVecEntry& e, SymbolId s) { return e.symbol < s; });
  return (it != entries_.end() && it->symbol == symbol) ? it->count : 0;
}

std::uint64_t CharVec::mass() const {
  std::uint64_t m = 0;
  for (const auto& e : entries_) m += e.count;
  return m;
}

void CharVec::add(SymbolId symbol, std::uint32_t count) {
  if (count == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), symbol,
                             [](const CharVecEntry& e, SymbolId s) { return e.symbol < s; });
  if (it != entries_.end() && it->symbol == symbol) {
    it->count += count;
  } else {
    entries_.insert(it, {symbol, count});
  }
}

CharVec operator+(const CharVec& a, const CharVec& b) {
  CharVec out;
  out.entries_.reserve(a.entries_.size() + b.entries_.size());
  auto i = a.entries_.begin();
  auto j = b.entries_.begin();
  while (i != a.entries_.end() && j != b.entries_.end()) {
    if (i->symbol < j->symbol) {
      out.entries_.push_back(*i++);
    } else if (j->symbol < i->symbol) {
      out.entries_.push_back(*j++);
    } else {
      out.entries_.push_back({i->symbol, i->count + j->count});
      ++i;
      ++j;
    }
  }
  out.entries_.insert(out.entries_.end(), i, a.entries_.end());
  out.entries_.insert(out.entries_.end(), j, b.entries_.end());
  return out;
}

CharVec& CharVec::operator+=(const CharVec& other) {
  *this = *this + other;
  return *this;
}

std::uint64_t l1_distance(const CharVec& a, const CharVec& b) {
  std::uint64_t d = 0;
  auto x = a.entries().begin();
  auto y = b.entries().begin();
  while (x != a.entries().end() && y != b.entries().end()) {
    if (x->symbol < y->symbol) {
      d += (x++)->count;
    } else if (y->symbol < x->symbol) {
      d += (y++)->count;
    } else {
      d += x->count > y->count ? x->count - y->count : y->count - x->count;
      ++x;
      ++y;
    }
  }
  for (; x != a.entries().end(); ++x) d += x->count;
  for (; y != b.entries().end(); ++y) d += y->count;
  return d;
}

}  // namespace siedm
