#include "siedm/int_sequence.hpp"

#include <algorithm>
#include <limits>

#include "siedm/error.hpp"

namespace siedm {

IntSequence::IntSequence(std::vector<std::uint32_t> values, std::uint32_t alphabet_size)
    : values_(std::move(values)), alphabet_size_(alphabet_size) {
  if (values_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw InvariantError("int sequence: too many values");
  }
  offsets_.assign(std::size_t{alphabet_size_} + 1, 0);
  for (std::uint32_t v : values_) {
    if (v >= alphabet_size_) throw RangeError("int sequence: value outside alphabet");
    ++offsets_[v + 1];
  }
  for (std::size_t s = 1; s < offsets_.size(); ++s) offsets_[s] += offsets_[s - 1];
  positions_.resize(values_.size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    positions_[fill[values_[i]]++] = static_cast<std::uint32_t>(i);
  }
}

std::uint32_t IntSequence::access(std::size_t i) const {
  if (i >= values_.size()) throw RangeError("int sequence: access out of range");
  return values_[i];
}

std::size_t IntSequence::count(std::uint32_t v) const {
  if (v >= alphabet_size_) throw RangeError("int sequence: symbol outside alphabet");
  return offsets_[v + 1] - offsets_[v];
}

std::size_t IntSequence::rank(std::uint32_t v, std::size_t i) const {
  if (i >= values_.size()) throw RangeError("int sequence: rank position out of range");
  if (v >= alphabet_size_) throw RangeError("int sequence: symbol outside alphabet");
  const auto first = positions_.begin() + offsets_[v];
  const auto last = positions_.begin() + offsets_[v + 1];
  return static_cast<std::size_t>(std::upper_bound(first, last, i) - first);
}

std::size_t IntSequence::select(std::uint32_t v, std::size_t k) const {
  if (k == 0 || k > count(v)) {
    throw NotFoundError("int sequence: select beyond the number of occurrences");
  }
  return positions_[offsets_[v] + k - 1];
}

std::size_t IntSequence::size_in_bytes() const {
  return (values_.size() + offsets_.size() + positions_.size()) * sizeof(std::uint32_t);
}

}  // namespace siedm
