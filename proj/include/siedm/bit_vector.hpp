#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace siedm {

/*
 * Static bit vector with rank/select support.
 *
 * Conventions (all public positions are 0-based):
 *   rank(c, i)   number of c-bits in B[0, i], inclusive.
 *   select(c, k) position of the k-th c-bit, k counted from 1.
 * The identity x_k = rank_0(U, select_1(U, k)) for monotone codes holds
 * verbatim with a 1-based k and 0-based positions.
 *
 * Rank uses one cumulative count per 512-bit superblock plus popcount over
 * at most eight words. Select binary-searches the superblock counts.
 */
class BitVector {
 public:
  BitVector() = default;
  BitVector(std::vector<std::uint64_t> words, std::size_t size);

  static BitVector from_string(std::string_view bits);
  static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t size);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool operator[](std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  bool access(std::size_t i) const;

  std::size_t rank(bool c, std::size_t i) const;
  std::size_t select(bool c, std::size_t k) const;
  std::size_t count(bool c) const { return c ? ones_ : size_ - ones_; }

  std::string to_string() const;
  // Little-endian byte image: bit 0 is the least significant bit of byte 0.
  std::vector<std::uint8_t> to_bytes() const;
  std::span<const std::uint64_t> words() const { return words_; }

  std::size_t size_in_bytes() const;

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  void build_directory();
  std::size_t rank1_unchecked(std::size_t i) const;

  static constexpr std::size_t kWordsPerBlock = 8;
  static constexpr std::size_t kBitsPerBlock = 64 * kWordsPerBlock;

  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> block_ones_;  // ones before each superblock
  std::size_t size_ = 0;
  std::size_t ones_ = 0;
};

class BitVectorBuilder {
 public:
  void push_back(bool bit);
  void append(bool bit, std::size_t count);
  std::size_t size() const { return size_; }
  BitVector build() &&;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

// Gap + unary code of a non-decreasing sequence: each gap g (first gap is
// xs[0] itself) becomes 0^g 1. Requires xs[0] >= 1. Throws InvariantError on
// a decrease or a zero first value.
BitVector encode_monotone(std::span<const std::uint64_t> xs);

// k-th value (1-based) of a sequence encoded by encode_monotone.
std::uint64_t decode_monotone(const BitVector& code, std::size_t k);

}  // namespace siedm
