#include "siedm/bit_vector.hpp"

#include <algorithm>
#include <bit>

#include "siedm/error.hpp"

namespace siedm {

namespace {

// Position of the k-th (1-based) set bit of w; w must have at least k ones.
unsigned select_in_word(std::uint64_t w, std::size_t k) {
  for (std::size_t i = 1; i < k; ++i) w &= w - 1;
  return static_cast<unsigned>(std::countr_zero(w));
}

std::uint64_t tail_mask(std::size_t size) {
  const std::size_t r = size & 63;
  return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
}

}  // namespace

BitVector::BitVector(std::vector<std::uint64_t> words, std::size_t size)
    : words_(std::move(words)), size_(size) {
  const std::size_t need = (size_ + 63) / 64;
  if (words_.size() < need) {
    throw InvariantError("bit vector: word buffer shorter than bit length");
  }
  words_.resize(need);
  if (need > 0) words_.back() &= tail_mask(size_);
  build_directory();
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVectorBuilder b;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw InvariantError("bit vector: expected '0' or '1'");
    }
    b.push_back(ch == '1');
  }
  return std::move(b).build();
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t size) {
  if (bytes.size() != (size + 7) / 8) {
    throw InvariantError("bit vector: byte image does not match bit length");
  }
  std::vector<std::uint64_t> words((size + 63) / 64, 0);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    words[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
  }
  return BitVector(std::move(words), size);
}

void BitVector::build_directory() {
  const std::size_t blocks = (words_.size() + kWordsPerBlock - 1) / kWordsPerBlock;
  block_ones_.assign(blocks + 1, 0);
  std::size_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (w % kWordsPerBlock == 0) block_ones_[w / kWordsPerBlock] = acc;
    acc += static_cast<std::size_t>(std::popcount(words_[w]));
  }
  block_ones_[blocks] = acc;
  ones_ = acc;
}

bool BitVector::access(std::size_t i) const {
  if (i >= size_) throw RangeError("bit vector: access out of range");
  return (*this)[i];
}

std::size_t BitVector::rank1_unchecked(std::size_t i) const {
  const std::size_t w = i >> 6;
  const std::size_t block = w / kWordsPerBlock;
  std::size_t r = block_ones_[block];
  for (std::size_t j = block * kWordsPerBlock; j < w; ++j) {
    r += static_cast<std::size_t>(std::popcount(words_[j]));
  }
  const unsigned off = static_cast<unsigned>(i & 63);
  const std::uint64_t mask = off == 63 ? ~std::uint64_t{0} : (std::uint64_t{2} << off) - 1;
  return r + static_cast<std::size_t>(std::popcount(words_[w] & mask));
}

std::size_t BitVector::rank(bool c, std::size_t i) const {
  if (i >= size_) throw RangeError("bit vector: rank position out of range");
  const std::size_t ones = rank1_unchecked(i);
  return c ? ones : i + 1 - ones;
}

std::size_t BitVector::select(bool c, std::size_t k) const {
  if (k == 0 || k > count(c)) {
    throw NotFoundError("bit vector: select beyond the number of occurrences");
  }
  // Count of c-bits before superblock b.
  auto before = [&](std::size_t b) -> std::size_t {
    const std::size_t ones = block_ones_[b];
    return c ? ones : std::min(b * kBitsPerBlock, size_) - ones;
  };
  // Last superblock whose prefix count is < k.
  std::size_t lo = 0;
  std::size_t hi = block_ones_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (before(mid) < k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::size_t remaining = k - before(lo);
  for (std::size_t w = lo * kWordsPerBlock; w < words_.size(); ++w) {
    std::uint64_t word = c ? words_[w] : ~words_[w];
    if (!c && w + 1 == words_.size()) word &= tail_mask(size_);
    const auto pc = static_cast<std::size_t>(std::popcount(word));
    if (pc >= remaining) return w * 64 + select_in_word(word, remaining);
    remaining -= pc;
  }
  throw NotFoundError("bit vector: select directory inconsistent");
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
  std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
  }
  return out;
}

std::size_t BitVector::size_in_bytes() const {
  return words_.size() * sizeof(std::uint64_t) + block_ones_.size() * sizeof(std::uint64_t);
}

void BitVectorBuilder::push_back(bool bit) {
  if ((size_ & 63) == 0) words_.push_back(0);
  if (bit) words_.back() |= std::uint64_t{1} << (size_ & 63);
  ++size_;
}

void BitVectorBuilder::append(bool bit, std::size_t count) {
  // Fast path for long zero runs (unary gaps).
  if (!bit) {
    size_ += count;
    words_.resize((size_ + 63) / 64, 0);
    return;
  }
  for (std::size_t i = 0; i < count; ++i) push_back(true);
}

BitVector BitVectorBuilder::build() && {
  return BitVector(std::move(words_), size_);
}

BitVector encode_monotone(std::span<const std::uint64_t> xs) {
  BitVectorBuilder b;
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i == 0 && xs[0] < 1) {
      throw InvariantError("encode_monotone: first value must be >= 1");
    }
    if (xs[i] < prev) {
      throw InvariantError("encode_monotone: sequence is not non-decreasing");
    }
    b.append(false, xs[i] - prev);
    b.push_back(true);
    prev = xs[i];
  }
  return std::move(b).build();
}

std::uint64_t decode_monotone(const BitVector& code, std::size_t k) {
  return code.rank(false, code.select(true, k));
}

}  // namespace siedm
