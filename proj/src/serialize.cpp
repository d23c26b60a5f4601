// Index file layout (little-endian; u64 unless noted):
//
//   "SIEDM001" | sigma | n | rounds | |S| | root (u32)
//   | round_bounds[rounds + 1] | terminal bitmap (32 bytes)
//   | A_l bit length | A_l bytes | A_r count | A_r values (u32 each)
//   | len_vec[n] | FB bit length | FB bytes
//   | per stored variable: entry count (u32), (symbol u32, freq u32)*
//   | CRC-32 (u32) of every preceding byte
#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "siedm/index.hpp"

namespace siedm {

namespace {

constexpr char kMagic[8] = {'S', 'I', 'E', 'D', 'M', '0', '0', '1'};

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::span<const std::uint8_t> bytes(std::uint64_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ == in_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (n > in_.size() - pos_) throw FormatError("index file truncated");
  }
  std::uint64_t get(int width) {
    need(static_cast<std::uint64_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t off = 0;
  while (off < data.size()) {
    const std::size_t chunk = std::min<std::size_t>(data.size() - off, 1U << 30);
    crc = crc32(crc, data.data() + off, static_cast<uInt>(chunk));
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> EspIndex::serialize() const {
  Writer w;
  w.bytes({reinterpret_cast<const std::uint8_t*>(kMagic), sizeof(kMagic)});
  w.u64(sigma_);
  w.u64(n_);
  w.u64(rounds());
  w.u64(text_length_);
  w.u32(root_);
  for (SymbolId b : round_bounds_) w.u64(b);
  for (std::uint64_t word : terminal_bitmap_) w.u64(word);
  w.u64(left_code_.size());
  w.bytes(left_code_.to_bytes());
  w.u64(right_seq_.size());
  for (std::uint32_t v : right_seq_.values()) w.u32(v);
  for (std::uint64_t len : lengths_) w.u64(len);
  w.u64(stored_.size());
  w.bytes(stored_.to_bytes());
  for (std::size_t s = 0; s + 1 < stored_offsets_.size(); ++s) {
    w.u32(static_cast<std::uint32_t>(stored_offsets_[s + 1] - stored_offsets_[s]));
    for (std::size_t e = stored_offsets_[s]; e < stored_offsets_[s + 1]; ++e) {
      w.u32(stored_entries_[e].symbol);
      w.u32(stored_entries_[e].count);
    }
  }
  const std::uint32_t crc = crc32_of(w.buffer());
  w.u32(crc);
  return std::move(w.buffer());
}

EspIndex EspIndex::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a siedm index (bad magic or version)");
  }
  if (bytes.size() < sizeof(kMagic) + 4) throw FormatError("index file truncated");
  const auto body = bytes.first(bytes.size() - 4);
  Reader tail(bytes.last(4));
  if (crc32_of(body) != tail.u32()) throw FormatError("index checksum mismatch");

  Reader r(body);
  r.bytes(sizeof(kMagic));
  EspIndex idx;
  const std::uint64_t sigma = r.u64();
  const std::uint64_t n = r.u64();
  const std::uint64_t rounds = r.u64();
  idx.text_length_ = r.u64();
  idx.root_ = r.u32();
  constexpr std::uint64_t kMaxId = std::numeric_limits<SymbolId>::max();
  if (sigma == 0 || sigma > 256 || n > kMaxId - sigma || rounds > n) {
    throw FormatError("index header out of range");
  }
  idx.sigma_ = static_cast<std::uint32_t>(sigma);
  idx.n_ = static_cast<std::uint32_t>(n);
  if (idx.root_ >= idx.symbol_end()) throw FormatError("root id out of range");

  idx.round_bounds_.clear();
  for (std::uint64_t i = 0; i <= rounds; ++i) {
    const std::uint64_t b = r.u64();
    if (b > sigma + n || (!idx.round_bounds_.empty() && b < idx.round_bounds_.back())) {
      throw FormatError("round bounds are not monotone");
    }
    idx.round_bounds_.push_back(static_cast<SymbolId>(b));
  }
  if (idx.round_bounds_.front() != sigma || idx.round_bounds_.back() != sigma + n) {
    throw FormatError("round bounds do not partition the variables");
  }

  idx.byte_to_terminal_.fill(-1);
  for (auto& word : idx.terminal_bitmap_) word = r.u64();
  for (unsigned b = 0; b < 256; ++b) {
    if ((idx.terminal_bitmap_[b / 64] >> (b % 64)) & 1U) {
      idx.byte_to_terminal_[b] = static_cast<std::int32_t>(idx.terminal_bytes_.size());
      idx.terminal_bytes_.push_back(static_cast<std::uint8_t>(b));
    }
  }
  if (idx.terminal_bytes_.size() != sigma) throw FormatError("terminal bitmap disagrees with sigma");

  const std::uint64_t al_bits = r.u64();
  if (al_bits > (std::numeric_limits<std::uint64_t>::max() - 7)) throw FormatError("bad A_l length");
  idx.left_code_ = BitVector::from_bytes(r.bytes((al_bits + 7) / 8), al_bits);
  if (idx.left_code_.count(true) != n) throw FormatError("A_l does not encode n rules");

  if (r.u64() != n) throw FormatError("A_r length disagrees with n");
  std::vector<std::uint32_t> rights(n);
  for (auto& v : rights) {
    v = r.u32();
    if (v >= sigma + n) throw FormatError("A_r symbol out of range");
  }
  idx.right_seq_ = IntSequence(std::move(rights), idx.symbol_end());

  idx.lengths_.resize(n);
  for (auto& len : idx.lengths_) len = r.u64();

  if (r.u64() != n) throw FormatError("FB length disagrees with n");
  idx.stored_ = BitVector::from_bytes(r.bytes((n + 7) / 8), n);
  for (std::size_t s = 0; s < idx.stored_.count(true); ++s) {
    const std::uint32_t count = r.u32();
    for (std::uint32_t e = 0; e < count; ++e) {
      CharVecEntry entry{r.u32(), r.u32()};
      if (entry.symbol >= sigma + n || entry.count == 0 ||
          (e > 0 && entry.symbol <= idx.stored_entries_.back().symbol)) {
        throw FormatError("malformed characteristic vector");
      }
      idx.stored_entries_.push_back(entry);
    }
    idx.stored_offsets_.push_back(idx.stored_entries_.size());
  }
  if (!r.at_end()) throw FormatError("trailing bytes before checksum");

  // Structural checks: A_l decodes to valid children and lengths add up.
  if (idx.left_code_.count(false) > idx.symbol_end()) throw FormatError("A_l value out of range");
  for (SymbolId x = idx.sigma_; x < idx.symbol_end(); ++x) {
    const SymbolId left = idx.left_child(x);
    if (left >= idx.symbol_end()) throw FormatError("A_l value out of range");
    const std::uint64_t want = idx.length(left) + idx.length(idx.right_child(x));
    if (idx.length(x) != want) throw FormatError("length vector is not additive");
  }
  if (idx.length(idx.root_) != idx.text_length_) throw FormatError("root length mismatch");
  if (idx.root_ >= idx.sigma_ && !idx.stored_[idx.root_ - idx.sigma_]) {
    throw FormatError("root characteristic vector missing");
  }
  return idx;
}

void EspIndex::save(const std::filesystem::path& path) const {
  const auto bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

EspIndex EspIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return deserialize(bytes);
}

}  // namespace siedm
