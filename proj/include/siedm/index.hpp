#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "siedm/bit_vector.hpp"
#include "siedm/char_vec.hpp"
#include "siedm/error.hpp"
#include "siedm/esp.hpp"
#include "siedm/int_sequence.hpp"

namespace siedm {

// Byte sizes of the three index components, in memory.
struct SizeBreakdown {
  std::size_t encoded_tree = 0;     // A_l, A_r, round bounds, terminal map
  std::size_t char_vectors = 0;     // FB bitmap and stored vectors
  std::size_t length_vector = 0;
  std::size_t total() const { return encoded_tree + char_vectors + length_vector; }
};

// Renumbers the variables of every round by a stable sort on the left child
// (children renamed first, bottom-up). Returns the renamed grammar; if
// `renaming` is given it receives old id -> new id for every symbol.
EspGrammar rename_grammar(const EspGrammar& g, std::vector<SymbolId>* renaming = nullptr);

/*
 * Succinct ESP index.
 *
 *   A_l  gap+unary code of (left child + 1) over the variables in id order.
 *        Monotone because rules are sorted by left child inside a round and
 *        every round's left children come from the previous round.
 *   A_r  right children as an IntSequence.
 *   FB   one bit per variable; set when F(X) is materialized (variables of
 *        even rounds and the root). Other vectors are rebuilt from their
 *        children.
 *
 * Immutable after construction; all const members are safe to call
 * concurrently.
 */
class EspIndex {
 public:
  EspIndex() = default;

  static EspIndex build(std::string_view text);
  friend EspIndex encode_grammar(const EspGrammar& g);

  std::uint32_t sigma() const { return sigma_; }
  std::uint32_t variable_count() const { return n_; }
  std::uint32_t rounds() const { return static_cast<std::uint32_t>(round_bounds_.size() - 1); }
  std::uint64_t text_length() const { return text_length_; }
  SymbolId root() const { return root_; }
  SymbolId symbol_end() const { return sigma_ + n_; }
  std::span<const SymbolId> round_bounds() const { return round_bounds_; }

  bool is_terminal(SymbolId x) const { return x < sigma_; }
  bool is_variable(SymbolId x) const { return x >= sigma_ && x < symbol_end(); }
  std::uint32_t round_of(SymbolId x) const;

  std::optional<SymbolId> terminal_of(std::uint8_t byte) const;
  std::uint8_t byte_of(SymbolId terminal) const;

  std::uint64_t length(SymbolId x) const {
    return x < sigma_ ? 1 : lengths_[x - sigma_];
  }

  // Domain errors (RangeError) on terminals.
  SymbolId left_child(SymbolId x) const;
  SymbolId right_child(SymbolId x) const;

  std::vector<SymbolId> left_parents(SymbolId x) const;
  std::vector<SymbolId> right_parents(SymbolId x) const;
  template <class Fn>
  void for_each_left_parent(SymbolId x, Fn&& fn) const;
  template <class Fn>
  void for_each_right_parent(SymbolId x, Fn&& fn) const;

  // The variable whose body is (left, right), if any.
  std::optional<SymbolId> lookup_rule(SymbolId left, SymbolId right) const;

  CharVec char_vec(SymbolId x) const;
  bool stores_char_vec(SymbolId x) const;
  // Calls fn(symbol, count * multiplicity) for every entry of F(x); a symbol
  // may be reported more than once when F(x) is rebuilt from children.
  template <class Fn>
  void visit_char_vec(SymbolId x, std::uint32_t multiplicity, Fn&& fn) const;

  const BitVector& left_code() const { return left_code_; }
  const IntSequence& right_sequence() const { return right_seq_; }
  const BitVector& stored_flags() const { return stored_; }
  std::size_t stored_vector_count() const { return stored_offsets_.size() - 1; }

  SizeBreakdown sizes() const;

  std::vector<std::uint8_t> serialize() const;
  static EspIndex deserialize(std::span<const std::uint8_t> bytes);
  void save(const std::filesystem::path& path) const;
  static EspIndex load(const std::filesystem::path& path);

  friend bool operator==(const EspIndex& a, const EspIndex& b);

 private:
  void check_variable(SymbolId x) const {
    if (!is_variable(x)) throw RangeError("index: symbol is not a variable");
  }
  void check_symbol(SymbolId x) const {
    if (x >= symbol_end()) throw RangeError("index: symbol out of range");
  }
  // First variable index (0-based) whose left child is x and how many there are.
  std::pair<std::size_t, std::size_t> left_run(SymbolId x) const;

  std::uint32_t sigma_ = 0;
  std::uint32_t n_ = 0;
  std::uint64_t text_length_ = 0;
  SymbolId root_ = 0;
  std::vector<SymbolId> round_bounds_{0};
  std::array<std::uint64_t, 4> terminal_bitmap_{};
  std::vector<std::uint8_t> terminal_bytes_;
  std::array<std::int32_t, 256> byte_to_terminal_{};

  BitVector left_code_;
  IntSequence right_seq_;
  std::vector<std::uint64_t> lengths_;

  BitVector stored_;
  std::vector<std::uint64_t> stored_offsets_{0};
  std::vector<CharVecEntry> stored_entries_;
};

EspIndex encode_grammar(const EspGrammar& g);

template <class Fn>
void EspIndex::for_each_left_parent(SymbolId x, Fn&& fn) const {
  check_symbol(x);
  const auto [first, count] = left_run(x);
  for (std::size_t k = 0; k < count; ++k) fn(static_cast<SymbolId>(sigma_ + first + k));
}

template <class Fn>
void EspIndex::for_each_right_parent(SymbolId x, Fn&& fn) const {
  check_symbol(x);
  const std::size_t total = right_seq_.count(x);
  for (std::size_t k = 1; k <= total; ++k) {
    fn(static_cast<SymbolId>(sigma_ + right_seq_.select(x, k)));
  }
}

template <class Fn>
void EspIndex::visit_char_vec(SymbolId x, std::uint32_t multiplicity, Fn&& fn) const {
  check_symbol(x);
  if (x < sigma_) {
    fn(x, multiplicity);
    return;
  }
  const std::size_t k = x - sigma_;
  if (stored_[k]) {
    const std::size_t slot = stored_.rank(true, k) - 1;
    for (std::size_t e = stored_offsets_[slot]; e < stored_offsets_[slot + 1]; ++e) {
      fn(stored_entries_[e].symbol, stored_entries_[e].count * multiplicity);
    }
    return;
  }
  fn(x, multiplicity);
  visit_char_vec(left_child(x), multiplicity, fn);
  visit_char_vec(right_child(x), multiplicity, fn);
}

}  // namespace siedm
