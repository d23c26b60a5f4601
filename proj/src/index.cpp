#include "siedm/index.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "esp_internal.hpp"

namespace siedm {

namespace {

// F(x) computed straight from the grammar. Only used for grammars whose
// children skip rounds, which build_esp_tree never produces.
CharVec grammar_char_vec(const EspGrammar& g, SymbolId x) {
  if (x < g.sigma) return CharVec::unit(x);
  const Rule& r = g.rule(x);
  CharVec v = grammar_char_vec(g, r.left) + grammar_char_vec(g, r.right);
  v.add(x);
  return v;
}

}  // namespace

EspGrammar rename_grammar(const EspGrammar& g, std::vector<SymbolId>* renaming) {
  const SymbolId end = g.symbol_end();
  std::vector<SymbolId> to_new(end);
  std::iota(to_new.begin(), to_new.begin() + g.sigma, SymbolId{0});

  EspGrammar out = g;
  for (std::size_t r = 1; r < g.round_bounds.size(); ++r) {
    const SymbolId b0 = g.round_bounds[r - 1];
    const SymbolId b1 = g.round_bounds[r];
    std::vector<Rule> round(g.rules.begin() + (b0 - g.sigma), g.rules.begin() + (b1 - g.sigma));
    for (Rule& rule : round) {
      if (rule.left >= b0) throw InvariantError("rename: left child must precede its round");
      rule.left = to_new[rule.left];
      if (rule.right < b0) rule.right = to_new[rule.right];
    }
    for (const Rule& rule : round) {
      if (rule.right >= b1) throw InvariantError("rename: right child from a later round");
    }
    const std::vector<std::uint32_t> order = detail::canonical_order(round);
    for (std::size_t k = 0; k < order.size(); ++k) {
      to_new[b0 + order[k]] = b0 + static_cast<SymbolId>(k);
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
      Rule rule = round[order[k]];
      rule.lhs = b0 + static_cast<SymbolId>(k);
      if (rule.right >= b0) rule.right = to_new[rule.right];
      out.rules[rule.lhs - g.sigma] = rule;
    }
  }
  for (SymbolId x = 0; x < end; ++x) out.lengths[to_new[x]] = g.lengths[x];
  out.root = to_new[g.root];
  if (renaming != nullptr) *renaming = std::move(to_new);
  return out;
}

EspIndex encode_grammar(const EspGrammar& input) {
  input.validate();
  const EspGrammar g = rename_grammar(input);

  EspIndex idx;
  idx.sigma_ = g.sigma;
  idx.n_ = g.variable_count();
  idx.root_ = g.root;
  idx.text_length_ = g.lengths[g.root];
  idx.round_bounds_ = g.round_bounds;
  idx.terminal_bytes_ = g.terminal_bytes;
  idx.byte_to_terminal_.fill(-1);
  for (SymbolId t = 0; t < g.sigma; ++t) {
    const std::uint8_t b = g.terminal_bytes[t];
    if (t > 0 && b <= g.terminal_bytes[t - 1]) {
      throw InvariantError("encode: terminal bytes must be strictly ascending");
    }
    idx.terminal_bitmap_[b / 64] |= std::uint64_t{1} << (b % 64);
    idx.byte_to_terminal_[b] = static_cast<std::int32_t>(t);
  }

  std::vector<std::uint64_t> lefts(idx.n_);
  std::vector<std::uint32_t> rights(idx.n_);
  idx.lengths_.resize(idx.n_);
  for (std::size_t k = 0; k < idx.n_; ++k) {
    lefts[k] = std::uint64_t{g.rules[k].left} + 1;
    rights[k] = g.rules[k].right;
    idx.lengths_[k] = g.lengths[g.sigma + k];
  }
  idx.left_code_ = encode_monotone(lefts);
  idx.right_seq_ = IntSequence(std::move(rights), g.symbol_end());

  // Characteristic vectors, one round at a time. Only the previous round's
  // vectors are kept besides the stored ones.
  BitVectorBuilder flags;
  std::vector<CharVec> prev;
  std::vector<CharVec> cur;
  SymbolId prev_base = g.sigma;
  for (std::uint32_t r = 1; r < g.round_bounds.size(); ++r) {
    const SymbolId b0 = g.round_bounds[r - 1];
    const SymbolId b1 = g.round_bounds[r];
    cur.assign(b1 - b0, CharVec{});
    std::vector<bool> done(b1 - b0, false);

    auto compute = [&](auto&& self, SymbolId x) -> void {
      if (done[x - b0]) return;
      const Rule& rule = g.rule(x);
      CharVec tmp_l;
      CharVec tmp_r;
      auto fetch = [&](SymbolId s, CharVec& tmp) -> const CharVec& {
        if (s < g.sigma) {
          tmp = CharVec::unit(s);
          return tmp;
        }
        if (s >= b0) {
          self(self, s);
          return cur[s - b0];
        }
        if (s >= prev_base) return prev[s - prev_base];
        tmp = grammar_char_vec(g, s);
        return tmp;
      };
      const CharVec& fl = fetch(rule.left, tmp_l);
      const CharVec& fr = fetch(rule.right, tmp_r);
      CharVec v = fl + fr;
      v.add(x);
      cur[x - b0] = std::move(v);
      done[x - b0] = true;
    };

    for (SymbolId x = b0; x < b1; ++x) compute(compute, x);
    for (SymbolId x = b0; x < b1; ++x) {
      const bool keep = (r % 2 == 0) || x == g.root;
      flags.push_back(keep);
      if (!keep) continue;
      const auto entries = cur[x - b0].entries();
      idx.stored_entries_.insert(idx.stored_entries_.end(), entries.begin(), entries.end());
      idx.stored_offsets_.push_back(idx.stored_entries_.size());
    }
    prev = std::move(cur);
    cur.clear();
    prev_base = b0;
  }
  idx.stored_ = std::move(flags).build();
  return idx;
}

EspIndex EspIndex::build(std::string_view text) {
  return encode_grammar(build_esp_tree(text));
}

std::uint32_t EspIndex::round_of(SymbolId x) const {
  check_symbol(x);
  if (x < sigma_) return 0;
  auto it = std::upper_bound(round_bounds_.begin(), round_bounds_.end(), x);
  return static_cast<std::uint32_t>(it - round_bounds_.begin());
}

std::optional<SymbolId> EspIndex::terminal_of(std::uint8_t byte) const {
  const std::int32_t t = byte_to_terminal_[byte];
  if (t < 0) return std::nullopt;
  return static_cast<SymbolId>(t);
}

std::uint8_t EspIndex::byte_of(SymbolId terminal) const {
  if (terminal >= sigma_) throw RangeError("index: not a terminal");
  return terminal_bytes_[terminal];
}

SymbolId EspIndex::left_child(SymbolId x) const {
  check_variable(x);
  // The k-th one of A_l sits after (left + 1) zeros, so its position is
  // left + k with k 1-based.
  const std::size_t k = x - sigma_ + 1;
  return static_cast<SymbolId>(left_code_.select(true, k) - k);
}

SymbolId EspIndex::right_child(SymbolId x) const {
  check_variable(x);
  return right_seq_.access(x - sigma_);
}

std::pair<std::size_t, std::size_t> EspIndex::left_run(SymbolId x) const {
  const std::size_t value = std::size_t{x} + 1;
  if (value > left_code_.count(false)) return {0, 0};
  const std::size_t p = left_code_.select(false, value);
  const std::size_t first = p + 1 - value;
  std::size_t count = 0;
  for (std::size_t q = p + 1; q < left_code_.size() && left_code_[q]; ++q) ++count;
  return {first, count};
}

std::vector<SymbolId> EspIndex::left_parents(SymbolId x) const {
  std::vector<SymbolId> out;
  for_each_left_parent(x, [&](SymbolId p) { out.push_back(p); });
  return out;
}

std::vector<SymbolId> EspIndex::right_parents(SymbolId x) const {
  std::vector<SymbolId> out;
  for_each_right_parent(x, [&](SymbolId p) { out.push_back(p); });
  return out;
}

std::optional<SymbolId> EspIndex::lookup_rule(SymbolId left, SymbolId right) const {
  if (left >= symbol_end() || right >= symbol_end()) return std::nullopt;
  const auto [first, count] = left_run(left);
  if (count == 0) return std::nullopt;
  const std::size_t before = first == 0 ? 0 : right_seq_.rank(right, first - 1);
  if (before == right_seq_.count(right)) return std::nullopt;
  const std::size_t pos = right_seq_.select(right, before + 1);
  if (pos >= first + count) return std::nullopt;
  return static_cast<SymbolId>(sigma_ + pos);
}

bool EspIndex::stores_char_vec(SymbolId x) const {
  check_symbol(x);
  return x >= sigma_ && stored_[x - sigma_];
}

CharVec EspIndex::char_vec(SymbolId x) const {
  check_symbol(x);
  if (x < sigma_) return CharVec::unit(x);
  const std::size_t k = x - sigma_;
  if (stored_[k]) {
    const std::size_t slot = stored_.rank(true, k) - 1;
    std::vector<CharVecEntry> entries(
        stored_entries_.begin() + static_cast<std::ptrdiff_t>(stored_offsets_[slot]),
        stored_entries_.begin() + static_cast<std::ptrdiff_t>(stored_offsets_[slot + 1]));
    return CharVec::from_entries(std::move(entries));
  }
  CharVec v = char_vec(left_child(x)) + char_vec(right_child(x));
  v.add(x);
  return v;
}

SizeBreakdown EspIndex::sizes() const {
  SizeBreakdown s;
  s.encoded_tree = left_code_.size_in_bytes() + right_seq_.size_in_bytes() +
                   round_bounds_.size() * sizeof(SymbolId) + sizeof(terminal_bitmap_);
  s.char_vectors = stored_.size_in_bytes() + stored_offsets_.size() * sizeof(std::uint64_t) +
                   stored_entries_.size() * sizeof(CharVecEntry);
  s.length_vector = lengths_.size() * sizeof(std::uint64_t);
  return s;
}

bool operator==(const EspIndex& a, const EspIndex& b) {
  return a.sigma_ == b.sigma_ && a.n_ == b.n_ && a.text_length_ == b.text_length_ &&
         a.root_ == b.root_ && a.round_bounds_ == b.round_bounds_ &&
         a.terminal_bitmap_ == b.terminal_bitmap_ && a.left_code_ == b.left_code_ &&
         a.right_seq_ == b.right_seq_ && a.lengths_ == b.lengths_ && a.stored_ == b.stored_ &&
         a.stored_offsets_ == b.stored_offsets_ && a.stored_entries_ == b.stored_entries_;
}

}  // namespace siedm
