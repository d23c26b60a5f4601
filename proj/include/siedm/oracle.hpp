#pragma once

// Brute-force references. Nothing here touches the succinct structures:
// trees are walked through the plain grammar produced by the parser.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "siedm/esp.hpp"
#include "siedm/search.hpp"

namespace siedm::oracle {

struct EdmConfig {
  std::size_t max_len = 6;
  std::uint32_t max_depth = 3;
};

// Strings one unit operation away from s: insertion, deletion, replacement
// (letters from `alphabet`) and substring move.
std::vector<std::string> edm_neighbours(std::string_view s, std::string_view alphabet);

// Exact edit distance with moves by breadth-first search; nullopt when the
// distance exceeds cfg.max_depth. Throws InputError past cfg.max_len.
std::optional<std::uint32_t> exact_edm(std::string_view s, std::string_view q, const EdmConfig& cfg = {});

// Every string within `depth` operations of s, with its distance.
std::unordered_map<std::string, std::uint32_t> edm_ball(std::string_view s, std::string_view alphabet,
                                                        std::uint32_t depth);

using Counts = std::map<SymbolId, std::uint64_t>;

std::uint64_t l1(const Counts& a, const Counts& b);

class PlainTree {
 public:
  explicit PlainTree(std::string_view text);
  explicit PlainTree(EspGrammar grammar);

  const EspGrammar& grammar() const { return g_; }
  std::uint64_t text_length() const { return g_.text_length(); }
  SymbolId root() const { return g_.root; }
  bool is_terminal(SymbolId x) const { return x < g_.sigma; }
  std::uint64_t length(SymbolId x) const { return g_.lengths[x]; }
  SymbolId left(SymbolId x) const { return g_.rules[x - g_.sigma].left; }
  SymbolId right(SymbolId x) const { return g_.rules[x - g_.sigma].right; }

  std::optional<SymbolId> lookup(SymbolId left, SymbolId right) const;
  std::optional<SymbolId> terminal_of(std::uint8_t byte) const;
  std::vector<SymbolId> left_parents(SymbolId x) const;
  std::vector<SymbolId> right_parents(SymbolId x) const;

  // 1-based starts of every node of T(S), by symbol. Computed on first use.
  const std::vector<std::vector<std::uint64_t>>& positions() const;

  // Adds one count per node of the subtree rooted at x.
  void count_nodes(SymbolId x, Counts& into) const;
  Counts char_vec(SymbolId x) const;

  // Maximal subtree decomposition of val(x)[lo, hi] (1-based, inclusive).
  std::vector<SymbolId> decompose(SymbolId x, std::uint64_t lo, std::uint64_t hi) const;
  std::vector<SymbolId> decompose(std::uint64_t lo, std::uint64_t hi) const {
    return decompose(g_.root, lo, hi);
  }

 private:
  void decompose_into(SymbolId x, std::uint64_t lo, std::uint64_t hi, std::vector<SymbolId>& out) const;

  EspGrammar g_;
  std::unordered_map<std::uint64_t, SymbolId> by_pair_;
  std::vector<std::vector<SymbolId>> left_parents_;
  std::vector<std::vector<SymbolId>> right_parents_;
  mutable std::vector<std::vector<std::uint64_t>> positions_;
};

// F(Q) with Q parsed against the tree's dictionary; unmatched blocks and
// unknown bytes get fresh ids from grammar().symbol_end().
Counts query_vector(const PlainTree& tree, std::string_view q);
Counts pieces_vector(const PlainTree& tree, std::span<const SymbolId> pieces);

// L1 distance between F(Q) and the maximal subtree decomposition of every
// window; entry i - 1 is the window starting at i.
std::vector<std::uint64_t> window_l1(const PlainTree& tree, std::string_view q);
std::vector<std::uint64_t> window_l1(std::string_view s, std::string_view q);
std::uint64_t window_l1_at(const PlainTree& tree, const Counts& fq, std::uint64_t position,
                           std::uint64_t query_length);

struct StabbedGram {
  SymbolId stab = 0;
  std::uint32_t split = 0;
  bool whole = false;
  std::vector<SymbolId> pieces;

  friend auto operator<=>(const StabbedGram&, const StabbedGram&) = default;
};

// Every (variable, split) with len(variable) >= query_length, plus the whole
// variable when its length equals query_length.
std::vector<StabbedGram> enumerate_stabbed(const PlainTree& tree, std::uint64_t query_length);

struct ScoredGram {
  StabbedGram gram;
  std::uint64_t mu_sum = 0;    // mass of G outside V(Q)
  std::uint64_t distance = 0;  // ||F(Q) - G||_1
};

std::vector<ScoredGram> score_stabbed(const PlainTree& tree, std::string_view q);

// Post-filtered, position-expanded and aggregated scored grams.
std::vector<Occurrence> search(const PlainTree& tree, std::span<const ScoredGram> scored,
                               std::uint64_t query_length, std::uint64_t tau);
std::vector<Occurrence> search(const PlainTree& tree, std::string_view q, std::uint64_t tau);

// F(S) and F(Q) with both strings parsed under one shared dictionary
// (terminals are byte values) and the lg* threshold of the longer one.
std::pair<Counts, Counts> shared_char_vecs(std::string_view s, std::string_view q);

}  // namespace siedm::oracle
