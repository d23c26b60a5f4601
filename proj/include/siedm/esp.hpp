#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "siedm/char_vec.hpp"

namespace siedm {

class EspIndex;

// Production X -> left right. `intermediate` marks a variable first created
// as the inner node of a 2-2-tree (Y -> A X, X -> B C).
struct Rule {
  SymbolId lhs = 0;
  SymbolId left = 0;
  SymbolId right = 0;
  bool intermediate = false;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/*
 * Straight-line program produced by edit-sensitive parsing.
 *
 * Symbol ids are unified: terminals occupy [0, sigma), variables occupy
 * [sigma, sigma + n). Variables are grouped by the round that created them:
 * round r (1-based) owns ids [round_bounds[r-1], round_bounds[r]).
 * rules[k] defines variable sigma + k.
 */
struct EspGrammar {
  std::uint32_t sigma = 0;
  std::vector<std::uint8_t> terminal_bytes;
  std::vector<Rule> rules;
  std::vector<SymbolId> round_bounds;
  std::vector<std::uint64_t> lengths;
  SymbolId root = 0;
  // Sequence length entering round 1 (= |S|), then after every round.
  std::vector<std::uint64_t> sequence_lengths;

  std::uint32_t variable_count() const { return static_cast<std::uint32_t>(rules.size()); }
  std::uint32_t round_count() const {
    return round_bounds.empty() ? 0 : static_cast<std::uint32_t>(round_bounds.size() - 1);
  }
  SymbolId symbol_end() const { return sigma + variable_count(); }
  std::uint64_t text_length() const { return lengths.empty() ? 0 : lengths[root]; }
  bool is_terminal(SymbolId x) const { return x < sigma; }
  const Rule& rule(SymbolId x) const;
  // 0 for terminals, otherwise the 1-based creating round.
  std::uint32_t round_of(SymbolId x) const;
  // val(x) as bytes.
  std::string expand(SymbolId x) const;
  // Checks id ranges, round partition and length additivity.
  void validate() const;

  friend bool operator==(const EspGrammar&, const EspGrammar&) = default;
};

// lg* u = min{ i : lg^(i) u <= 1 }.
std::uint32_t iterated_log(std::uint64_t u);

// Repetition-free runs at least this long are parsed with landmarks.
std::size_t type2_min_length(std::uint64_t text_length);

enum class SegmentType : std::uint8_t {
  kRepetition = 1,
  kLongRepetitionFree = 2,
  kShortRepetitionFree = 3,
};

struct Segment {
  std::size_t begin = 0;
  std::size_t length = 0;
  SegmentType type = SegmentType::kShortRepetitionFree;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// Splits seq into maximal repetitions and the repetition-free runs between
// them. A repetition-free run of length one is absorbed by the preceding
// repetition, or by the following one at the start of the sequence.
std::vector<Segment> classify_segments(std::span<const SymbolId> seq, std::size_t type2_min);

// One relabeling step: out[i-1] = 2p + bit(p, seq[i]) where p is the lowest
// bit in which seq[i] and seq[i-1] differ. Throws InvariantError on equal
// neighbours.
std::vector<std::uint32_t> reduce_alphabet_once(std::span<const std::uint32_t> seq);

// labels[i] belongs to segment position offset + i.
struct LabelSequence {
  std::vector<std::uint32_t> labels;
  std::size_t offset = 0;
};

// Applies reduce_alphabet_once four times (enough to bring any 32-bit
// alphabet below 6; fewer if the sequence runs out), then recolors labels
// >= 3 to the least value in {0,1,2} differing from both neighbours.
LabelSequence alphabet_reduction(std::span<const SymbolId> segment);

// Strict local maxima (a boundary label qualifies when it exceeds its only
// neighbour), plus strict local minima inside gaps of more than three
// positions between consecutive maxima. No two returned positions are
// adjacent.
std::vector<std::size_t> select_landmarks(std::span<const std::uint32_t> labels);

// Block lengths (each 2 or 3, summing to seq.size()) of one parsing round.
std::vector<std::uint8_t> partition_blocks(std::span<const SymbolId> seq, std::size_t type2_min);

// Build-time digram dictionary for a single round: identical (left, right)
// pairs share one variable. Ids are handed out from `first_id` in creation
// order.
class RuleTable {
 public:
  explicit RuleTable(SymbolId first_id) : next_(first_id) {}

  SymbolId intern(SymbolId left, SymbolId right, bool intermediate);
  const std::vector<Rule>& rules() const { return rules_; }
  std::vector<Rule> take_rules() { return std::move(rules_); }

 private:
  SymbolId next_;
  std::unordered_map<std::uint64_t, SymbolId> ids_;
  std::vector<Rule> rules_;
};

struct RoundResult {
  std::vector<SymbolId> sequence;
  std::vector<Rule> rules;  // rules created by this round, creation order
};

RoundResult parse_round(std::span<const SymbolId> seq, std::size_t type2_min, RuleTable& table);

// Parses the text round by round until one symbol remains. After every
// round the new variables are renumbered by a stable sort on their left
// child, so the grammar comes out in the encoded (canonical) id order and
// later rounds already see final ids. Throws InputError when |text| < 2.
EspGrammar build_esp_tree(std::string_view text);

/*
 * ESP tree of a query parsed against an index's dictionary. Every block is
 * looked up with EspIndex::lookup_rule; hits keep the index id, misses (and
 * bytes absent from the indexed text) get temporary ids >= first_temp that
 * never collide with index ids.
 */
struct QueryParse {
  std::vector<SymbolId> terminals;
  std::vector<Rule> rules;        // every distinct rule used by T(Q)
  CharVec frequencies;            // F(Q): node counts of T(Q)
  SymbolId root = 0;
  SymbolId first_temp = 0;
  std::uint32_t rounds = 0;

  std::size_t length() const { return terminals.size(); }
  bool is_temporary(SymbolId x) const { return x >= first_temp; }
};

// Throws QueryError when |query| < 2.
QueryParse parse_query(std::string_view query, const EspIndex& index);

}  // namespace siedm
