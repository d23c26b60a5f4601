#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "siedm/error.hpp"
#include "siedm/esp.hpp"
#include "support/corpus.hpp"

using namespace siedm;

namespace {

std::vector<SymbolId> symbols(std::string_view s) {
  std::vector<SymbolId> out;
  for (char c : s) out.push_back(static_cast<SymbolId>(c - 'a'));
  return out;
}

std::vector<SymbolId> repetition_free(std::mt19937_64& rng, std::size_t n, SymbolId alphabet) {
  std::uniform_int_distribution<SymbolId> d(0, alphabet - 1);
  std::vector<SymbolId> s;
  while (s.size() < n) {
    const SymbolId v = d(rng);
    if (s.empty() || s.back() != v) s.push_back(v);
  }
  return s;
}

bool no_equal_neighbours(std::span<const std::uint32_t> s) {
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

}  // namespace

TEST_CASE("iterated logarithm") {
  CHECK(iterated_log(1) == 0);
  CHECK(iterated_log(2) == 1);
  CHECK(iterated_log(16) == 3);
  CHECK(iterated_log(65536) == 4);
  CHECK(iterated_log(65537) == 5);
  CHECK(type2_min_length(16) == 6);
}

TEST_CASE("segments: repetitions and singleton attachment") {
  const auto aaaa = classify_segments(symbols("aaaa"), 8);
  REQUIRE(aaaa.size() == 1);
  CHECK(aaaa[0] == Segment{0, 4, SegmentType::kRepetition});

  const auto aaab = classify_segments(symbols("aaab"), 8);
  REQUIRE(aaab.size() == 1);
  CHECK(aaab[0] == Segment{0, 4, SegmentType::kRepetition});

  // A leading singleton goes to the following repetition.
  const auto baaa = classify_segments(symbols("baaacd"), 8);
  REQUIRE(baaa.size() == 2);
  CHECK(baaa[0] == Segment{0, 4, SegmentType::kRepetition});
  CHECK(baaa[1] == Segment{4, 2, SegmentType::kShortRepetitionFree});

  const auto long_free = classify_segments(symbols("abcdabcd"), 8);
  REQUIRE(long_free.size() == 1);
  CHECK(long_free[0].type == SegmentType::kLongRepetitionFree);
  CHECK(classify_segments(symbols("abcdabcd"), 9)[0].type == SegmentType::kShortRepetitionFree);
}

TEST_CASE("segments partition the sequence and never split a run") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<std::size_t> len(2, 200);
    const std::string text = testing::random_text(rng, len(rng), 1 + trial % 4);
    const auto seq = symbols(text);
    const std::size_t type2_min = 2 + trial % 7;
    const auto segs = classify_segments(seq, type2_min);
    std::size_t pos = 0;
    for (const Segment& s : segs) {
      REQUIRE(s.begin == pos);
      REQUIRE(s.length >= 2);
      if (pos > 0) REQUIRE(seq[pos - 1] != seq[pos]);
      const std::span<const SymbolId> body(seq.data() + s.begin, s.length);
      if (s.type == SegmentType::kRepetition) {
        // One run of length >= 2 plus attached singletons: a trailing one, and a
        // leading one only at the start of the sequence.
        std::size_t runs = 1;
        for (std::size_t i = 1; i < body.size(); ++i) runs += body[i] != body[i - 1];
        REQUIRE(runs <= (s.begin == 0 ? 3U : 2U));
        if (runs == 3) REQUIRE(body[0] != body[1]);
        const bool has_pair = std::adjacent_find(body.begin(), body.end()) != body.end();
        REQUIRE(has_pair);
      } else {
        REQUIRE(no_equal_neighbours(body));
        REQUIRE((s.type == SegmentType::kLongRepetitionFree) == (s.length >= type2_min));
      }
      pos += s.length;
    }
    REQUIRE(pos == seq.size());
  }
}

TEST_CASE("alphabet reduction step") {
  CHECK(reduce_alphabet_once(std::vector<std::uint32_t>{0, 1}) == std::vector<std::uint32_t>{1});
  CHECK(reduce_alphabet_once(std::vector<std::uint32_t>{5, 4}) == std::vector<std::uint32_t>{0});
  CHECK(reduce_alphabet_once(std::vector<std::uint32_t>{4, 6}) == std::vector<std::uint32_t>{3});
  CHECK_THROWS_AS(reduce_alphabet_once(std::vector<std::uint32_t>{3, 3}), InvariantError);
}

TEST_CASE("alphabet reduction stays repetition-free and shrinks the alphabet") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const SymbolId alphabet = trial % 2 == 0 ? 5 : 100000;
    const auto seq = repetition_free(rng, 2 + trial, alphabet);
    const auto once = reduce_alphabet_once(seq);
    REQUIRE(once.size() == seq.size() - 1);
    REQUIRE(no_equal_neighbours(once));
    // Direct recomputation of L[i] = 2p + bit(p, S[i]).
    for (std::size_t i = 1; i < seq.size(); ++i) {
      std::uint32_t p = 0;
      while (((seq[i] >> p) & 1U) == ((seq[i - 1] >> p) & 1U)) ++p;
      REQUIRE(once[i - 1] == 2 * p + ((seq[i] >> p) & 1U));
    }
    const auto max_in = *std::max_element(seq.begin(), seq.end());
    REQUIRE(*std::max_element(once.begin(), once.end()) < 2 * std::max(1U, static_cast<unsigned>(std::bit_width(max_in))));

    const auto red = alphabet_reduction(seq);
    REQUIRE(red.labels.size() + red.offset == seq.size());
    REQUIRE(no_equal_neighbours(red.labels));
    if (red.labels.size() >= 2) {
      REQUIRE(*std::max_element(red.labels.begin(), red.labels.end()) <= 2);
    }
  }
}

TEST_CASE("landmarks") {
  CHECK(select_landmarks(std::vector<std::uint32_t>{1, 3, 2}) == std::vector<std::size_t>{1});
  CHECK(select_landmarks(std::vector<std::uint32_t>{1, 2}) == std::vector<std::size_t>{1});
  CHECK(select_landmarks(std::vector<std::uint32_t>{2, 1}) == std::vector<std::size_t>{0});
  // Long gap between maxima gets a local minimum.
  CHECK(select_landmarks(std::vector<std::uint32_t>{9, 8, 7, 6, 5, 6, 7, 8, 9}) ==
        std::vector<std::size_t>{0, 4, 8});
}

TEST_CASE("landmarks are never adjacent and cover every window") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint32_t> labels;
    if (trial % 2 == 0) {
      labels = alphabet_reduction(repetition_free(rng, 4 + trial, 256)).labels;
    } else {
      labels = repetition_free(rng, 2 + trial, 20);
    }
    const auto marks = select_landmarks(labels);
    for (std::size_t k = 1; k < marks.size(); ++k) REQUIRE(marks[k] > marks[k - 1] + 1);
    for (std::size_t m : marks) {
      const bool left = m == 0 || labels[m] > labels[m - 1];
      const bool right = m + 1 == labels.size() || labels[m] > labels[m + 1];
      const bool lmin = m > 0 && m + 1 < labels.size() && labels[m] < labels[m - 1] && labels[m] < labels[m + 1];
      REQUIRE(((left && right) || lmin));
    }
    if (trial % 2 == 0) {
      // Final labels live in {0,1,2}: a landmark in every 4 consecutive positions.
      const std::size_t w = 4;
      for (std::size_t s = 0; s + w <= labels.size(); ++s) {
        const bool hit = std::any_of(marks.begin(), marks.end(), [&](std::size_t m) { return m >= s && m < s + w; });
        REQUIRE(hit);
      }
    }
  }
}

TEST_CASE("blocks are 2 or 3 long and contract each round") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 400; ++trial) {
    std::uniform_int_distribution<std::size_t> len(2, 400);
    const std::string text = testing::random_text(rng, len(rng), 1 + trial % 26);
    const auto seq = symbols(text);
    const auto blocks = partition_blocks(seq, type2_min_length(seq.size()));
    std::size_t total = 0;
    for (auto b : blocks) {
      REQUIRE((b == 2 || b == 3));
      total += b;
    }
    REQUIRE(total == seq.size());
    REQUIRE(blocks.size() >= (seq.size() + 2) / 3);
    REQUIRE(blocks.size() <= seq.size() / 2);
  }
  CHECK_THROWS_AS(partition_blocks(std::vector<SymbolId>{1}, 2), InvariantError);
}

TEST_CASE("parse round examples") {
  {
    RuleTable t(1);
    const auto r = parse_round(symbols("aaaa"), 8, t);
    CHECK(r.sequence == std::vector<SymbolId>{1, 1});
    REQUIRE(r.rules.size() == 1);
    CHECK(r.rules[0] == Rule{1, 0, 0, false});
  }
  {
    // 2 + 3: X -> aa, then Y -> a X with the trigram's inner pair reusing X.
    RuleTable t(1);
    const auto r = parse_round(symbols("aaaaa"), 8, t);
    CHECK(r.sequence == std::vector<SymbolId>{1, 2});
    REQUIRE(r.rules.size() == 2);
    CHECK(r.rules[0] == Rule{1, 0, 0, false});
    CHECK(r.rules[1] == Rule{2, 0, 1, false});
  }
  {
    RuleTable t(2);
    const auto r = parse_round(symbols("abab"), 8, t);
    CHECK(r.sequence == std::vector<SymbolId>{2, 2});
    REQUIRE(r.rules.size() == 1);
    CHECK(r.rules[0] == Rule{2, 0, 1, false});
  }
  {
    RuleTable t(3);
    const auto r = parse_round(symbols("abc"), 8, t);
    CHECK(r.sequence == std::vector<SymbolId>{4});
    REQUIRE(r.rules.size() == 2);
    CHECK(r.rules[0] == Rule{3, 1, 2, true});
    CHECK(r.rules[1] == Rule{4, 0, 3, false});
  }
}

TEST_CASE("abab grammar") {
  const EspGrammar g = build_esp_tree("abab");
  CHECK(g.sigma == 2);
  CHECK(g.variable_count() == 2);
  CHECK(g.round_count() == 2);
  CHECK(g.rules[0] == Rule{2, 0, 1, false});
  CHECK(g.rules[1] == Rule{3, 2, 2, false});
  CHECK(g.root == 3);
  CHECK(g.expand(g.root) == "abab");
  CHECK(g.sequence_lengths == std::vector<std::uint64_t>{4, 2, 1});
}

TEST_CASE("aaaaa grammar shares the inner pair") {
  const EspGrammar g = build_esp_tree("aaaaa");
  CHECK(g.sigma == 1);
  REQUIRE(g.variable_count() == 3);
  CHECK(g.rules[0] == Rule{1, 0, 0, false});
  CHECK(g.rules[1] == Rule{2, 0, 1, false});
  CHECK(g.rules[2] == Rule{3, 1, 2, false});
  CHECK(g.expand(3) == "aaaaa");
}

TEST_CASE("degenerate texts are rejected") {
  CHECK_THROWS_AS(build_esp_tree(""), InputError);
  CHECK_THROWS_AS(build_esp_tree("a"), InputError);
}

TEST_CASE("grammar derives the text, deterministically, in few rounds") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    std::uniform_int_distribution<std::size_t> len(2, trial < 140 ? 2000 : 10000);
    const std::size_t n = len(rng);
    const std::string text = trial % 3 == 0 ? testing::repetitive_text(rng, n, 1 + n / 10, 4, 0.05)
                                            : testing::random_text(rng, n, 1 + trial % 26);
    const EspGrammar g = build_esp_tree(text);
    g.validate();
    REQUIRE(g.expand(g.root) == text);
    REQUIRE(g.round_count() <= static_cast<std::uint32_t>(std::ceil(std::log2(static_cast<double>(n)))));
    for (std::size_t r = 1; r < g.sequence_lengths.size(); ++r) {
      const auto m = g.sequence_lengths[r - 1];
      const auto m2 = g.sequence_lengths[r];
      REQUIRE(m2 >= (m + 2) / 3);
      REQUIRE(m2 <= m / 2);
    }
    // Canonical order: left children non-decreasing; children from the previous round.
    for (std::uint32_t r = 1; r <= g.round_count(); ++r) {
      for (SymbolId x = g.round_bounds[r - 1]; x < g.round_bounds[r]; ++x) {
        const Rule& rule = g.rule(x);
        if (x > g.round_bounds[r - 1]) REQUIRE(g.rule(x - 1).left <= rule.left);
        REQUIRE(g.round_of(rule.left) == r - 1);
        const auto rr = g.round_of(rule.right);
        REQUIRE((rr == r - 1 || rr == r));
        if (rr == r) {
          // Inner node of a trigram: its own children are one round down.
          REQUIRE(g.round_of(g.rule(rule.right).left) == r - 1);
          REQUIRE(g.round_of(g.rule(rule.right).right) == r - 1);
        }
      }
    }
    if (trial % 10 == 0) REQUIRE(build_esp_tree(text) == g);
  }
}
