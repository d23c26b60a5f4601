#include <doctest.h>

#include <algorithm>
#include <random>

#include "siedm/error.hpp"
#include "siedm/oracle.hpp"
#include "support/corpus.hpp"

using namespace siedm;
using namespace siedm::oracle;

namespace {

std::vector<std::string> all_strings(std::string_view alphabet, std::size_t len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<std::string> next;
    for (const auto& s : out) {
      for (char c : alphabet) next.push_back(s + c);
    }
    out = std::move(next);
  }
  return out;
}

// Plain Levenshtein; moves can only help.
std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

TEST_CASE("exact edit distance with moves") {
  CHECK(exact_edm("abab", "abab") == 0U);
  CHECK(exact_edm("ab", "ba") == 1U);
  CHECK(exact_edm("abab", "ab") == 2U);
  CHECK(exact_edm("aab", "baa") == 1U);
  CHECK(exact_edm("abc", "cab") == 1U);
  CHECK(exact_edm("", "ab") == 2U);
  CHECK(exact_edm("aaaaaa", "bbbbbb") == std::nullopt);
  EdmConfig deep;
  deep.max_depth = 6;
  CHECK(exact_edm("aaaaaa", "bbbbbb", deep) == 6U);
  CHECK_THROWS_AS(exact_edm("aaaaaaa", "a"), InputError);
}

TEST_CASE("edit distance with moves is a bounded metric") {
  const auto strings = all_strings("ab", 4);
  EdmConfig cfg;
  cfg.max_depth = 4;
  for (const auto& s : strings) {
    for (const auto& t : strings) {
      const auto d = exact_edm(s, t, cfg);
      REQUIRE(d.has_value());
      REQUIRE(d == exact_edm(t, s, cfg));
      REQUIRE(*d <= levenshtein(s, t));
      REQUIRE((*d == 0) == (s == t));
    }
  }
}

TEST_CASE("edm ball agrees with pairwise distances") {
  const auto ball = edm_ball("abba", "ab", 2);
  CHECK(ball.at("abba") == 0);
  CHECK(ball.at("baab") == 1);
  for (const auto& [t, d] : ball) {
    if (t.size() > 6) continue;
    REQUIRE(exact_edm("abba", t) == d);
  }
  for (const auto& t : all_strings("ab", 3)) {
    const auto d = exact_edm("abba", t);
    REQUIRE(d.has_value());
    if (*d <= 2) REQUIRE(ball.at(t) == *d);
  }
}

TEST_CASE("plain tree on abab") {
  const PlainTree t("abab");
  CHECK(t.root() == 3);
  CHECK(t.length(3) == 4);
  CHECK(t.left(3) == 2);
  CHECK(t.right(3) == 2);
  CHECK(t.lookup(0, 1) == SymbolId{2});
  CHECK(t.lookup(1, 0) == std::nullopt);
  CHECK(t.terminal_of('b') == SymbolId{1});
  CHECK(t.terminal_of('c') == std::nullopt);
  CHECK(t.left_parents(2) == std::vector<SymbolId>{3});
  CHECK(t.right_parents(2) == std::vector<SymbolId>{3});
  CHECK(t.positions()[2] == std::vector<std::uint64_t>{1, 3});
  CHECK(t.char_vec(3) == Counts{{0, 2}, {1, 2}, {2, 2}, {3, 1}});
  CHECK(t.decompose(2, 3) == std::vector<SymbolId>{1, 0});
  CHECK(t.decompose(1, 2) == std::vector<SymbolId>{2});
  CHECK(t.decompose(1, 4) == std::vector<SymbolId>{3});
  CHECK(t.decompose(2, 4) == std::vector<SymbolId>{1, 2});
}

TEST_CASE("query vectors and window baseline") {
  const PlainTree t("abab");
  CHECK(query_vector(t, "ab") == Counts{{0, 1}, {1, 1}, {2, 1}});
  // Unknown byte and unmatched pair get fresh ids.
  const Counts fc = query_vector(t, "ac");
  CHECK(fc.size() == 3);
  CHECK(fc.at(0) == 1);
  CHECK(fc.rbegin()->first >= t.grammar().symbol_end());

  CHECK(window_l1(t, "ab") == std::vector<std::uint64_t>{0, 1, 0});
  CHECK(window_l1("abab", "abab") == std::vector<std::uint64_t>{0});
  CHECK(window_l1_at(t, query_vector(t, "ba"), 2, 2) == 1);  // "ba" is no rule of S
  CHECK(l1(Counts{{1, 2}}, Counts{{1, 1}, {4, 3}}) == 4);
}

TEST_CASE("stabbed grams on abab") {
  const PlainTree t("abab");
  auto grams = enumerate_stabbed(t, 2);
  std::sort(grams.begin(), grams.end());
  const std::vector<StabbedGram> want{
      {2, 0, true, {2}},
      {2, 1, false, {0, 1}},
      {3, 0, false, {2}},
      {3, 1, false, {1, 0}},
      {3, 2, false, {2}},
  };
  CHECK(grams == want);
  CHECK(enumerate_stabbed(t, 5).empty());
  const std::vector<StabbedGram> at_root{{3, 0, true, {3}}, {3, 2, false, {2, 2}}};
  CHECK(enumerate_stabbed(t, 4) == at_root);

  const auto scored = score_stabbed(t, "ab");
  REQUIRE(scored.size() == 5);
  for (const auto& s : scored) {
    CHECK(s.mu_sum == 0);
    CHECK(s.distance == (s.gram.pieces.size() == 2 ? 1U : 0U));
  }
  const auto occ = search(t, "ab", 1);
  REQUIRE(occ.size() == 3);
  CHECK(occ[1].position == 2);
  CHECK(occ[1].distance == 1);
}

TEST_CASE("stabbed grams cover every window") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const std::string s = testing::random_text(rng, 30 + trial * 17, 2 + trial % 3);
    const PlainTree t(s);
    for (std::uint64_t q : {2U, 3U, 7U}) {
      const auto grams = enumerate_stabbed(t, q);
      std::vector<bool> hit(s.size() - q + 1, false);
      for (const auto& g : grams) {
        std::uint64_t total = 0;
        for (SymbolId p : g.pieces) total += t.length(p);
        REQUIRE(total == q);
        for (std::uint64_t p : t.positions()[g.stab]) {
          const std::uint64_t start = g.whole ? p : p + t.length(t.left(g.stab)) - (q - g.split);
          hit[start - 1] = true;
          // The pieces tile the window.
          std::uint64_t at = start;
          for (SymbolId piece : g.pieces) {
            REQUIRE(std::find(t.positions()[piece].begin(), t.positions()[piece].end(), at) !=
                    t.positions()[piece].end());
            at += t.length(piece);
          }
        }
      }
      REQUIRE(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
    }
  }
}

TEST_CASE("shared dictionary vectors") {
  const auto [fs, fq] = shared_char_vecs("abab", "abab");
  CHECK(fs == fq);
  CHECK(l1(fs, fq) == 0);
  const auto [ga, gb] = shared_char_vecs("ab", "ba");
  CHECK(ga.at('a') == 1);
  CHECK(gb.at('b') == 1);
  CHECK(l1(ga, gb) == 2);
}

TEST_CASE("edit distance is bounded by the vector distance on short binary strings") {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t m = 2; m <= 4; ++m) {
      for (const auto& s : all_strings("ab", n)) {
        for (const auto& q : all_strings("ab", m)) {
          const auto d = exact_edm(s, q);
          if (!d) continue;
          const auto [fs, fq] = shared_char_vecs(s, q);
          CAPTURE(s);
          CAPTURE(q);
          REQUIRE(*d <= 2 * l1(fs, fq));
        }
      }
    }
  }
}
