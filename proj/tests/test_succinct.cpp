#include <doctest.h>

#include <algorithm>
#include <random>

#include "siedm/bit_vector.hpp"
#include "siedm/char_vec.hpp"
#include "siedm/error.hpp"
#include "siedm/int_sequence.hpp"

using namespace siedm;

namespace {

std::size_t scan_rank(const std::string& bits, char c, std::size_t i) {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(i) + 1, c));
}

std::string random_bits(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution one(density);
  std::string s(n, '0');
  for (char& c : s) c = one(rng) ? '1' : '0';
  return s;
}

}  // namespace

TEST_CASE("rank and select on the monotone-code example") {
  const auto b = BitVector::from_string("0110010010001");
  CHECK(b.size() == 13);
  CHECK(b.rank(false, 2) == 1);
  CHECK(b.select(true, 2) == 2);  // 1-based position 3
  CHECK(b.count(true) == 5);
  CHECK(b.to_string() == "0110010010001");
}

TEST_CASE("rank on all zeros, select of a single one") {
  const auto zeros = BitVector::from_string("00000");
  CHECK(zeros.rank(true, 4) == 0);
  CHECK(zeros.rank(false, 4) == 5);
  CHECK_THROWS_AS(zeros.select(true, 1), NotFoundError);

  const auto one = BitVector::from_string("1");
  CHECK(one.select(true, 1) == 0);
}

TEST_CASE("bit vector errors") {
  const auto b = BitVector::from_string("0101");
  CHECK_THROWS_AS(b.rank(true, 4), RangeError);
  CHECK_THROWS_AS(b.select(true, 3), NotFoundError);
  CHECK_THROWS_AS(b.select(false, 0), NotFoundError);
  CHECK_THROWS_AS(b.access(4), RangeError);
  CHECK_THROWS(BitVector::from_string("01x"));
}

TEST_CASE("rank/select agree with a linear scan") {
  std::mt19937_64 rng(7);
  for (double density : {0.01, 0.3, 0.5, 0.97}) {
    for (std::size_t n : {1U, 63U, 64U, 65U, 511U, 512U, 513U, 1000U, 5000U}) {
      const std::string bits = random_bits(rng, n, density);
      const auto b = BitVector::from_string(bits);
      std::size_t ones = 0;
      std::size_t zeros = 0;
      for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(b[i] == (bits[i] == '1'));
        REQUIRE(b.rank(true, i) == scan_rank(bits, '1', i));
        REQUIRE(b.rank(true, i) + b.rank(false, i) == i + 1);
        if (bits[i] == '1') {
          REQUIRE(b.select(true, ++ones) == i);
        } else {
          REQUIRE(b.select(false, ++zeros) == i);
        }
      }
      CHECK(b.count(true) == ones);
      CHECK(b.count(false) == zeros);
      for (std::size_t k = 1; k <= ones; ++k) {
        const std::size_t p = b.select(true, k);
        CHECK(b.select(true, b.rank(true, p)) == p);
      }
    }
  }
}

TEST_CASE("byte layout is LSB first and round-trips") {
  const auto b = BitVector::from_string("1000000011");
  const auto bytes = b.to_bytes();
  REQUIRE(bytes.size() == 2);
  CHECK(bytes[0] == 0x01);
  CHECK(bytes[1] == 0x03);
  CHECK(BitVector::from_bytes(bytes, 10) == b);

  std::mt19937_64 rng(3);
  const auto r = BitVector::from_string(random_bits(rng, 777, 0.4));
  CHECK(BitVector::from_bytes(r.to_bytes(), r.size()) == r);
}

TEST_CASE("builder matches from_string") {
  BitVectorBuilder bb;
  bb.push_back(false);
  bb.append(true, 70);
  bb.append(false, 3);
  bb.push_back(true);
  const auto b = std::move(bb).build();
  CHECK(b.to_string() == "0" + std::string(70, '1') + "0001");
  CHECK(b.select(false, 2) == 71);
}

TEST_CASE("monotone encoding") {
  const std::vector<std::uint64_t> xs{1, 1, 3, 5, 8};
  const auto code = encode_monotone(xs);
  CHECK(code.to_string() == "0110010010001");
  for (std::size_t k = 1; k <= xs.size(); ++k) CHECK(decode_monotone(code, k) == xs[k - 1]);

  CHECK(encode_monotone(std::vector<std::uint64_t>{1}).to_string() == "01");
  CHECK_THROWS_AS(encode_monotone(std::vector<std::uint64_t>{2, 1}), InvariantError);
  CHECK_THROWS_AS(encode_monotone(std::vector<std::uint64_t>{0, 1}), InvariantError);
}

TEST_CASE("monotone encoding round-trips and has n + last bits") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> len(1, 300);
    std::uniform_int_distribution<std::uint64_t> step(0, trial % 2 == 0 ? 3 : 40);
    std::vector<std::uint64_t> xs(len(rng));
    std::uint64_t v = 1 + step(rng);
    for (auto& x : xs) {
      x = v;
      v += step(rng);
    }
    const auto code = encode_monotone(xs);
    REQUIRE(code.count(true) == xs.size());
    REQUIRE(code.size() == xs.size() + xs.back());
    for (std::size_t k = 1; k <= xs.size(); ++k) REQUIRE(decode_monotone(code, k) == xs[k - 1]);
  }
}

TEST_CASE("int sequence small example") {
  const IntSequence s({2, 0, 2, 1}, 3);
  CHECK(s.access(2) == 2);
  CHECK(s.rank(2, 3) == 2);
  CHECK(s.select(2, 2) == 2);
  CHECK(s.select(2, 1) == 0);
  CHECK(s.count(1) == 1);
  CHECK(s.count(0) == 1);
  CHECK_THROWS_AS(s.select(2, 3), NotFoundError);
  CHECK_THROWS_AS(s.rank(0, 4), RangeError);
  CHECK_THROWS_AS(s.access(4), RangeError);
  CHECK_THROWS(IntSequence({3}, 3));
}

TEST_CASE("int sequence agrees with a linear scan") {
  std::mt19937_64 rng(5);
  const std::uint32_t sigma = 10000;
  std::uniform_int_distribution<std::uint32_t> dist(0, sigma - 1);
  std::uniform_int_distribution<std::uint32_t> hot(0, 20);
  std::vector<std::uint32_t> values(20000);
  for (auto& v : values) v = (rng() % 3 == 0) ? hot(rng) : dist(rng);
  const IntSequence s(values, sigma);

  std::vector<std::size_t> seen(sigma, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t v = values[i];
    ++seen[v];
    REQUIRE(s.access(i) == v);
    REQUIRE(s.rank(v, i) == seen[v]);
    REQUIRE(s.select(v, seen[v]) == i);
  }
  for (std::uint32_t v = 0; v < sigma; v += 97) {
    CHECK(s.count(v) == seen[v]);
    if (seen[v] > 0) CHECK(s.rank(v, values.size() - 1) == seen[v]);
  }
}

TEST_CASE("char vectors") {
  const CharVec a{{1, 2}, {4, 1}};
  const CharVec b{{1, 1}, {7, 3}};
  CHECK(a[1] == 2);
  CHECK(a[2] == 0);
  CHECK(a.mass() == 3);
  CHECK(l1_distance(a, b) == 1 + 1 + 3);
  CHECK(l1_distance(a, a) == 0);
  const CharVec sum = a + b;
  CHECK(sum == CharVec{{1, 3}, {4, 1}, {7, 3}});
  CHECK(CharVec::from_entries({{5, 1}, {2, 0}, {5, 2}, {1, 1}}) == CharVec{{1, 1}, {5, 3}});
  CharVec c;
  c.add(9);
  c.add(3, 2);
  CHECK(c == CharVec{{3, 2}, {9, 1}});
  CHECK(CharVec::unit(4).support_size() == 1);
}
