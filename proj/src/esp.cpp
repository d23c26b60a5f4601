#include "siedm/esp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "esp_internal.hpp"
#include "siedm/error.hpp"

namespace siedm {

const Rule& EspGrammar::rule(SymbolId x) const {
  if (x < sigma || x >= symbol_end()) throw RangeError("grammar: not a variable");
  return rules[x - sigma];
}

std::uint32_t EspGrammar::round_of(SymbolId x) const {
  if (x < sigma) return 0;
  if (x >= symbol_end()) throw RangeError("grammar: symbol out of range");
  auto it = std::upper_bound(round_bounds.begin(), round_bounds.end(), x);
  return static_cast<std::uint32_t>(it - round_bounds.begin());
}

std::string EspGrammar::expand(SymbolId x) const {
  if (x >= symbol_end()) throw RangeError("grammar: symbol out of range");
  std::string out;
  out.reserve(lengths[x]);
  std::vector<SymbolId> stack{x};
  while (!stack.empty()) {
    const SymbolId s = stack.back();
    stack.pop_back();
    if (s < sigma) {
      out.push_back(static_cast<char>(terminal_bytes[s]));
    } else {
      const Rule& r = rules[s - sigma];
      stack.push_back(r.right);
      stack.push_back(r.left);
    }
  }
  return out;
}

void EspGrammar::validate() const {
  if (terminal_bytes.size() != sigma) throw InvariantError("grammar: terminal table size");
  if (lengths.size() != symbol_end()) throw InvariantError("grammar: length table size");
  if (round_bounds.empty() || round_bounds.front() != sigma ||
      round_bounds.back() != symbol_end() ||
      !std::is_sorted(round_bounds.begin(), round_bounds.end())) {
    throw InvariantError("grammar: round bounds do not partition the variables");
  }
  for (SymbolId t = 0; t < sigma; ++t) {
    if (lengths[t] != 1) throw InvariantError("grammar: terminal length must be 1");
  }
  for (std::size_t k = 0; k < rules.size(); ++k) {
    const Rule& r = rules[k];
    if (r.lhs != sigma + k) throw InvariantError("grammar: rules out of id order");
    if (r.left >= symbol_end() || r.right >= symbol_end()) {
      throw InvariantError("grammar: child id out of range");
    }
    if (lengths[r.lhs] != lengths[r.left] + lengths[r.right]) {
      throw InvariantError("grammar: length is not additive");
    }
  }
  if (root >= symbol_end()) throw InvariantError("grammar: root out of range");
}

std::uint32_t iterated_log(std::uint64_t u) {
  if (u == 0) throw InputError("iterated_log: argument must be >= 1");
  std::uint32_t i = 0;
  double x = static_cast<double>(u);
  while (x > 1.0) {
    x = std::log2(x);
    ++i;
  }
  return i;
}

std::size_t type2_min_length(std::uint64_t text_length) {
  return 2 * static_cast<std::size_t>(iterated_log(std::max<std::uint64_t>(text_length, 1)));
}

std::vector<Segment> classify_segments(std::span<const SymbolId> seq, std::size_t type2_min) {
  struct Piece {
    std::size_t begin;
    std::size_t length;
    bool repetition;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < seq.size();) {
    std::size_t j = i + 1;
    while (j < seq.size() && seq[j] == seq[i]) ++j;
    if (j - i >= 2) {
      pieces.push_back({i, j - i, true});
    } else if (!pieces.empty() && !pieces.back().repetition) {
      ++pieces.back().length;
    } else {
      pieces.push_back({i, 1, false});
    }
    i = j;
  }

  std::vector<Segment> out;
  bool carry = false;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const Piece& pc = pieces[p];
    if (!pc.repetition && pc.length == 1 && pieces.size() > 1) {
      if (!out.empty()) {
        ++out.back().length;
      } else {
        carry = true;
      }
      continue;
    }
    Segment s{pc.begin, pc.length, SegmentType::kRepetition};
    if (!pc.repetition) {
      s.type = pc.length >= type2_min ? SegmentType::kLongRepetitionFree
                                      : SegmentType::kShortRepetitionFree;
    }
    if (carry) {
      --s.begin;
      ++s.length;
      carry = false;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<std::uint32_t> reduce_alphabet_once(std::span<const std::uint32_t> seq) {
  std::vector<std::uint32_t> out;
  if (seq.size() < 2) return out;
  out.reserve(seq.size() - 1);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const std::uint32_t diff = seq[i] ^ seq[i - 1];
    if (diff == 0) throw InvariantError("alphabet reduction: adjacent equal symbols");
    const auto p = static_cast<std::uint32_t>(std::countr_zero(diff));
    out.push_back(2 * p + ((seq[i] >> p) & 1U));
  }
  return out;
}

LabelSequence alphabet_reduction(std::span<const SymbolId> segment) {
  LabelSequence res;
  // The pass count follows the id universe, not the labels present: a
  // content-dependent count would shift every label of a segment whenever a
  // far-away symbol changes, and queries would parse unlike the text.
  res.labels = reduce_alphabet_once(segment);
  res.offset = 1;
  std::uint64_t bound = 2 * 32;  // labels after one pass of 32-bit ids
  while (res.labels.size() >= 2 && bound > 6) {
    res.labels = reduce_alphabet_once(res.labels);
    ++res.offset;
    bound = 2 * static_cast<std::uint64_t>(std::bit_width(bound - 1));
  }

  // Values of one label never touch each other, so a single sweep per value
  // keeps the sequence repetition-free.
  std::vector<std::uint32_t> high;
  for (std::uint32_t v : res.labels) {
    if (v >= 3) high.push_back(v);
  }
  std::sort(high.begin(), high.end());
  high.erase(std::unique(high.begin(), high.end()), high.end());
  auto& l = res.labels;
  for (std::uint32_t v : high) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (l[i] != v) continue;
      std::uint32_t c = 0;
      while ((i > 0 && l[i - 1] == c) || (i + 1 < l.size() && l[i + 1] == c)) ++c;
      l[i] = c;
    }
  }
  return res;
}

std::vector<std::size_t> select_landmarks(std::span<const std::uint32_t> labels) {
  const std::size_t m = labels.size();
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < m; ++i) {
    const bool left = i == 0 || labels[i] > labels[i - 1];
    const bool right = i + 1 == m || labels[i] > labels[i + 1];
    if (left && right) maxima.push_back(i);
  }
  std::vector<std::size_t> out = maxima;
  for (std::size_t k = 1; k < maxima.size(); ++k) {
    const std::size_t a = maxima[k - 1];
    const std::size_t b = maxima[k];
    if (b - a - 1 <= 3) continue;
    std::size_t last = a;
    for (std::size_t c = a + 2; c + 2 <= b; ++c) {
      if (labels[c] < labels[c - 1] && labels[c] < labels[c + 1] && c > last + 1) {
        out.push_back(c);
        last = c;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void left_aligned(std::size_t len, std::vector<std::uint8_t>& out) {
  if (len % 2 == 0) {
    out.insert(out.end(), len / 2, 2);
  } else {
    out.insert(out.end(), (len - 3) / 2, 2);
    out.push_back(3);
  }
}

void landmark_blocks(std::span<const SymbolId> seg, std::vector<std::uint8_t>& out) {
  const std::size_t m = seg.size();
  const LabelSequence red = alphabet_reduction(seg);
  const std::vector<std::size_t> marks = select_landmarks(red.labels);

  // Landmark digrams first, the gaps between them left-aligned; a gap of a
  // single position is recorded as a 1-block and absorbed below.
  std::vector<std::uint8_t> raw;
  std::size_t pos = 0;
  auto gap = [&](std::size_t end) {
    const std::size_t len = end - pos;
    if (len == 1) {
      raw.push_back(1);
    } else if (len >= 2) {
      left_aligned(len, raw);
    }
    pos = end;
  };
  for (std::size_t mark : marks) {
    const std::size_t p = mark + red.offset;
    if (p + 1 >= m || p < pos) continue;
    gap(p);
    raw.push_back(2);
    pos = p + 2;
  }
  gap(m);

  std::vector<std::uint8_t> merged;
  bool carry = false;
  for (std::uint8_t len : raw) {
    if (len == 1) {
      if (!merged.empty()) {
        ++merged.back();
      } else {
        carry = true;
      }
      continue;
    }
    merged.push_back(static_cast<std::uint8_t>(len + (carry ? 1 : 0)));
    carry = false;
  }
  for (std::uint8_t len : merged) {
    if (len == 4) {
      out.push_back(2);
      out.push_back(2);
    } else {
      out.push_back(len);
    }
  }
}

}  // namespace

std::vector<std::uint8_t> partition_blocks(std::span<const SymbolId> seq, std::size_t type2_min) {
  if (seq.size() < 2) throw InvariantError("partition_blocks: sequence shorter than 2");
  std::vector<std::uint8_t> out;
  out.reserve(seq.size() / 2 + 1);
  for (const Segment& s : classify_segments(seq, type2_min)) {
    if (s.type == SegmentType::kLongRepetitionFree) {
      landmark_blocks(seq.subspan(s.begin, s.length), out);
    } else {
      left_aligned(s.length, out);
    }
  }
  return out;
}

SymbolId RuleTable::intern(SymbolId left, SymbolId right, bool intermediate) {
  auto [it, inserted] = ids_.try_emplace(detail::pair_key(left, right), next_);
  if (inserted) {
    rules_.push_back({next_, left, right, intermediate});
    ++next_;
  }
  return it->second;
}

RoundResult parse_round(std::span<const SymbolId> seq, std::size_t type2_min, RuleTable& table) {
  const std::size_t before = table.rules().size();
  const std::vector<std::uint8_t> blocks = partition_blocks(seq, type2_min);
  auto dict = [&](SymbolId l, SymbolId r, bool inter) { return table.intern(l, r, inter); };
  RoundResult res;
  res.sequence = detail::apply_blocks(seq, blocks, dict);
  res.rules.assign(table.rules().begin() + static_cast<std::ptrdiff_t>(before), table.rules().end());
  return res;
}

EspGrammar build_esp_tree(std::string_view text) {
  if (text.size() < 2) throw InputError("text must contain at least 2 bytes");
  if (text.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("text longer than 2^32 - 1 bytes");
  }

  std::array<bool, 256> present{};
  for (unsigned char c : text) present[c] = true;
  std::array<SymbolId, 256> terminal{};
  EspGrammar g;
  for (unsigned b = 0; b < 256; ++b) {
    if (!present[b]) continue;
    terminal[b] = g.sigma++;
    g.terminal_bytes.push_back(static_cast<std::uint8_t>(b));
  }
  g.lengths.assign(g.sigma, 1);
  g.round_bounds.push_back(g.sigma);
  g.sequence_lengths.push_back(text.size());

  std::vector<SymbolId> seq(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    seq[i] = terminal[static_cast<unsigned char>(text[i])];
  }

  const std::size_t type2_min = type2_min_length(text.size());
  while (seq.size() > 1) {
    const SymbolId base = g.symbol_end();
    RuleTable table(base);
    RoundResult round = parse_round(seq, type2_min, table);

    // Canonical numbering: stable sort on the left child.
    const std::size_t count = round.rules.size();
    const std::vector<std::uint32_t> order = detail::canonical_order(round.rules);
    std::vector<SymbolId> rename(count);
    for (std::size_t k = 0; k < count; ++k) {
      rename[order[k]] = base + static_cast<SymbolId>(k);
    }
    g.lengths.resize(base + count, 0);
    for (std::size_t k = 0; k < count; ++k) {
      Rule r = round.rules[order[k]];
      r.lhs = base + static_cast<SymbolId>(k);
      if (r.right >= base) r.right = rename[r.right - base];
      g.rules.push_back(r);
    }
    // Intermediate variables only have children from earlier rounds.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < count; ++k) {
        const Rule& r = g.rules[base - g.sigma + k];
        if ((r.right >= base) == (pass == 1)) {
          g.lengths[r.lhs] = g.lengths[r.left] + g.lengths[r.right];
        }
      }
    }
    for (SymbolId& x : round.sequence) x = rename[x - base];
    g.round_bounds.push_back(g.symbol_end());
    g.sequence_lengths.push_back(round.sequence.size());
    seq = std::move(round.sequence);
  }
  g.root = seq.front();
  return g;
}

}  // namespace siedm
