#include "siedm/oracle.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "esp_internal.hpp"
#include "siedm/error.hpp"

namespace siedm::oracle {

std::vector<std::string> edm_neighbours(std::string_view s, std::string_view alphabet) {
  std::vector<std::string> out;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i <= n; ++i) {
    for (char c : alphabet) {
      std::string t(s);
      t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), c);
      out.push_back(std::move(t));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::string t(s);
    t.erase(i, 1);
    out.push_back(std::move(t));
    for (char c : alphabet) {
      if (c == s[i]) continue;
      std::string r(s);
      r[i] = c;
      out.push_back(std::move(r));
    }
  }
  // Move S[i, j) to position k of what remains.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const std::string block(s.substr(i, j - i));
      std::string rest(s.substr(0, i));
      rest.append(s.substr(j));
      for (std::size_t k = 0; k <= rest.size(); ++k) {
        if (k == i) continue;
        std::string t = rest;
        t.insert(k, block);
        out.push_back(std::move(t));
      }
    }
  }
  return out;
}

std::unordered_map<std::string, std::uint32_t> edm_ball(std::string_view s, std::string_view alphabet,
                                                        std::uint32_t depth) {
  std::unordered_map<std::string, std::uint32_t> dist{{std::string(s), 0}};
  std::deque<std::string> frontier{std::string(s)};
  while (!frontier.empty()) {
    std::string cur = std::move(frontier.front());
    frontier.pop_front();
    const std::uint32_t d = dist[cur];
    if (d == depth) continue;
    for (std::string& next : edm_neighbours(cur, alphabet)) {
      if (dist.try_emplace(next, d + 1).second) frontier.push_back(std::move(next));
    }
  }
  return dist;
}

std::optional<std::uint32_t> exact_edm(std::string_view s, std::string_view q, const EdmConfig& cfg) {
  if (s.size() > cfg.max_len || q.size() > cfg.max_len) {
    throw InputError("exact_edm: strings longer than max_len");
  }
  if (s == q) return 0;
  std::string alphabet;
  for (char c : s) {
    if (alphabet.find(c) == std::string::npos) alphabet.push_back(c);
  }
  for (char c : q) {
    if (alphabet.find(c) == std::string::npos) alphabet.push_back(c);
  }
  std::unordered_map<std::string, std::uint32_t> dist{{std::string(s), 0}};
  std::deque<std::string> frontier{std::string(s)};
  while (!frontier.empty()) {
    std::string cur = std::move(frontier.front());
    frontier.pop_front();
    const std::uint32_t d = dist[cur];
    if (d == cfg.max_depth) continue;
    for (std::string& next : edm_neighbours(cur, alphabet)) {
      if (next == q) return d + 1;
      if (dist.try_emplace(next, d + 1).second) frontier.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

std::uint64_t l1(const Counts& a, const Counts& b) {
  std::uint64_t d = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      d += ia++->second;
    } else if (ia == a.end() || ib->first < ia->first) {
      d += ib++->second;
    } else {
      d += ia->second > ib->second ? ia->second - ib->second : ib->second - ia->second;
      ++ia;
      ++ib;
    }
  }
  return d;
}

PlainTree::PlainTree(std::string_view text) : PlainTree(build_esp_tree(text)) {}

PlainTree::PlainTree(EspGrammar grammar) : g_(std::move(grammar)) {
  left_parents_.resize(g_.symbol_end());
  right_parents_.resize(g_.symbol_end());
  for (const Rule& r : g_.rules) {
    by_pair_.emplace(detail::pair_key(r.left, r.right), r.lhs);
    left_parents_[r.left].push_back(r.lhs);
    right_parents_[r.right].push_back(r.lhs);
  }
}

std::optional<SymbolId> PlainTree::lookup(SymbolId left, SymbolId right) const {
  auto it = by_pair_.find(detail::pair_key(left, right));
  if (it == by_pair_.end()) return std::nullopt;
  return it->second;
}

std::optional<SymbolId> PlainTree::terminal_of(std::uint8_t byte) const {
  for (SymbolId t = 0; t < g_.sigma; ++t) {
    if (g_.terminal_bytes[t] == byte) return t;
  }
  return std::nullopt;
}

std::vector<SymbolId> PlainTree::left_parents(SymbolId x) const { return left_parents_.at(x); }
std::vector<SymbolId> PlainTree::right_parents(SymbolId x) const { return right_parents_.at(x); }

const std::vector<std::vector<std::uint64_t>>& PlainTree::positions() const {
  if (!positions_.empty()) return positions_;
  positions_.resize(g_.symbol_end());
  std::vector<std::pair<SymbolId, std::uint64_t>> stack{{g_.root, 1}};
  while (!stack.empty()) {
    const auto [x, p] = stack.back();
    stack.pop_back();
    positions_[x].push_back(p);
    if (is_terminal(x)) continue;
    stack.emplace_back(right(x), p + length(left(x)));
    stack.emplace_back(left(x), p);
  }
  for (auto& v : positions_) std::sort(v.begin(), v.end());
  return positions_;
}

void PlainTree::count_nodes(SymbolId x, Counts& into) const {
  std::vector<SymbolId> stack{x};
  while (!stack.empty()) {
    const SymbolId s = stack.back();
    stack.pop_back();
    ++into[s];
    if (!is_terminal(s)) {
      stack.push_back(left(s));
      stack.push_back(right(s));
    }
  }
}

Counts PlainTree::char_vec(SymbolId x) const {
  Counts c;
  count_nodes(x, c);
  return c;
}

std::vector<SymbolId> PlainTree::decompose(SymbolId x, std::uint64_t lo, std::uint64_t hi) const {
  std::vector<SymbolId> out;
  if (lo < 1 || hi < lo || hi > length(x)) return out;
  decompose_into(x, lo, hi, out);
  return out;
}

void PlainTree::decompose_into(SymbolId x, std::uint64_t lo, std::uint64_t hi,
                               std::vector<SymbolId>& out) const {
  if (lo == 1 && hi == length(x)) {
    out.push_back(x);
    return;
  }
  const std::uint64_t split = length(left(x));
  if (lo <= split) decompose_into(left(x), lo, std::min(hi, split), out);
  if (hi > split) decompose_into(right(x), std::max(lo, split + 1) - split, hi - split, out);
}

Counts query_vector(const PlainTree& tree, std::string_view q) {
  Counts f;
  SymbolId next = tree.grammar().symbol_end();
  std::array<SymbolId, 256> unknown{};
  std::vector<SymbolId> seq;
  for (unsigned char c : q) {
    SymbolId t;
    if (auto known = tree.terminal_of(c)) {
      t = *known;
    } else {
      if (unknown[c] == 0) unknown[c] = next++;
      t = unknown[c];
    }
    seq.push_back(t);
    ++f[t];
  }
  std::map<std::pair<SymbolId, SymbolId>, SymbolId> fresh;
  auto dict = [&](SymbolId l, SymbolId r, bool) {
    SymbolId id;
    if (auto hit = tree.lookup(l, r)) {
      id = *hit;
    } else {
      auto [it, inserted] = fresh.try_emplace({l, r}, next);
      if (inserted) ++next;
      id = it->second;
    }
    ++f[id];
    return id;
  };
  const std::size_t type2_min = type2_min_length(tree.text_length());
  while (seq.size() > 1) {
    const auto blocks = partition_blocks(seq, type2_min);
    seq = detail::apply_blocks(seq, blocks, dict);
  }
  return f;
}

Counts pieces_vector(const PlainTree& tree, std::span<const SymbolId> pieces) {
  Counts g;
  for (SymbolId p : pieces) tree.count_nodes(p, g);
  return g;
}

std::uint64_t window_l1_at(const PlainTree& tree, const Counts& fq, std::uint64_t position,
                           std::uint64_t query_length) {
  const auto pieces = tree.decompose(position, position + query_length - 1);
  if (pieces.empty()) throw RangeError("window outside the text");
  return l1(fq, pieces_vector(tree, pieces));
}

std::vector<std::uint64_t> window_l1(const PlainTree& tree, std::string_view q) {
  std::vector<std::uint64_t> out;
  if (q.size() > tree.text_length()) return out;
  const Counts fq = query_vector(tree, q);
  for (std::uint64_t i = 1; i + q.size() - 1 <= tree.text_length(); ++i) {
    out.push_back(window_l1_at(tree, fq, i, q.size()));
  }
  return out;
}

std::vector<std::uint64_t> window_l1(std::string_view s, std::string_view q) {
  return window_l1(PlainTree(s), q);
}

std::vector<StabbedGram> enumerate_stabbed(const PlainTree& tree, std::uint64_t query_length) {
  std::vector<StabbedGram> out;
  const EspGrammar& g = tree.grammar();
  for (SymbolId x = g.sigma; x < g.symbol_end(); ++x) {
    const std::uint64_t len = tree.length(x);
    if (len < query_length) continue;
    if (len == query_length) out.push_back({x, 0, true, {x}});
    const SymbolId l = tree.left(x);
    const SymbolId r = tree.right(x);
    const std::uint64_t len_l = tree.length(l);
    const std::uint64_t len_r = tree.length(r);
    for (std::uint64_t j = 0; j <= query_length; ++j) {
      const std::uint64_t from_left = query_length - j;
      if (from_left > len_l || j > len_r) continue;
      StabbedGram gram{x, static_cast<std::uint32_t>(j), false, {}};
      if (from_left > 0) gram.pieces = tree.decompose(l, len_l - from_left + 1, len_l);
      if (j > 0) {
        const auto right = tree.decompose(r, 1, j);
        gram.pieces.insert(gram.pieces.end(), right.begin(), right.end());
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

std::vector<ScoredGram> score_stabbed(const PlainTree& tree, std::string_view q) {
  const Counts fq = query_vector(tree, q);
  std::vector<ScoredGram> out;
  for (StabbedGram& gram : enumerate_stabbed(tree, q.size())) {
    const Counts g = pieces_vector(tree, gram.pieces);
    ScoredGram s;
    for (const auto& [sym, c] : g) {
      if (!fq.contains(sym)) s.mu_sum += c;
    }
    s.distance = l1(fq, g);
    s.gram = std::move(gram);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Occurrence> search(const PlainTree& tree, std::span<const ScoredGram> scored,
                               std::uint64_t query_length, std::uint64_t tau) {
  std::map<std::uint64_t, Occurrence> best;
  const auto& pos = tree.positions();
  for (const ScoredGram& s : scored) {
    if (s.distance > tau) continue;
    const StabbedGram& gram = s.gram;
    const auto pieces = static_cast<std::uint32_t>(gram.pieces.size());
    for (std::uint64_t p : pos[gram.stab]) {
      const std::uint64_t start =
          gram.whole ? p : p + tree.length(tree.left(gram.stab)) - (query_length - gram.split);
      auto [it, inserted] = best.try_emplace(start, Occurrence{start, s.distance, pieces});
      if (!inserted && std::tie(s.distance, pieces) < std::tie(it->second.distance, it->second.pieces)) {
        it->second = Occurrence{start, s.distance, pieces};
      }
    }
  }
  std::vector<Occurrence> out;
  for (auto& [p, occ] : best) out.push_back(occ);
  return out;
}

std::vector<Occurrence> search(const PlainTree& tree, std::string_view q, std::uint64_t tau) {
  const auto scored = score_stabbed(tree, q);
  return search(tree, scored, q.size(), tau);
}

std::pair<Counts, Counts> shared_char_vecs(std::string_view s, std::string_view q) {
  const std::size_t type2_min = type2_min_length(std::max(s.size(), q.size()));
  std::map<std::pair<SymbolId, SymbolId>, SymbolId> names;
  SymbolId next = 256;
  auto vector_of = [&](std::string_view text) {
    Counts f;
    auto dict = [&](SymbolId l, SymbolId r, bool) {
      auto [it, inserted] = names.try_emplace({l, r}, next);
      if (inserted) ++next;
      ++f[it->second];
      return it->second;
    };
    std::vector<SymbolId> seq;
    for (unsigned char c : text) {
      seq.push_back(c);
      ++f[c];
    }
    while (seq.size() > 1) {
      const auto blocks = partition_blocks(seq, type2_min);
      seq = detail::apply_blocks(seq, blocks, dict);
    }
    return f;
  };
  Counts fs = vector_of(s);
  Counts fq = vector_of(q);
  return {std::move(fs), std::move(fq)};
}

}  // namespace siedm::oracle
