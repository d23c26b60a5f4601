#include "siedm/search.hpp"

#include <algorithm>
#include <thread>
#include <tuple>

namespace siedm {

QueryContext::QueryContext(const EspIndex& index, const QueryParse& query)
    : index_(&index), query_(&query) {
  std::size_t dense = index.symbol_end();
  for (const CharVecEntry& e : query.frequencies.entries()) {
    dense = std::max<std::size_t>(dense, std::size_t{e.symbol} + 1);
  }
  fq_.assign(dense, 0);
  for (const CharVecEntry& e : query.frequencies.entries()) {
    fq_[e.symbol] = e.count;
    fq_mass_ += e.count;
  }
  mu_memo_.assign(index.symbol_end(), kUnknown);
  g_.assign(dense, 0);
}

std::uint64_t QueryContext::mu(SymbolId x) {
  if (index_->is_terminal(x)) return in_query(x) ? 0 : 1;
  std::uint64_t& slot = mu_memo_[x];
  if (slot == kUnknown) {
    const std::uint64_t v = mu(index_->left_child(x)) + mu(index_->right_child(x)) + (in_query(x) ? 0 : 1);
    mu_memo_[x] = v;
    return v;
  }
  return slot;
}

std::uint64_t QueryContext::l1(std::span<const SymbolId> pieces) {
  for (SymbolId p : pieces) {
    index_->visit_char_vec(p, 1, [&](SymbolId s, std::uint32_t c) {
      if (g_[s] == 0) touched_.push_back(s);
      g_[s] += c;
    });
  }
  // Start from ||F(Q)||_1 and correct the coordinates G touches.
  std::int64_t dist = static_cast<std::int64_t>(fq_mass_);
  for (SymbolId s : touched_) {
    const auto fq = static_cast<std::int64_t>(fq_[s]);
    const auto g = static_cast<std::int64_t>(g_[s]);
    dist += (fq > g ? fq - g : g - fq) - fq;
    g_[s] = 0;
  }
  touched_.clear();
  return static_cast<std::uint64_t>(dist);
}

std::uint64_t mu(const EspIndex& index, SymbolId x, const CharVec& fq) {
  std::uint64_t sum = 0;
  const CharVec g = index.char_vec(x);
  for (const CharVecEntry& e : g.entries()) {
    if (!fq.contains(e.symbol)) sum += e.count;
  }
  return sum;
}

namespace {

constexpr std::uint64_t kAbort = std::numeric_limits<std::uint64_t>::max();

// Suffix and prefix walks of one split. d is shared by both sides.
struct Finder {
  QueryContext& ctx;
  const EspIndex& idx;
  std::uint64_t tau;
  bool prune;
  SearchStats& stats;
  std::vector<SymbolId> pieces;
  std::uint64_t d = 0;

  std::uint64_t take(SymbolId x, std::uint64_t q) {
    d += ctx.mu(x);
    pieces.push_back(x);
    return q - idx.length(x);
  }

  // Covers the last q symbols of val(x); pieces come out right to left.
  std::uint64_t left(SymbolId x, std::uint64_t q) {
    ++stats.traversed_nodes;
    if (prune && d > tau) return kAbort;
    if (q == 0) return 0;
    if (idx.length(x) <= q) return take(x, q);
    const std::uint64_t rest = left(idx.right_child(x), q);
    if (rest != 0) return left(idx.left_child(x), rest);
    return 0;
  }

  // Covers the first q symbols of val(x).
  std::uint64_t right(SymbolId x, std::uint64_t q) {
    ++stats.traversed_nodes;
    if (prune && d > tau) return kAbort;
    if (q == 0) return 0;
    if (idx.length(x) <= q) return take(x, q);
    const std::uint64_t rest = right(idx.left_child(x), q);
    if (rest != 0) return right(idx.right_child(x), rest);
    return 0;
  }
};

}  // namespace

std::vector<Candidate> find_candidates(QueryContext& ctx, SymbolId x, std::uint64_t tau, bool prune,
                                       SearchStats* stats) {
  SearchStats local;
  SearchStats& st = stats != nullptr ? *stats : local;
  const EspIndex& idx = ctx.index();
  const std::uint64_t q = ctx.query_length();
  std::vector<Candidate> out;
  if (!idx.is_variable(x) || idx.length(x) < q) return out;

  if (idx.length(x) == q) {
    ++st.traversed_nodes;
    const std::uint64_t m = ctx.mu(x);
    if (!prune || m <= tau) out.push_back({x, 0, true, {x}, m});
  }

  const SymbolId lc = idx.left_child(x);
  const SymbolId rc = idx.right_child(x);
  const std::uint64_t len_l = idx.length(lc);
  const std::uint64_t len_r = idx.length(rc);
  const std::uint64_t j_lo = q > len_l ? q - len_l : 0;
  const std::uint64_t j_hi = std::min(q, len_r);
  Finder f{ctx, idx, tau, prune, st, {}, 0};
  for (std::uint64_t j = j_lo; j <= j_hi; ++j) {
    f.pieces.clear();
    f.d = 0;
    if (f.left(lc, q - j) != 0) continue;
    std::reverse(f.pieces.begin(), f.pieces.end());
    if (f.right(rc, j) != 0) continue;
    if (prune && f.d > tau) continue;
    out.push_back({x, static_cast<std::uint32_t>(j), false, f.pieces, f.d});
  }
  return out;
}

std::optional<std::uint64_t> l1_post_filter(QueryContext& ctx, const Candidate& cand, std::uint64_t tau) {
  const std::uint64_t d = ctx.l1(cand.pieces);
  if (d > tau) return std::nullopt;
  return d;
}

std::vector<std::uint64_t> compute_position(const EspIndex& index, SymbolId x) {
  std::vector<std::uint64_t> out;
  std::vector<std::pair<SymbolId, std::uint64_t>> stack{{x, 1}};
  while (!stack.empty()) {
    const auto [s, p] = stack.back();
    stack.pop_back();
    if (s == index.root()) {
      out.push_back(p);
      continue;
    }
    const std::uint64_t len = index.length(s);
    index.for_each_right_parent(s, [&](SymbolId parent) {
      stack.emplace_back(parent, p + index.length(parent) - len);
    });
    index.for_each_left_parent(s, [&](SymbolId parent) { stack.emplace_back(parent, p); });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t window_start(const EspIndex& index, const Candidate& cand, std::uint64_t p,
                           std::uint64_t query_length) {
  if (cand.whole) return p;
  return p + index.length(index.left_child(cand.stab)) - (query_length - cand.split);
}

namespace {

struct Hit {
  std::uint64_t position;
  std::uint64_t distance;
  std::uint32_t pieces;
};

void search_worker(const EspIndex& index, const QueryParse& qp, std::uint64_t tau, bool prune,
                   unsigned worker, unsigned workers, std::vector<Hit>& hits, SearchStats& stats) {
  QueryContext ctx(index, qp);
  const std::uint64_t q = qp.length();
  std::vector<std::uint64_t> positions;
  for (SymbolId x = index.sigma() + worker; x < index.symbol_end(); x += workers) {
    if (index.length(x) < q) continue;
    const std::vector<Candidate> cands = find_candidates(ctx, x, tau, prune, &stats);
    bool have_positions = false;
    for (const Candidate& c : cands) {
      ++stats.candidates;
      const auto dist = l1_post_filter(ctx, c, tau);
      if (!dist) continue;
      ++stats.accepted;
      if (!have_positions) {
        positions = compute_position(index, x);
        have_positions = true;
      }
      for (std::uint64_t p : positions) {
        hits.push_back({window_start(index, c, p, q), *dist, static_cast<std::uint32_t>(c.pieces.size())});
      }
    }
  }
}

}  // namespace

std::vector<Occurrence> search(const EspIndex& index, std::string_view query, std::uint64_t tau,
                               const SearchOptions& options, SearchStats* stats) {
  if (query.size() < 2) throw QueryError("query must contain at least 2 bytes");
  if (query.size() > index.text_length()) throw QueryError("query longer than the indexed text");
  const QueryParse qp = parse_query(query, index);

  const unsigned workers = std::max(1U, options.threads);
  std::vector<std::vector<Hit>> hits(workers);
  std::vector<SearchStats> per_worker(workers);
  if (workers == 1) {
    search_worker(index, qp, tau, options.prune, 0, 1, hits[0], per_worker[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          search_worker(index, qp, tau, options.prune, w, workers, hits[w], per_worker[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<Hit> all;
  for (auto& h : hits) all.insert(all.end(), h.begin(), h.end());
  std::sort(all.begin(), all.end(), [](const Hit& a, const Hit& b) {
    return std::tie(a.position, a.distance, a.pieces) < std::tie(b.position, b.distance, b.pieces);
  });
  std::vector<Occurrence> out;
  for (const Hit& h : all) {
    if (!out.empty() && out.back().position == h.position) continue;
    out.push_back({h.position, h.distance, h.pieces});
  }

  if (stats != nullptr) {
    SearchStats total;
    for (const auto& s : per_worker) total += s;
    total.occurrences = out.size();
    *stats = total;
  }
  return out;
}

}  // namespace siedm
