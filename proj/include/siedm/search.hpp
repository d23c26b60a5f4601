#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "siedm/esp.hpp"
#include "siedm/index.hpp"

namespace siedm {

// One way of covering a |Q|-gram stabbed by `stab`: the window takes the
// last |Q| - split symbols of the left child and the first `split` symbols of
// the right child. `whole` marks the window equal to val(stab) itself, with
// pieces == {stab}. Pieces are in left-to-right order and may repeat.
struct Candidate {
  SymbolId stab = 0;
  std::uint32_t split = 0;
  bool whole = false;
  std::vector<SymbolId> pieces;
  std::uint64_t mu_sum = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Occurrence {
  std::uint64_t position = 0;  // 1-based
  std::uint64_t distance = 0;
  std::uint32_t pieces = 0;    // decomposition size of the best candidate

  friend bool operator==(const Occurrence& a, const Occurrence& b) {
    return a.position == b.position && a.distance == b.distance;
  }
};

struct SearchOptions {
  bool prune = true;      // abort a descent as soon as the mu sum exceeds tau
  unsigned threads = 1;
};

struct SearchStats {
  std::uint64_t traversed_nodes = 0;  // #TN
  std::uint64_t candidates = 0;       // #CAND
  std::uint64_t accepted = 0;         // #TP
  std::uint64_t occurrences = 0;      // #OCC

  SearchStats& operator+=(const SearchStats& o) {
    traversed_nodes += o.traversed_nodes;
    candidates += o.candidates;
    accepted += o.accepted;
    occurrences += o.occurrences;
    return *this;
  }
};

// Per-query state: dense F(Q), memoized mu and the scratch vector used by the
// post-filter. Not thread-safe; use one per worker.
class QueryContext {
 public:
  QueryContext(const EspIndex& index, const QueryParse& query);

  const EspIndex& index() const { return *index_; }
  const QueryParse& query() const { return *query_; }
  std::uint64_t query_length() const { return query_->length(); }

  bool in_query(SymbolId x) const { return x < fq_.size() && fq_[x] != 0; }
  // mu(x) = mu(left) + mu(right) + [x not in V(Q)]
  std::uint64_t mu(SymbolId x);
  // ||F(Q) - sum of F(p) over pieces||_1
  std::uint64_t l1(std::span<const SymbolId> pieces);

 private:
  static constexpr std::uint64_t kUnknown = std::numeric_limits<std::uint64_t>::max();

  const EspIndex* index_;
  const QueryParse* query_;
  std::vector<std::uint32_t> fq_;
  std::uint64_t fq_mass_ = 0;
  std::vector<std::uint64_t> mu_memo_;
  std::vector<std::uint64_t> g_;
  std::vector<SymbolId> touched_;
};

// Sum of F(x)(e) over e outside V(Q), straight from the characteristic vector.
std::uint64_t mu(const EspIndex& index, SymbolId x, const CharVec& fq);

// Candidates stabbed by variable x whose mu sum is at most tau. With
// prune == false every split is emitted regardless of tau.
std::vector<Candidate> find_candidates(QueryContext& ctx, SymbolId x, std::uint64_t tau,
                                       bool prune = true, SearchStats* stats = nullptr);

// L1 distance of the candidate when it is <= tau.
std::optional<std::uint64_t> l1_post_filter(QueryContext& ctx, const Candidate& cand,
                                            std::uint64_t tau);

// Sorted 1-based start positions of every node labeled x in T(S).
std::vector<std::uint64_t> compute_position(const EspIndex& index, SymbolId x);

// Start position of the candidate's window inside one occurrence of its stab
// variable starting at p.
std::uint64_t window_start(const EspIndex& index, const Candidate& cand, std::uint64_t p,
                           std::uint64_t query_length);

// Approximate EDM search. Throws QueryError unless 2 <= |Q| <= |S|.
std::vector<Occurrence> search(const EspIndex& index, std::string_view query, std::uint64_t tau,
                               const SearchOptions& options = {}, SearchStats* stats = nullptr);

}  // namespace siedm
