#include <array>
#include <unordered_map>
#include <unordered_set>

#include "esp_internal.hpp"
#include "siedm/esp.hpp"
#include "siedm/index.hpp"

namespace siedm {

QueryParse parse_query(std::string_view query, const EspIndex& index) {
  if (query.size() < 2) throw QueryError("query must contain at least 2 bytes");

  QueryParse qp;
  qp.first_temp = index.symbol_end();
  SymbolId next_temp = qp.first_temp;
  std::vector<CharVecEntry> counts;

  std::array<SymbolId, 256> unknown_byte{};
  unknown_byte.fill(0);
  qp.terminals.reserve(query.size());
  for (unsigned char c : query) {
    SymbolId t;
    if (auto known = index.terminal_of(c)) {
      t = *known;
    } else {
      if (unknown_byte[c] == 0) unknown_byte[c] = next_temp++;
      t = unknown_byte[c];
    }
    qp.terminals.push_back(t);
    counts.push_back({t, 1});
  }

  std::unordered_map<std::uint64_t, SymbolId> temps;
  std::unordered_set<SymbolId> seen;
  auto dict = [&](SymbolId left, SymbolId right, bool intermediate) {
    SymbolId id;
    if (auto hit = index.lookup_rule(left, right)) {
      id = *hit;
    } else {
      auto [it, inserted] = temps.try_emplace(detail::pair_key(left, right), next_temp);
      if (inserted) ++next_temp;
      id = it->second;
    }
    if (seen.insert(id).second) qp.rules.push_back({id, left, right, intermediate});
    counts.push_back({id, 1});
    return id;
  };

  // Same block decisions as the build, with the text's lg* threshold.
  const std::size_t type2_min = type2_min_length(index.text_length());
  std::vector<SymbolId> seq = qp.terminals;
  while (seq.size() > 1) {
    const std::vector<std::uint8_t> blocks = partition_blocks(seq, type2_min);
    seq = detail::apply_blocks(seq, blocks, dict);
    ++qp.rounds;
  }
  qp.root = seq.front();
  qp.frequencies = CharVec::from_entries(std::move(counts));
  return qp;
}

}  // namespace siedm
