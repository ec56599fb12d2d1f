#include "milie/aggregate.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace milie {

std::vector<VotedTriple> water_fill_detailed(const KeyedResults& results,
                                             int min_votes) {
  const NormKey* reference = nullptr;
  for (const auto& list : results)
    for (const KeyedTriple& kt : list) {
      if (!reference) reference = &kt.key;
      if (kt.key.sentence_id != reference->sentence_id)
        throw MixedSentenceError("water filling mixes sentences '" +
                                 reference->sentence_id + "' and '" +
                                 kt.key.sentence_id + "'");
    }

  struct Entry {
    Triple triple;
    std::vector<Pathway> pathways;
  };
  std::map<NormKey, Entry> grouped;
  for (Pathway p : kAllPathways) {
    for (const KeyedTriple& kt : results[static_cast<std::size_t>(p)]) {
      auto [it, inserted] = grouped.try_emplace(kt.key);
      if (inserted) it->second.triple = kt.triple;
      auto& voters = it->second.pathways;
      if (voters.empty() || voters.back() != p) voters.push_back(p);
    }
  }

  std::vector<std::pair<NormKey, VotedTriple>> ranked;
  ranked.reserve(grouped.size());
  for (auto& [key, entry] : grouped) {
    auto votes = static_cast<int>(entry.pathways.size());
    if (votes < min_votes) continue;
    VotedTriple vt;
    vt.triple = std::move(entry.triple);
    vt.triple.confidence = votes / 6.0;
    vt.votes = votes;
    vt.pathways = std::move(entry.pathways);
    ranked.emplace_back(key, std::move(vt));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.votes != b.second.votes) return a.second.votes > b.second.votes;
    return std::tie(a.first.subject.start, a.first.predicate.start,
                    a.first.object.start, a.first) <
           std::tie(b.first.subject.start, b.first.predicate.start,
                    b.first.object.start, b.first);
  });

  std::vector<VotedTriple> out;
  out.reserve(ranked.size());
  for (auto& [key, vt] : ranked) out.push_back(std::move(vt));
  return out;
}

std::vector<VotedTriple> water_fill_detailed(const PathwayResults& results,
                                             const Sentence& sentence,
                                             int min_votes) {
  KeyedResults keyed;
  for (std::size_t i = 0; i < results.size(); ++i) {
    keyed[i].reserve(results[i].size());
    for (const Triple& t : results[i])
      keyed[i].push_back({normalize(t, sentence), t});
  }
  return water_fill_detailed(keyed, min_votes);
}

std::vector<Triple> water_fill(const PathwayResults& results,
                               const Sentence& sentence, int min_votes) {
  std::vector<Triple> out;
  for (VotedTriple& vt : water_fill_detailed(results, sentence, min_votes))
    out.push_back(std::move(vt.triple));
  return out;
}

}  // namespace milie
