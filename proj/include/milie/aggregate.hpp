#pragma once

#include <array>
#include <vector>

#include "milie/core.hpp"
#include "milie/pathway.hpp"

namespace milie {

// One aggregated extraction: how many pathways voted for it and which.
struct VotedTriple {
  Triple triple;                   // confidence = votes / 6
  int votes = 0;                   // == pathways.size()
  std::vector<Pathway> pathways;   // distinct, in canonical pathway order
};

// A triple carrying its precomputed identity, for aggregation without the
// sentence at hand.
struct KeyedTriple {
  NormKey key;
  Triple triple;
};

using KeyedResults = std::array<std::vector<KeyedTriple>, 6>;

// Water filling: group by key, count the distinct pathways voting for each
// key, set confidence = votes/6, sort by votes descending with ties broken
// by (subject start, predicate start, object start, key) ascending. Keys
// with votes below min_votes are dropped. Throws MixedSentenceError when the
// keys span more than one sentence.
std::vector<VotedTriple> water_fill_detailed(const KeyedResults& results,
                                             int min_votes = 1);

std::vector<VotedTriple> water_fill_detailed(const PathwayResults& results,
                                             const Sentence& sentence,
                                             int min_votes = 1);

std::vector<Triple> water_fill(const PathwayResults& results,
                               const Sentence& sentence, int min_votes = 1);

}  // namespace milie
