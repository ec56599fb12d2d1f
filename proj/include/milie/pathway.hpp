#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "milie/core.hpp"
#include "milie/tagger.hpp"

namespace milie {

// Order in which the three core elements are decoded; arguments always come
// last. Enumerator values index PathwayResults.
enum class Pathway : std::uint8_t { SPOA, SOPA, PSOA, POSA, OSPA, OPSA };

inline constexpr std::array<Pathway, 6> kAllPathways = {
    Pathway::SPOA, Pathway::SOPA, Pathway::PSOA,
    Pathway::POSA, Pathway::OSPA, Pathway::OPSA};

std::string_view pathway_name(Pathway pathway);
Pathway pathway_from_name(std::string_view name);  // throws FormatError
std::array<ElementKind, 3> pathway_order(Pathway pathway);

struct DecodeLimits {
  std::size_t max_branch = 8;   // spans expanded per conditioned step
  std::size_t max_triples = 64;  // per sentence and pathway

  bool valid() const { return max_branch >= 1 && max_triples >= 1; }
};

// Per-sentence counters for everything the engine silently drops.
struct ExtractDiagnostics {
  std::size_t pruned_branches = 0;    // core step decoded to zero spans
  std::size_t length_overflows = 0;   // marking exceeded max_len
  std::size_t dropped_overlaps = 0;   // span overlapped an already-marked element
  std::size_t truncated_spans = 0;    // spans beyond max_branch
  std::size_t capped_triples = 0;     // branches beyond max_triples
  std::size_t duplicate_branches = 0; // collapsed within one pathway

  void merge(const ExtractDiagnostics& other);
};

// Iterative decoding with `root` as the pre-filled branch: predicts `steps`
// in order, marking everything a branch has accumulated so far. Core steps
// fan out per decoded span and prune on empty predictions; an Argument step
// attaches all decoded spans to the branch and emits it. This is the engine
// behind both full-pathway extraction and hybrid completion.
std::vector<Triple> extract_from(const Sentence& sentence,
                                 const PartialTriple& root,
                                 const std::vector<ElementKind>& steps,
                                 const Tagger& model, const DecodeLimits& limits,
                                 std::size_t max_len = kDefaultMaxLen,
                                 ExtractDiagnostics* diagnostics = nullptr);

std::vector<Triple> extract(const Sentence& sentence, Pathway pathway,
                            const Tagger& model, const DecodeLimits& limits = {},
                            std::size_t max_len = kDefaultMaxLen,
                            ExtractDiagnostics* diagnostics = nullptr);

// Result lists indexed by Pathway enumerator value.
using PathwayResults = std::array<std::vector<Triple>, 6>;

PathwayResults extract_all(const Sentence& sentence, const Tagger& model,
                           const DecodeLimits& limits = {},
                           std::size_t max_len = kDefaultMaxLen,
                           ExtractDiagnostics* diagnostics = nullptr);

}  // namespace milie
