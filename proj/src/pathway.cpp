#include "milie/pathway.hpp"

#include <algorithm>
#include <string>

namespace milie {

std::string_view pathway_name(Pathway pathway) {
  switch (pathway) {
    case Pathway::SPOA: return "SPOA";
    case Pathway::SOPA: return "SOPA";
    case Pathway::PSOA: return "PSOA";
    case Pathway::POSA: return "POSA";
    case Pathway::OSPA: return "OSPA";
    case Pathway::OPSA: return "OPSA";
  }
  throw FormatError("invalid pathway value");
}

Pathway pathway_from_name(std::string_view name) {
  for (Pathway p : kAllPathways)
    if (pathway_name(p) == name) return p;
  throw FormatError("unknown pathway '" + std::string(name) + "'");
}

std::array<ElementKind, 3> pathway_order(Pathway pathway) {
  std::array<ElementKind, 3> order{};
  std::string_view name = pathway_name(pathway);
  for (std::size_t i = 0; i < 3; ++i) order[i] = kind_from_code(name[i]);
  return order;
}

void ExtractDiagnostics::merge(const ExtractDiagnostics& other) {
  pruned_branches += other.pruned_branches;
  length_overflows += other.length_overflows;
  dropped_overlaps += other.dropped_overlaps;
  truncated_spans += other.truncated_spans;
  capped_triples += other.capped_triples;
  duplicate_branches += other.duplicate_branches;
}

namespace {

bool overlaps_conditioned(const PartialTriple& branch, Span span) {
  for (ElementKind kind : kCoreKinds) {
    const auto& slot = branch.slot(kind);
    if (slot && slot->overlaps(span)) return true;
  }
  return false;
}

}  // namespace

std::vector<Triple> extract_from(const Sentence& sentence,
                                 const PartialTriple& root,
                                 const std::vector<ElementKind>& steps,
                                 const Tagger& model, const DecodeLimits& limits,
                                 std::size_t max_len,
                                 ExtractDiagnostics* diagnostics) {
  if (!limits.valid()) throw ConfigError("decode limits must be >= 1");
  if (steps.empty() || steps.back() != ElementKind::Argument)
    throw ConfigError("extraction steps must end with the argument step");
  PartialTriple coverage = root;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    if (steps[i] == ElementKind::Argument)
      throw ConfigError("argument step must come last");
    if (coverage.slot(steps[i]))
      throw ConfigError("step would re-extract an element the root already has");
    coverage.slot(steps[i]) = Span{0, 1};
  }
  if (!coverage.subject || !coverage.predicate || !coverage.object)
    throw ConfigError("root and steps together must cover subject, predicate, object");

  ExtractDiagnostics local;
  ExtractDiagnostics& diag = diagnostics ? *diagnostics : local;

  std::vector<PartialTriple> branches{root};
  std::vector<Triple> triples;

  for (ElementKind step : steps) {
    std::vector<PartialTriple> next;
    for (const PartialTriple& branch : branches) {
      MarkedSentence marked;
      try {
        marked = mark(sentence, branch, max_len);
      } catch (const LengthError&) {
        ++diag.length_overflows;
        continue;
      }
      std::vector<Span> spans = decode_bio(model.predict(marked, step), marked);

      if (step == ElementKind::Argument) {
        // Arguments attach collectively; an empty set is still a triple.
        if (triples.size() >= limits.max_triples) {
          ++diag.capped_triples;
          continue;
        }
        Triple t;
        t.subject = *branch.subject;
        t.predicate = *branch.predicate;
        t.object = *branch.object;
        t.args = std::move(spans);
        triples.push_back(std::move(t));
        continue;
      }

      if (spans.empty()) {
        ++diag.pruned_branches;
        continue;
      }
      std::size_t expanded = 0;
      for (const Span& span : spans) {
        if (expanded == limits.max_branch) {
          diag.truncated_spans += spans.size() - expanded;
          break;
        }
        ++expanded;
        if (overlaps_conditioned(branch, span)) {
          ++diag.dropped_overlaps;
          continue;
        }
        PartialTriple grown = branch;
        grown.slot(step) = span;
        if (std::find(next.begin(), next.end(), grown) != next.end()) {
          ++diag.duplicate_branches;
          continue;
        }
        if (next.size() == limits.max_triples) {
          ++diag.capped_triples;
          continue;
        }
        next.push_back(std::move(grown));
      }
    }
    if (step != ElementKind::Argument) branches = std::move(next);
    if (branches.empty()) break;
  }

  // Collapse duplicate extractions, keeping the first occurrence.
  std::vector<NormKey> seen;
  std::vector<Triple> unique;
  unique.reserve(triples.size());
  for (Triple& t : triples) {
    NormKey key = normalize(t, sentence);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      ++diag.duplicate_branches;
      continue;
    }
    seen.push_back(std::move(key));
    unique.push_back(std::move(t));
  }
  return unique;
}

std::vector<Triple> extract(const Sentence& sentence, Pathway pathway,
                            const Tagger& model, const DecodeLimits& limits,
                            std::size_t max_len,
                            ExtractDiagnostics* diagnostics) {
  auto order = pathway_order(pathway);
  std::vector<ElementKind> steps(order.begin(), order.end());
  steps.push_back(ElementKind::Argument);
  return extract_from(sentence, PartialTriple{}, steps, model, limits, max_len,
                      diagnostics);
}

PathwayResults extract_all(const Sentence& sentence, const Tagger& model,
                           const DecodeLimits& limits, std::size_t max_len,
                           ExtractDiagnostics* diagnostics) {
  PathwayResults results;
  for (Pathway p : kAllPathways)
    results[static_cast<std::size_t>(p)] =
        extract(sentence, p, model, limits, max_len, diagnostics);
  return results;
}

}  // namespace milie
