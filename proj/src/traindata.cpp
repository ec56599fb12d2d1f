#include "milie/traindata.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "milie/random.hpp"

namespace milie {

namespace {

// Decorrelate the positive and negative draws made for the same record.
constexpr std::uint64_t kPositiveStream = 1;
constexpr std::uint64_t kNegativeStream = 2;

std::mt19937_64 record_rng(std::uint64_t seed, std::uint64_t stream,
                           const std::string& record_id) {
  return std::mt19937_64(mix_seed(mix_seed(seed, stream), fnv1a(record_id)));
}

void check_config(const SamplerConfig& config) {
  if (config.negative_fraction < 0.0 || config.negative_fraction > 1.0)
    throw ConfigError("negative fraction must lie in [0, 1]");
}

// Targets for one instance: every gold span of `kind` consistent with the
// marking, encoded over the rendered positions. Matches what the oracle
// tagger answers for the same query.
BioSequence target_labels_for(const MarkedSentence& marked,
                              const std::vector<Triple>& gold,
                              ElementKind kind) {
  std::vector<Span> rendered;
  for (Span s : consistent_element_spans(gold, marked.markers, kind))
    rendered.push_back(marked.to_rendered(s));
  return encode_bio(rendered, marked.size());
}

}  // namespace

std::array<ElementKind, 3> draw_order(std::mt19937_64& rng) {
  static constexpr std::array<std::array<ElementKind, 3>, 6> kOrders = {{
      {ElementKind::Subject, ElementKind::Predicate, ElementKind::Object},
      {ElementKind::Subject, ElementKind::Object, ElementKind::Predicate},
      {ElementKind::Predicate, ElementKind::Subject, ElementKind::Object},
      {ElementKind::Predicate, ElementKind::Object, ElementKind::Subject},
      {ElementKind::Object, ElementKind::Subject, ElementKind::Predicate},
      {ElementKind::Object, ElementKind::Predicate, ElementKind::Subject},
  }};
  return kOrders[draw_index(rng, kOrders.size())];
}

std::vector<TrainingInstance> generate_for_order(
    const GoldRecord& record, std::size_t triple_index,
    const std::array<ElementKind, 3>& order, SamplerDiagnostics* diagnostics) {
  if (triple_index >= record.triples.size())
    throw DataError("triple index out of range");
  SamplerDiagnostics local;
  SamplerDiagnostics& diag = diagnostics ? *diagnostics : local;
  const Triple& triple = record.triples[triple_index];

  std::vector<TrainingInstance> out;
  PartialTriple prefix;
  bool overflowed = false;
  for (std::size_t k = 0; k < 3 && !overflowed; ++k) {
    try {
      MarkedSentence marked = mark(record.sentence, prefix);
      TrainingInstance instance;
      instance.target_labels = target_labels_for(marked, record.triples, order[k]);
      instance.marked = std::move(marked);
      instance.target_kind = order[k];
      out.push_back(std::move(instance));
    } catch (const LengthError&) {
      // Adding markers only grows the rendering, so later prefixes are out too.
      ++diag.length_skips;
      overflowed = true;
    }
    prefix.slot(order[k]) = triple.element(order[k]);
  }
  try {
    MarkedSentence marked = mark(record.sentence, prefix);
    TrainingInstance instance;
    instance.target_labels =
        target_labels_for(marked, record.triples, ElementKind::Argument);
    instance.marked = std::move(marked);
    instance.target_kind = ElementKind::Argument;
    out.push_back(std::move(instance));
  } catch (const LengthError&) {
    ++diag.length_skips;
  }
  return out;
}

std::vector<TrainingInstance> generate(const GoldRecord& record,
                                       const SamplerConfig& config,
                                       SamplerDiagnostics* diagnostics) {
  check_config(config);
  std::mt19937_64 rng =
      record_rng(config.seed, kPositiveStream, record.sentence.id);
  std::vector<TrainingInstance> out;
  for (std::size_t i = 0; i < record.triples.size(); ++i) {
    auto order = draw_order(rng);
    auto instances = generate_for_order(record, i, order, diagnostics);
    std::move(instances.begin(), instances.end(), std::back_inserter(out));
  }
  return out;
}

namespace {

struct Corruption {
  std::map<ElementKind, Span> marking;
  ElementKind target_kind = ElementKind::Predicate;
};

// Technique 1: the predicate marker moves to a uniformly chosen span of the
// same length over non-predicate tokens; the queried head is S or O.
std::optional<Corruption> corrupt_predicate(const GoldRecord& record,
                                            std::mt19937_64& rng) {
  const auto& triples = record.triples;
  const Triple& t = triples[draw_index(rng, triples.size())];
  std::size_t len = t.predicate.size();
  std::vector<Span> candidates;
  for (std::size_t s = 0; s + len <= record.sentence.size(); ++s) {
    Span span{s, s + len};
    if (!span.overlaps(t.predicate)) candidates.push_back(span);
  }
  ElementKind target =
      draw_index(rng, 2) == 0 ? ElementKind::Subject : ElementKind::Object;
  if (candidates.empty()) return std::nullopt;
  Span span = candidates[draw_index(rng, candidates.size())];
  return Corruption{{{ElementKind::Predicate, span}}, target};
}

// Technique 2: subject and object markers exchanged within one triple.
Corruption swap_subject_object(const GoldRecord& record, std::mt19937_64& rng) {
  const Triple& t = record.triples[draw_index(rng, record.triples.size())];
  return Corruption{{{ElementKind::Subject, t.object},
                     {ElementKind::Object, t.subject}},
                    ElementKind::Predicate};
}

// Technique 3: subject and object drawn from two different triples.
std::optional<Corruption> mismatch_pair(const GoldRecord& record,
                                        std::mt19937_64& rng) {
  std::size_t n = record.triples.size();
  std::size_t i = draw_index(rng, n);
  std::size_t j = draw_index(rng, n - 1);
  if (j >= i) ++j;
  Span subject = record.triples[i].subject;
  Span object = record.triples[j].object;
  if (subject.overlaps(object)) return std::nullopt;
  return Corruption{
      {{ElementKind::Subject, subject}, {ElementKind::Object, object}},
      ElementKind::Predicate};
}

bool inconsistent_with_all(const std::vector<Triple>& gold,
                           const std::map<ElementKind, Span>& marking) {
  return std::none_of(gold.begin(), gold.end(), [&](const Triple& g) {
    return marking_consistent(g, marking);
  });
}

}  // namespace

std::vector<TrainingInstance> negatives(const GoldRecord& record,
                                        const SamplerConfig& config,
                                        SamplerDiagnostics* diagnostics) {
  check_config(config);
  SamplerDiagnostics local;
  SamplerDiagnostics& diag = diagnostics ? *diagnostics : local;
  std::vector<TrainingInstance> out;
  if (record.triples.empty()) return out;

  std::mt19937_64 rng =
      record_rng(config.seed, kNegativeStream, record.sentence.id);
  if (draw_unit(rng) >= config.negative_fraction) return out;

  for (std::size_t slot = 0; slot < config.negatives_per_instance; ++slot) {
    const bool two_corrupted = slot % 2 == 1;
    bool emitted = false;
    bool overflowed = false;
    for (int attempt = 0; attempt < 10 && !emitted; ++attempt) {
      std::optional<Corruption> corruption;
      if (!two_corrupted) {
        corruption = corrupt_predicate(record, rng);
      } else if (record.triples.size() < 2 || draw_index(rng, 2) == 0) {
        corruption = swap_subject_object(record, rng);
      } else {
        corruption = mismatch_pair(record, rng);
      }
      if (!corruption) continue;
      if (!inconsistent_with_all(record.triples, corruption->marking)) continue;

      PartialTriple conditioned;
      for (const auto& [kind, span] : corruption->marking)
        conditioned.slot(kind) = span;
      try {
        MarkedSentence marked = mark(record.sentence, conditioned);
        TrainingInstance instance;
        instance.target_labels.assign(marked.size(), BioLabel::O);
        instance.marked = std::move(marked);
        instance.target_kind = corruption->target_kind;
        instance.is_negative = true;
        out.push_back(std::move(instance));
        emitted = true;
      } catch (const LengthError&) {
        // Rendered length depends only on the marker count, which is fixed
        // per slot, so retrying cannot help.
        ++diag.length_skips;
        overflowed = true;
        break;
      }
    }
    if (!emitted && !overflowed) ++diag.negative_failures;
  }
  return out;
}

}  // namespace milie
