#include "milie/runner.hpp"

#include <algorithm>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace milie {

SentenceResult run_sentence(const Sentence& sentence, const Tagger& model,
                            const PipelineOptions& options) {
  SentenceResult result;

  PathwayResults per_pathway;
  for (Pathway p : options.pathways)
    per_pathway[static_cast<std::size_t>(p)] =
        extract(sentence, p, model, options.limits, options.max_len,
                &result.extract_diag);

  std::vector<Triple> triples;
  if (options.aggregate) {
    triples = water_fill(per_pathway, sentence, options.min_votes);
  } else {
    for (Pathway p : options.pathways) {
      auto& list = per_pathway[static_cast<std::size_t>(p)];
      std::move(list.begin(), list.end(), std::back_inserter(triples));
    }
  }

  if (options.binarize) {
    std::vector<Triple> binary;
    std::vector<NormKey> seen;
    for (const Triple& t : triples) {
      for (Triple& b :
           binarize(t, sentence, model, options.max_len, &result.post_diag)) {
        NormKey key = normalize(b, sentence);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(std::move(key));
        binary.push_back(std::move(b));
      }
    }
    triples = std::move(binary);
  }

  result.triples.reserve(triples.size());
  for (Triple& t : triples)
    result.triples.push_back({sentence.id, std::move(t)});
  return result;
}

std::vector<SentenceResult> run_corpus(const std::vector<Sentence>& sentences,
                                       const Tagger& model,
                                       const PipelineOptions& options) {
  std::vector<SentenceResult> results;
  results.reserve(sentences.size());
  for (const Sentence& sentence : sentences)
    results.push_back(run_sentence(sentence, model, options));
  return results;
}

std::vector<SentenceResult> run_corpus_parallel(
    const std::vector<Sentence>& sentences, const Tagger& model,
    const PipelineOptions& options, int jobs) {
  std::vector<SentenceResult> results(sentences.size());
  std::vector<std::exception_ptr> errors(sentences.size());
#ifdef _OPENMP
  int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0;
       i < static_cast<std::ptrdiff_t>(sentences.size()); ++i) {
    try {
      results[static_cast<std::size_t>(i)] =
          run_sentence(sentences[static_cast<std::size_t>(i)], model, options);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
#else
  (void)jobs;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    try {
      results[i] = run_sentence(sentences[i], model, options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
#endif
  // Rethrow the lowest-index failure so behavior matches the serial runner.
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

namespace {

std::optional<Span> resolve_element(const Prior::Element& element,
                                    const Sentence& sentence,
                                    std::string_view what) {
  if (const Span* span = std::get_if<Span>(&element)) {
    if (!span_in_sentence(*span, sentence))
      throw DataError("prior " + std::string(what) +
                      " span out of range in sentence '" + sentence.id + "'");
    return *span;
  }
  return align_tokens(sentence, std::get<std::vector<std::string>>(element));
}

}  // namespace

std::optional<PartialTriple> resolve_prior(const Prior& prior,
                                           const Sentence& sentence) {
  PartialTriple out;
  const std::optional<Prior::Element>* elements[3] = {
      &prior.subject, &prior.predicate, &prior.object};
  for (std::size_t k = 0; k < 3; ++k) {
    if (!elements[k]->has_value()) continue;
    auto span = resolve_element(**elements[k], sentence, kind_name(kCoreKinds[k]));
    if (!span) return std::nullopt;
    out.slot(kCoreKinds[k]) = *span;
  }
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) {
      const auto& sa = out.slot(kCoreKinds[a]);
      const auto& sb = out.slot(kCoreKinds[b]);
      if (sa && sb && sa->overlaps(*sb)) return std::nullopt;
    }
  return out;
}

}  // namespace milie
