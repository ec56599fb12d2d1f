#pragma once

#include <optional>
#include <vector>

#include "milie/aggregate.hpp"
#include "milie/jsonl.hpp"
#include "milie/pathway.hpp"
#include "milie/postprocess.hpp"
#include "milie/tagger.hpp"

namespace milie {

struct PipelineOptions {
  std::vector<Pathway> pathways{kAllPathways.begin(), kAllPathways.end()};
  bool aggregate = true;  // water filling; otherwise concatenate pathway outputs
  int min_votes = 1;
  bool binarize = false;
  DecodeLimits limits;
  std::size_t max_len = kDefaultMaxLen;
};

struct SentenceResult {
  std::vector<SentenceTriple> triples;
  ExtractDiagnostics extract_diag;
  PostDiagnostics post_diag;
};

SentenceResult run_sentence(const Sentence& sentence, const Tagger& model,
                            const PipelineOptions& options);

// Serial reference implementation.
std::vector<SentenceResult> run_corpus(const std::vector<Sentence>& sentences,
                                       const Tagger& model,
                                       const PipelineOptions& options);

// Data-parallel over sentences (OpenMP when available, serial otherwise).
// Output is identical to run_corpus, in input order; jobs <= 0 uses the
// runtime default thread count.
std::vector<SentenceResult> run_corpus_parallel(
    const std::vector<Sentence>& sentences, const Tagger& model,
    const PipelineOptions& options, int jobs = 0);

// Token-aligns a prior against its sentence. nullopt when a surface string
// has no token match or the resolved spans overlap (the prior is skipped);
// structurally invalid spans are a DataError.
std::optional<PartialTriple> resolve_prior(const Prior& prior,
                                           const Sentence& sentence);

}  // namespace milie
