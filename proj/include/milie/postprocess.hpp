#pragma once

#include <optional>
#include <string>
#include <vector>

#include "milie/core.hpp"
#include "milie/pathway.hpp"
#include "milie/tagger.hpp"

namespace milie {

struct PostDiagnostics {
  std::size_t skipped_args = 0;   // argument marking overflowed or overlapped
  std::size_t rejected_args = 0;  // re-extraction predicted all-O

  void merge(const PostDiagnostics& other) {
    skipped_args += other.skipped_args;
    rejected_args += other.rejected_args;
  }
};

// N-ary to binary: always keeps (subject; predicate; object) with args
// dropped; every argument is re-queried as a hypothesized object — subject
// and argument marked, predicate head asked — and yields (subject; new
// predicate; argument) when a predicate decodes, nothing when the model
// stays silent. Confidences are inherited.
std::vector<Triple> binarize(const Triple& triple, const Sentence& sentence,
                             const Tagger& model,
                             std::size_t max_len = kDefaultMaxLen,
                             PostDiagnostics* diagnostics = nullptr);

// Fills in whatever core elements the prior lacks, predicting the missing
// ones in the fixed order P, S, O and attaching arguments last. An empty
// first-step prediction rejects the prior (empty result). An empty prior
// degenerates to a full PSOA extraction.
std::vector<Triple> complete(const Sentence& sentence, const PartialTriple& prior,
                             const Tagger& model, const DecodeLimits& limits = {},
                             std::size_t max_len = kDefaultMaxLen,
                             ExtractDiagnostics* diagnostics = nullptr);

// Leftmost exact token-sequence match of `tokens` in the sentence; empty
// input or no match gives nullopt.
std::optional<Span> align_tokens(const Sentence& sentence,
                                 const std::vector<std::string>& tokens);

}  // namespace milie
