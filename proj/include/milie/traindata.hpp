#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "milie/core.hpp"
#include "milie/tagger.hpp"

namespace milie {

struct SamplerConfig {
  std::uint64_t seed = 1;
  std::size_t negatives_per_instance = 2;  // negatives per eligible record
  double negative_fraction = 1.0;          // fraction of records corrupted
};

struct SamplerDiagnostics {
  std::size_t length_skips = 0;       // instance dropped: marking overflowed
  std::size_t negative_failures = 0;  // no valid corruption within 10 tries

  void merge(const SamplerDiagnostics& other) {
    length_skips += other.length_skips;
    negative_failures += other.negative_failures;
  }
};

// Uniform draw over the six extraction orders of {S, P, O}.
std::array<ElementKind, 3> draw_order(std::mt19937_64& rng);

// Instances for one gold triple under a fixed order: for each prefix length
// k = 0..2, the sentence with the first k elements marked and BIO targets
// covering every gold span of the next kind consistent with the marking,
// then one argument instance with all of S, P, O marked.
std::vector<TrainingInstance> generate_for_order(
    const GoldRecord& record, std::size_t triple_index,
    const std::array<ElementKind, 3>& order,
    SamplerDiagnostics* diagnostics = nullptr);

// Positive instances for a record: one uniformly drawn order per gold
// triple. Seeded by (config.seed, record id), so records are independent.
std::vector<TrainingInstance> generate(const GoldRecord& record,
                                       const SamplerConfig& config,
                                       SamplerDiagnostics* diagnostics = nullptr);

// Corrupted all-O instances: alternating one- and two-element corruptions
// using predicate replacement, subject/object exchange, and cross-triple
// subject/object mismatch. Every emitted marking is inconsistent with all
// gold triples; candidates that stay consistent are resampled up to 10
// times, then skipped with a diagnostic.
std::vector<TrainingInstance> negatives(const GoldRecord& record,
                                        const SamplerConfig& config,
                                        SamplerDiagnostics* diagnostics = nullptr);

}  // namespace milie
