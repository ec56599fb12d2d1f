#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "milie/core.hpp"

namespace milie {

// One tagged sentence the model learns from: a marked input, the head it
// trains, and the BIO targets over the rendered positions. Negatives carry
// all-O targets for a corrupted marking.
struct TrainingInstance {
  MarkedSentence marked;
  ElementKind target_kind = ElementKind::Subject;
  BioSequence target_labels;
  bool is_negative = false;
};

struct TrainConfig {
  std::uint64_t seed = 1;
  int epochs = 2;
  double learning_rate = 0.1;
  double negative_weight = 1.0;
};

// Four-head sequence tagger: one BIO labeling per (input, element kind).
// Implementations must be deterministic and label marker positions O.
class Tagger {
 public:
  virtual ~Tagger() = default;

  virtual BioSequence predict(const MarkedSentence& marked,
                              ElementKind kind) const = 0;

  // Identifier stored in the model container ("oracle", "window", ...).
  virtual std::string kind_tag() const = 0;
};

// A gold triple agrees with a marking when every marked element equals the
// triple's element span exactly.
bool marking_consistent(const Triple& gold,
                        const std::map<ElementKind, Span>& markers);

// Element spans of all gold triples consistent with the marking, sorted and
// deduplicated; distinct overlapping spans are merged into their union so
// the result always admits a BIO encoding.
std::vector<Span> consistent_element_spans(const std::vector<Triple>& gold,
                                           const std::map<ElementKind, Span>& markers,
                                           ElementKind kind);

// Verification tagger: answers every query with exactly the gold spans
// consistent with the conditioning markers, all-O otherwise.
class OracleTagger final : public Tagger {
 public:
  explicit OracleTagger(std::vector<GoldRecord> gold);

  BioSequence predict(const MarkedSentence& marked,
                      ElementKind kind) const override;
  std::string kind_tag() const override { return "oracle"; }

  const std::vector<GoldRecord>& gold() const { return gold_; }

 private:
  std::vector<GoldRecord> gold_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// Desk-scale trainable tagger: a per-token softmax over sparse window
// features (token/tag identities, neighbor tokens, bucketed distance to
// each marker pair) with an independent linear output layer per head.
class WindowTagger final : public Tagger {
 public:
  BioSequence predict(const MarkedSentence& marked,
                      ElementKind kind) const override;
  std::string kind_tag() const override { return "window"; }

  std::size_t feature_count() const { return feature_names_.size(); }

  using LabelWeights = std::array<float, 3>;  // B, I, O

  friend std::unique_ptr<WindowTagger> train_window_tagger(
      const std::vector<TrainingInstance>&, const TrainConfig&);
  friend struct ModelCodec;

 private:
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, std::uint32_t> feature_ids_;
  std::array<std::vector<LabelWeights>, 4> weights_;  // per head

  std::vector<std::uint32_t> features_at(const MarkedSentence& marked,
                                         std::size_t position,
                                         bool grow);
  std::vector<std::uint32_t> features_at(const MarkedSentence& marked,
                                         std::size_t position) const;
};

// Minimizes per-head negative log likelihood of the targets; each instance
// contributes only to its target head. Reproducible under a fixed seed.
std::unique_ptr<WindowTagger> train_window_tagger(
    const std::vector<TrainingInstance>& instances, const TrainConfig& config);

inline std::unique_ptr<Tagger> train(const std::vector<TrainingInstance>& instances,
                                     const TrainConfig& config) {
  return train_window_tagger(instances, config);
}

std::unique_ptr<Tagger> oracle_from_gold(std::vector<GoldRecord> gold);

// Versioned model container ("MILIE-TAGGER <version>" header + payload).
// load(save(m)) predicts identically to m; FormatError on anything else.
std::string save_model(const Tagger& model);
std::unique_ptr<Tagger> load_model(const std::string& bytes);
void save_model_file(const Tagger& model, const std::string& path);
std::unique_ptr<Tagger> load_model_file(const std::string& path);

inline constexpr std::string_view kModelMagic = "MILIE-TAGGER";
inline constexpr int kModelVersion = 1;

}  // namespace milie
