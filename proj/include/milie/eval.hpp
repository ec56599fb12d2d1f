#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "milie/core.hpp"
#include "milie/jsonl.hpp"

namespace milie {

// One acceptable surface form of a fact, case-sensitive whitespace-joined.
struct FactVariant {
  std::string subject;
  std::string predicate;
  std::string object;
};

// One gold fact with all acceptable variants.
struct FactSynset {
  std::string sentence_id;
  std::vector<FactVariant> variants;  // non-empty
};

struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Tuple-overlap scoring credits fractional matches, hence doubles.
  double matched_predictions = 0.0;
  double total_predictions = 0.0;
  double matched_gold = 0.0;
  double total_gold = 0.0;
};

ScoreReport make_report(double matched_predictions, double total_predictions,
                        double matched_gold, double total_gold);

// Fact-based scoring: a prediction is correct iff its (subject, predicate,
// object) surfaces exactly equal some variant of some synset; recall counts
// synsets with at least one matching prediction. Arguments are ignored.
ScoreReport score_benchie(const std::vector<SentenceTriple>& preds,
                          const std::vector<FactSynset>& gold,
                          const std::vector<Sentence>& sentences);

// Tuple scoring in the CaRB style: per sentence, a one-to-one matching
// maximizing total similarity is chosen separately for the precision side
// (token overlap / prediction length) and the recall side (token overlap /
// gold length); similarity is the mean over subject, predicate, and
// object-plus-arguments token multisets.
ScoreReport score_carb(const std::vector<SentenceTriple>& preds,
                       const std::vector<SentenceTriple>& gold,
                       const std::vector<Sentence>& sentences);

// Lexical match (head containment): a prediction matches a gold triple iff,
// for each of S/P/O, the prediction's element span contains the gold
// element's syntactic head token (the token whose head index falls outside
// the span; fallback: first token). Each gold matches at most once.
ScoreReport score_lexical(const std::vector<SentenceTriple>& preds,
                          const std::vector<SentenceTriple>& gold,
                          const std::vector<Sentence>& sentences);

// Entropy (bits) of the tag distribution pooled over all gold spans of each
// core element kind, indexed S, P, O. pos is filled only when requested;
// requesting it on a corpus without a part-of-speech layer is a
// MissingTagError.
struct EntropyTable {
  std::array<double, 3> dep{};
  std::optional<std::array<double, 3>> pos;
};

EntropyTable entropy_profile(const std::vector<GoldRecord>& gold,
                             bool include_pos = true);

nlohmann::json report_to_json(const ScoreReport& report);
std::string report_table_text(const ScoreReport& report);   // F1 / Prec. / Rec.
nlohmann::json entropy_to_json(const EntropyTable& table);
std::string entropy_table_text(const EntropyTable& table);

// Synset JSONL: {"sentence_id": str, "facts": [[{"s","p","o"}, ...], ...]};
// each fact becomes one FactSynset.
std::vector<FactSynset> read_fact_synsets(const std::string& path);

}  // namespace milie
