#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "milie/core.hpp"
#include "milie/tagger.hpp"

namespace milie {

// One prediction line: a triple tied to its sentence id.
struct SentenceTriple {
  std::string sentence_id;
  Triple triple;
};

// A partial extraction supplied by an external system. Elements arrive
// either as token spans or as surface strings to be aligned.
struct Prior {
  using Element = std::variant<Span, std::vector<std::string>>;
  std::string sentence_id;
  std::optional<Element> subject;
  std::optional<Element> predicate;
  std::optional<Element> object;
};

nlohmann::json sentence_to_json(const Sentence& sentence);
Sentence sentence_from_json(const nlohmann::json& j);

nlohmann::json triple_to_json(const std::string& sentence_id, const Triple& triple);
SentenceTriple triple_from_json(const nlohmann::json& j);

nlohmann::json gold_record_to_json(const GoldRecord& record);
GoldRecord gold_record_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const TrainingInstance& instance);
TrainingInstance instance_from_json(const nlohmann::json& j);

Prior prior_from_json(const nlohmann::json& j);

// Streams a JSONL file, reporting the 1-based line number in FormatError
// messages. The callback receives each parsed line.
void for_each_jsonl_line(std::istream& in,
                         const std::function<void(std::size_t, const nlohmann::json&)>& fn);

// Loaders validate domain invariants: sentences are non-empty, within
// max_len, and free of reserved marker symbols; gold triples carry all
// three core elements with in-range, pairwise disjoint spans.
std::vector<Sentence> read_sentences(const std::string& path,
                                     std::size_t max_len = kDefaultMaxLen);
std::vector<SentenceTriple> read_triples(const std::string& path);
std::vector<GoldRecord> read_gold_records(const std::string& path,
                                          std::size_t max_len = kDefaultMaxLen);
std::vector<TrainingInstance> read_instances(const std::string& path);
std::vector<Prior> read_priors(const std::string& path);

void write_sentences(const std::string& path, const std::vector<Sentence>& sentences);
void write_triples(const std::string& path, const std::vector<SentenceTriple>& triples);
void write_gold_records(const std::string& path, const std::vector<GoldRecord>& records);
void write_instances(const std::string& path, const std::vector<TrainingInstance>& instances);

void validate_sentence(const Sentence& sentence, std::size_t max_len);
void validate_gold_record(const GoldRecord& record);

}  // namespace milie
