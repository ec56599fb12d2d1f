#include "milie/jsonl.hpp"

#include <fstream>
#include <sstream>

namespace milie {

using nlohmann::json;

namespace {

json span_to_json(Span span) {
  return json::array({span.start, span.end});
}

Span span_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
      !j[1].is_number_unsigned())
    throw FormatError("span must be a [start, end] pair of non-negative integers");
  Span span{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  if (span.start >= span.end)
    throw FormatError("span [" + std::to_string(span.start) + ", " +
                      std::to_string(span.end) + ") is empty or reversed");
  return span;
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw FormatError(std::string("missing required field \"") + key + "\"");
  return *it;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace

json sentence_to_json(const Sentence& sentence) {
  json tokens = json::array();
  for (const Token& t : sentence.tokens) {
    json tok{{"text", t.text}, {"dep", t.dep}};
    if (!t.pos.empty()) tok["pos"] = t.pos;
    if (t.head >= 0) tok["head"] = t.head;
    tokens.push_back(std::move(tok));
  }
  return json{{"id", sentence.id}, {"tokens", std::move(tokens)}};
}

Sentence sentence_from_json(const json& j) {
  Sentence sentence;
  sentence.id = require(j, "id").get<std::string>();
  const json& tokens = require(j, "tokens");
  if (!tokens.is_array()) throw FormatError("\"tokens\" must be an array");
  for (const json& tok : tokens) {
    Token t;
    t.index = sentence.tokens.size();
    t.text = require(tok, "text").get<std::string>();
    t.dep = require(tok, "dep").get<std::string>();
    if (tok.contains("pos")) t.pos = tok["pos"].get<std::string>();
    if (tok.contains("head")) t.head = tok["head"].get<int>();
    sentence.tokens.push_back(std::move(t));
  }
  return sentence;
}

json triple_to_json(const std::string& sentence_id, const Triple& triple) {
  json args = json::array();
  for (const Span& a : triple.args) args.push_back(span_to_json(a));
  return json{{"sentence_id", sentence_id},
              {"subject", span_to_json(triple.subject)},
              {"predicate", span_to_json(triple.predicate)},
              {"object", span_to_json(triple.object)},
              {"args", std::move(args)},
              {"confidence", triple.confidence}};
}

SentenceTriple triple_from_json(const json& j) {
  SentenceTriple out;
  out.sentence_id = require(j, "sentence_id").get<std::string>();
  out.triple.subject = span_from_json(require(j, "subject"));
  out.triple.predicate = span_from_json(require(j, "predicate"));
  out.triple.object = span_from_json(require(j, "object"));
  if (j.contains("args"))
    for (const json& a : j["args"]) out.triple.args.push_back(span_from_json(a));
  if (j.contains("confidence")) {
    out.triple.confidence = j["confidence"].get<double>();
    if (out.triple.confidence < 0.0 || out.triple.confidence > 1.0)
      throw FormatError("confidence must lie in [0, 1]");
  }
  return out;
}

json gold_record_to_json(const GoldRecord& record) {
  json triples = json::array();
  for (const Triple& t : record.triples) {
    json jt = triple_to_json(record.sentence.id, t);
    jt.erase("sentence_id");
    jt.erase("confidence");
    triples.push_back(std::move(jt));
  }
  return json{{"sentence", sentence_to_json(record.sentence)},
              {"triples", std::move(triples)}};
}

GoldRecord gold_record_from_json(const json& j) {
  GoldRecord record;
  record.sentence = sentence_from_json(require(j, "sentence"));
  for (const json& jt : require(j, "triples")) {
    Triple t;
    t.subject = span_from_json(require(jt, "subject"));
    t.predicate = span_from_json(require(jt, "predicate"));
    t.object = span_from_json(require(jt, "object"));
    if (jt.contains("args"))
      for (const json& a : jt["args"]) t.args.push_back(span_from_json(a));
    record.triples.push_back(std::move(t));
  }
  return record;
}

json instance_to_json(const TrainingInstance& instance) {
  json rendered = json::array();
  json tags = json::array();
  for (const Token& t : instance.marked.rendered) {
    rendered.push_back(t.text);
    tags.push_back(t.dep);
  }
  json labels = json::array();
  for (BioLabel l : instance.target_labels)
    labels.push_back(std::string(1, bio_char(l)));
  return json{{"rendered", std::move(rendered)},
              {"tags", std::move(tags)},
              {"target_kind", std::string(1, kind_code(instance.target_kind))},
              {"labels", std::move(labels)},
              {"negative", instance.is_negative}};
}

TrainingInstance instance_from_json(const json& j) {
  TrainingInstance instance;
  std::vector<std::string> texts, tags;
  for (const json& t : require(j, "rendered")) texts.push_back(t.get<std::string>());
  for (const json& t : require(j, "tags")) tags.push_back(t.get<std::string>());
  instance.marked = marked_from_rendered("", texts, tags);
  const std::string kind = require(j, "target_kind").get<std::string>();
  if (kind.size() != 1) throw FormatError("target_kind must be one of S, P, O, A");
  instance.target_kind = kind_from_code(kind[0]);
  for (const json& l : require(j, "labels")) {
    const std::string s = l.get<std::string>();
    if (s.size() != 1) throw FormatError("labels must be one of B, I, O");
    instance.target_labels.push_back(bio_from_char(s[0]));
  }
  if (instance.target_labels.size() != instance.marked.rendered.size())
    throw FormatError("label count does not match rendered length");
  instance.is_negative = require(j, "negative").get<bool>();
  if (instance.is_negative)
    for (BioLabel l : instance.target_labels)
      if (l != BioLabel::O)
        throw FormatError("negative instance carries a non-O label");
  return instance;
}

Prior prior_from_json(const json& j) {
  Prior prior;
  prior.sentence_id = require(j, "sentence_id").get<std::string>();
  auto element = [&](const char* key) -> std::optional<Prior::Element> {
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    if (it->is_array() && it->size() == 2 && (*it)[0].is_number())
      return Prior::Element{span_from_json(*it)};
    if (it->is_string()) {
      std::istringstream words(it->get<std::string>());
      std::vector<std::string> tokens;
      std::string word;
      while (words >> word) tokens.push_back(word);
      if (tokens.empty()) throw FormatError("empty prior element string");
      return Prior::Element{std::move(tokens)};
    }
    throw FormatError(std::string("prior field \"") + key +
                      "\" must be a span or a string");
  };
  prior.subject = element("subject");
  prior.predicate = element("predicate");
  prior.object = element("object");
  return prior;
}

void for_each_jsonl_line(std::istream& in,
                         const std::function<void(std::size_t, const json&)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json parsed;
    try {
      parsed = json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      fn(line_no, parsed);
    } catch (const Error& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const json::exception& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void validate_sentence(const Sentence& sentence, std::size_t max_len) {
  if (sentence.tokens.empty())
    throw FormatError("sentence '" + sentence.id + "' has no tokens");
  if (sentence.tokens.size() > max_len)
    throw LengthError("sentence '" + sentence.id + "' has " +
                      std::to_string(sentence.tokens.size()) +
                      " tokens, max_len is " + std::to_string(max_len));
  for (const Token& t : sentence.tokens) {
    if (t.text.empty())
      throw FormatError("sentence '" + sentence.id + "' contains an empty token");
    if (is_marker_symbol(t.text))
      throw FormatError("sentence '" + sentence.id +
                        "' contains reserved marker symbol " + t.text);
  }
}

void validate_gold_record(const GoldRecord& record) {
  for (const Triple& t : record.triples) {
    for (const Span* span : {&t.subject, &t.predicate, &t.object})
      if (!span_in_sentence(*span, record.sentence))
        throw FormatError("gold span out of range in sentence '" +
                          record.sentence.id + "'");
    for (const Span& a : t.args)
      if (!span_in_sentence(a, record.sentence))
        throw FormatError("gold argument span out of range in sentence '" +
                          record.sentence.id + "'");
    const std::array<const Span*, 3> core{&t.subject, &t.predicate, &t.object};
    for (std::size_t i = 0; i < core.size(); ++i)
      for (std::size_t k = i + 1; k < core.size(); ++k)
        if (core[i]->overlaps(*core[k]))
          throw FormatError("gold core spans overlap in sentence '" +
                            record.sentence.id + "'");
  }
}

std::vector<Sentence> read_sentences(const std::string& path, std::size_t max_len) {
  auto in = open_input(path);
  std::vector<Sentence> out;
  for_each_jsonl_line(in, [&](std::size_t, const json& j) {
    Sentence s = sentence_from_json(j);
    validate_sentence(s, max_len);
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<SentenceTriple> read_triples(const std::string& path) {
  auto in = open_input(path);
  std::vector<SentenceTriple> out;
  for_each_jsonl_line(in, [&](std::size_t, const json& j) {
    out.push_back(triple_from_json(j));
  });
  return out;
}

std::vector<GoldRecord> read_gold_records(const std::string& path,
                                          std::size_t max_len) {
  auto in = open_input(path);
  std::vector<GoldRecord> out;
  for_each_jsonl_line(in, [&](std::size_t, const json& j) {
    GoldRecord record = gold_record_from_json(j);
    validate_sentence(record.sentence, max_len);
    validate_gold_record(record);
    out.push_back(std::move(record));
  });
  return out;
}

std::vector<TrainingInstance> read_instances(const std::string& path) {
  auto in = open_input(path);
  std::vector<TrainingInstance> out;
  for_each_jsonl_line(in, [&](std::size_t, const json& j) {
    out.push_back(instance_from_json(j));
  });
  return out;
}

std::vector<Prior> read_priors(const std::string& path) {
  auto in = open_input(path);
  std::vector<Prior> out;
  for_each_jsonl_line(in, [&](std::size_t, const json& j) {
    out.push_back(prior_from_json(j));
  });
  return out;
}

void write_sentences(const std::string& path, const std::vector<Sentence>& sentences) {
  auto out = open_output(path);
  for (const Sentence& s : sentences) out << sentence_to_json(s).dump() << '\n';
}

void write_triples(const std::string& path, const std::vector<SentenceTriple>& triples) {
  auto out = open_output(path);
  for (const SentenceTriple& t : triples)
    out << triple_to_json(t.sentence_id, t.triple).dump() << '\n';
}

void write_gold_records(const std::string& path, const std::vector<GoldRecord>& records) {
  auto out = open_output(path);
  for (const GoldRecord& r : records) out << gold_record_to_json(r).dump() << '\n';
}

void write_instances(const std::string& path, const std::vector<TrainingInstance>& instances) {
  auto out = open_output(path);
  for (const TrainingInstance& i : instances) out << instance_to_json(i).dump() << '\n';
}

}  // namespace milie
