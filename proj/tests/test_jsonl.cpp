#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "milie/jsonl.hpp"
#include "milie/traindata.hpp"
#include "synthetic.hpp"
#include "temppath.hpp"

using namespace milie;
using synthetic::TempDir;
using synthetic::write_text;

TEST_CASE("sentence json round-trip") {
  Sentence s = synthetic::taj_record().sentence;
  Sentence back = sentence_from_json(sentence_to_json(s));
  REQUIRE(back.tokens.size() == s.tokens.size());
  CHECK(back.id == s.id);
  for (std::size_t t = 0; t < s.tokens.size(); ++t) {
    CHECK(back.tokens[t].index == t);
    CHECK(back.tokens[t].text == s.tokens[t].text);
    CHECK(back.tokens[t].dep == s.tokens[t].dep);
    CHECK(back.tokens[t].pos == s.tokens[t].pos);
    CHECK(back.tokens[t].head == s.tokens[t].head);
  }

  // pos and head are optional on the wire.
  auto j = nlohmann::json::parse(
      R"({"id":"x","tokens":[{"text":"Hi","dep":"root"}]})");
  Sentence bare = sentence_from_json(j);
  CHECK(bare.tokens.at(0).pos.empty());
  CHECK(bare.tokens.at(0).head == -1);

  CHECK_THROWS_AS(sentence_from_json(nlohmann::json::parse(
                      R"({"tokens":[]})")),
                  FormatError);
  CHECK_THROWS_AS(sentence_from_json(nlohmann::json::parse(
                      R"({"id":"x","tokens":[{"text":"Hi"}]})")),
                  FormatError);
}

TEST_CASE("triple json round-trip") {
  Triple t = synthetic::taj_record().triples.at(0);
  t.confidence = 0.5;
  SentenceTriple back = triple_from_json(triple_to_json("taj-1", t));
  CHECK(back.sentence_id == "taj-1");
  CHECK(back.triple.subject == t.subject);
  CHECK(back.triple.predicate == t.predicate);
  CHECK(back.triple.object == t.object);
  CHECK(back.triple.args == t.args);
  CHECK(back.triple.confidence == 0.5);

  auto j = triple_to_json("taj-1", t);
  j.erase("confidence");
  j.erase("args");
  SentenceTriple defaults = triple_from_json(j);
  CHECK(defaults.triple.confidence == 1.0);
  CHECK(defaults.triple.args.empty());

  j["confidence"] = 1.5;
  CHECK_THROWS_AS(triple_from_json(j), FormatError);
  j["confidence"] = 0.5;
  j["subject"] = nlohmann::json::array({3, 3});
  CHECK_THROWS_AS(triple_from_json(j), FormatError);
  j["subject"] = nlohmann::json::array({4, 2});
  CHECK_THROWS_AS(triple_from_json(j), FormatError);
}

TEST_CASE("gold record json round-trip") {
  GoldRecord r = synthetic::obama_record();
  GoldRecord back = gold_record_from_json(gold_record_to_json(r));
  CHECK(back.sentence.id == r.sentence.id);
  REQUIRE(back.triples.size() == r.triples.size());
  for (std::size_t i = 0; i < r.triples.size(); ++i) {
    CHECK(back.triples[i].subject == r.triples[i].subject);
    CHECK(back.triples[i].predicate == r.triples[i].predicate);
    CHECK(back.triples[i].object == r.triples[i].object);
    CHECK(back.triples[i].args == r.triples[i].args);
  }
  // Nested triples carry no sentence_id and no confidence.
  auto j = gold_record_to_json(r);
  CHECK_FALSE(j["triples"][0].contains("sentence_id"));
  CHECK_FALSE(j["triples"][0].contains("confidence"));
}

TEST_CASE("training instance json round-trip") {
  GoldRecord r = synthetic::taj_record();
  SamplerDiagnostics diag;
  auto instances = generate_for_order(
      r, 0,
      {ElementKind::Predicate, ElementKind::Subject, ElementKind::Object},
      &diag);
  REQUIRE(instances.size() == 4);
  for (const TrainingInstance& inst : instances) {
    TrainingInstance back = instance_from_json(instance_to_json(inst));
    CHECK(rendered_text(back.marked) == rendered_text(inst.marked));
    CHECK(back.target_kind == inst.target_kind);
    CHECK(back.target_labels == inst.target_labels);
    CHECK(back.is_negative == inst.is_negative);
  }

  auto j = instance_to_json(instances.at(0));
  SUBCASE("label length must match") {
    j["labels"].erase(0);
    CHECK_THROWS_AS(instance_from_json(j), FormatError);
  }
  SUBCASE("negatives must be all-O") {
    j["negative"] = true;
    CHECK_THROWS_AS(instance_from_json(j), FormatError);
  }
  SUBCASE("unknown kind code") {
    j["target_kind"] = "Q";
    CHECK_THROWS_AS(instance_from_json(j), FormatError);
  }
}

TEST_CASE("prior parsing") {
  auto j = nlohmann::json::parse(
      R"({"sentence_id":"s1","subject":[0,2],"predicate":"built by"})");
  Prior p = prior_from_json(j);
  CHECK(p.sentence_id == "s1");
  REQUIRE(p.subject.has_value());
  CHECK(std::get<Span>(*p.subject) == Span{0, 2});
  REQUIRE(p.predicate.has_value());
  CHECK(std::get<std::vector<std::string>>(*p.predicate) ==
        std::vector<std::string>{"built", "by"});
  CHECK_FALSE(p.object.has_value());

  CHECK_THROWS_AS(
      prior_from_json(nlohmann::json::parse(R"({"sentence_id":"s","object":""})")),
      FormatError);
  CHECK_THROWS_AS(
      prior_from_json(nlohmann::json::parse(R"({"sentence_id":"s","object":7})")),
      FormatError);
}

TEST_CASE("jsonl reader reports 1-based line numbers") {
  std::istringstream in(
      "{\"id\":\"a\",\"tokens\":[{\"text\":\"x\",\"dep\":\"d\"}]}\n"
      "this is not json\n");
  std::vector<std::size_t> seen;
  CHECK_THROWS_WITH_AS(
      for_each_jsonl_line(in,
                          [&](std::size_t n, const nlohmann::json&) {
                            seen.push_back(n);
                          }),
      doctest::Contains("line 2"), FormatError);
  CHECK(seen == std::vector<std::size_t>{1});

  // Blank lines are skipped, not counted as errors.
  std::istringstream blanks("\n{\"k\":1}\n\n{\"k\":2}\n");
  seen.clear();
  for_each_jsonl_line(blanks, [&](std::size_t n, const nlohmann::json&) {
    seen.push_back(n);
  });
  CHECK(seen == std::vector<std::size_t>{2, 4});
}

TEST_CASE("file round-trips") {
  TempDir tmp;
  GoldRecord taj = synthetic::taj_record();
  GoldRecord obama = synthetic::obama_record();

  write_gold_records(tmp.path("gold.jsonl"), {taj, obama});
  auto records = read_gold_records(tmp.path("gold.jsonl"));
  REQUIRE(records.size() == 2);
  CHECK(records[0].sentence.id == taj.sentence.id);
  CHECK(records[1].triples.size() == 2);

  write_sentences(tmp.path("sents.jsonl"), {taj.sentence, obama.sentence});
  auto sentences = read_sentences(tmp.path("sents.jsonl"));
  REQUIRE(sentences.size() == 2);
  CHECK(sentences[1].tokens.size() == obama.sentence.tokens.size());

  std::vector<SentenceTriple> preds;
  preds.push_back({taj.sentence.id, taj.triples[0]});
  write_triples(tmp.path("preds.jsonl"), preds);
  auto triples = read_triples(tmp.path("preds.jsonl"));
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].triple.predicate == Span{4, 6});

  SamplerDiagnostics diag;
  SamplerConfig config;
  auto instances = generate(taj, config, &diag);
  write_instances(tmp.path("inst.jsonl"), instances);
  auto back = read_instances(tmp.path("inst.jsonl"));
  REQUIRE(back.size() == instances.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    CHECK(rendered_text(back[i].marked) == rendered_text(instances[i].marked));

  write_text(tmp.path("priors.jsonl"),
             R"({"sentence_id":"taj-1","object":[6,8]})" "\n");
  auto priors = read_priors(tmp.path("priors.jsonl"));
  REQUIRE(priors.size() == 1);
  CHECK(priors[0].sentence_id == "taj-1");

  CHECK_THROWS_AS(read_sentences(tmp.path("missing.jsonl")), FormatError);
}

TEST_CASE("readers validate domain invariants") {
  TempDir tmp;

  write_text(tmp.path("empty.jsonl"), R"({"id":"a","tokens":[]})" "\n");
  CHECK_THROWS_AS(read_sentences(tmp.path("empty.jsonl")), FormatError);

  write_text(tmp.path("marker.jsonl"),
             R"({"id":"a","tokens":[{"text":"<S>","dep":"d"}]})" "\n");
  CHECK_THROWS_AS(read_sentences(tmp.path("marker.jsonl")), FormatError);

  write_text(tmp.path("long.jsonl"),
             R"({"id":"a","tokens":[{"text":"x","dep":"d"},{"text":"y","dep":"d"}]})"
             "\n");
  CHECK_THROWS_AS(read_sentences(tmp.path("long.jsonl"), 1), FormatError);
  CHECK_NOTHROW(read_sentences(tmp.path("long.jsonl"), 2));

  // Gold spans must be in range and pairwise disjoint.
  write_text(tmp.path("range.jsonl"),
             R"({"sentence":{"id":"a","tokens":[{"text":"x","dep":"d"}]},)"
             R"("triples":[{"subject":[0,1],"predicate":[1,2],"object":[2,3]}]})"
             "\n");
  CHECK_THROWS_AS(read_gold_records(tmp.path("range.jsonl")), FormatError);

  write_text(
      tmp.path("overlap.jsonl"),
      R"({"sentence":{"id":"a","tokens":[{"text":"x","dep":"d"},{"text":"y","dep":"d"},{"text":"z","dep":"d"}]},)"
      R"("triples":[{"subject":[0,2],"predicate":[1,3],"object":[2,3]}]})"
      "\n");
  CHECK_THROWS_AS(read_gold_records(tmp.path("overlap.jsonl")), FormatError);

  // Errors from the per-line validators carry the line number too.
  write_text(tmp.path("line2.jsonl"),
             R"({"id":"ok","tokens":[{"text":"x","dep":"d"}]})" "\n"
             R"({"id":"bad","tokens":[]})" "\n");
  CHECK_THROWS_WITH_AS(read_sentences(tmp.path("line2.jsonl")),
                       doctest::Contains("line 2"), FormatError);
}
