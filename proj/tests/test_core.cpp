#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "milie/core.hpp"
#include "milie/random.hpp"
#include "synthetic.hpp"

using namespace milie;

namespace {

const Sentence& taj() {
  static const Sentence s = synthetic::taj_record().sentence;
  return s;
}

const Triple& taj_triple() {
  static const Triple t = synthetic::taj_record().triples.at(0);
  return t;
}

BioSequence labels_from(const std::string& chars) {
  BioSequence out;
  for (char c : chars) out.push_back(bio_from_char(c));
  return out;
}

}  // namespace

TEST_CASE("marker vocabulary") {
  CHECK(kind_code(ElementKind::Subject) == 'S');
  CHECK(kind_code(ElementKind::Predicate) == 'P');
  CHECK(kind_code(ElementKind::Object) == 'O');
  CHECK(kind_code(ElementKind::Argument) == 'A');
  for (char c : {'S', 'P', 'O', 'A'}) CHECK(kind_code(kind_from_code(c)) == c);
  CHECK_THROWS_AS(kind_from_code('X'), FormatError);

  CHECK(marker_symbol(ElementKind::Subject) == "<S>");
  CHECK(marker_symbol(ElementKind::Predicate) == "<P>");
  CHECK(marker_symbol(ElementKind::Object) == "<O>");
  CHECK(is_marker_symbol("<O>"));
  CHECK_FALSE(is_marker_symbol("<A>"));
  CHECK_FALSE(is_marker_symbol("O"));
  CHECK(marker_kind("<P>") == ElementKind::Predicate);
  CHECK_FALSE(marker_kind("<p>").has_value());

  CHECK(kind_name(ElementKind::Subject) == "subject");
  CHECK(kind_name(ElementKind::Argument) == "argument");
}

TEST_CASE("span basics") {
  Span s{2, 5};
  CHECK(s.size() == 3);
  CHECK(s.contains(2));
  CHECK(s.contains(4));
  CHECK_FALSE(s.contains(5));
  CHECK(s.overlaps({4, 6}));
  CHECK_FALSE(s.overlaps({5, 7}));
  CHECK(Span{2, 4} < Span{2, 5});
  CHECK(span_text(taj(), {1, 3}) == "Taj Mahal");
  CHECK(span_tokens(taj(), {4, 6}) == std::vector<std::string>{"built", "by"});
}

TEST_CASE("mark renders marker pairs around conditioned elements") {
  PartialTriple cond;
  cond.subject = Span{1, 3};
  auto marked = mark(taj(), cond);

  CHECK(rendered_text(marked) ==
        "The <S> Taj Mahal <S> was built by Shah Jahan in 1643");
  CHECK(marked.size() == taj().tokens.size() + 2);
  REQUIRE(marked.markers.count(ElementKind::Subject) == 1);
  CHECK(marked.markers.at(ElementKind::Subject) == Span{1, 3});

  // Marker tokens carry the reserved tag in both annotation fields.
  int markers = 0;
  for (std::size_t r = 0; r < marked.size(); ++r) {
    if (!marked.is_marker(r)) continue;
    ++markers;
    CHECK(marked.rendered[r].dep == kMarkerTag);
    CHECK(marked.rendered[r].pos == kMarkerTag);
    CHECK(is_marker_symbol(marked.rendered[r].text));
  }
  CHECK(markers == 2);

  // Index maps agree in both directions.
  for (std::size_t b = 0; b < taj().tokens.size(); ++b) {
    std::size_t r = marked.base_to_rendered[b];
    CHECK(marked.rendered[r].text == taj().tokens[b].text);
    CHECK(marked.rendered_to_base[r] == std::ptrdiff_t(b));
  }
}

TEST_CASE("mark ignores argument spans") {
  PartialTriple cond;
  cond.predicate = Span{4, 6};
  cond.args = {{8, 10}};
  auto marked = mark(taj(), cond);
  CHECK(rendered_text(marked) ==
        "The Taj Mahal was <P> built by <P> Shah Jahan in 1643");
}

TEST_CASE("adjacent elements render close-before-open") {
  PartialTriple cond;
  cond.predicate = Span{4, 6};
  cond.object = Span{6, 8};
  auto marked = mark(taj(), cond);
  CHECK(rendered_text(marked) ==
        "The Taj Mahal was <P> built by <P> <O> Shah Jahan <O> in 1643");

  cond.subject = Span{1, 3};
  auto full = mark(taj(), cond);
  CHECK(rendered_text(full) ==
        "The <S> Taj Mahal <S> was <P> built by <P> <O> Shah Jahan <O> in 1643");
}

TEST_CASE("mark validates input") {
  PartialTriple overlapping;
  overlapping.subject = Span{1, 5};
  overlapping.predicate = Span{4, 6};
  CHECK_THROWS_AS(mark(taj(), overlapping), OverlapError);

  PartialTriple out_of_range;
  out_of_range.object = Span{8, 11};
  CHECK_THROWS_AS(mark(taj(), out_of_range), DataError);

  PartialTriple degenerate;
  degenerate.subject = Span{3, 3};
  CHECK_THROWS_AS(mark(taj(), degenerate), DataError);

  PartialTriple one;
  one.subject = Span{1, 3};
  CHECK_THROWS_AS(mark(taj(), one, 11), LengthError);   // 10 + 2 > 11
  CHECK_NOTHROW(mark(taj(), one, 12));
}

TEST_CASE("strip inverts mark") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Sentence s = synthetic::random_sentence(rng);
    PartialTriple cond = synthetic::random_partial(rng, s);
    auto marked = mark(s, cond, 1000);
    Sentence back = strip(marked);
    REQUIRE(back.tokens.size() == s.tokens.size());
    CHECK(back.id == s.id);
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      CHECK(back.tokens[t].text == s.tokens[t].text);
      CHECK(back.tokens[t].dep == s.tokens[t].dep);
      CHECK(back.tokens[t].pos == s.tokens[t].pos);
      CHECK(back.tokens[t].head == s.tokens[t].head);
      CHECK(back.tokens[t].index == t);
    }
  }
}

TEST_CASE("coordinate maps round-trip spans") {
  PartialTriple cond;
  cond.subject = Span{1, 3};
  cond.object = Span{6, 8};
  auto marked = mark(taj(), cond);

  for (std::size_t start = 0; start < 10; ++start) {
    for (std::size_t end = start + 1; end <= 10; ++end) {
      Span base{start, end};
      CHECK(marked.to_base(marked.to_rendered(base)) == base);
    }
  }

  // Endpoints that land on markers cannot be mapped back.
  std::size_t open = marked.base_to_rendered[1] - 1;
  CHECK(marked.is_marker(open));
  CHECK_THROWS_AS(marked.to_base(Span{open, open + 1}), AlignmentError);
}

TEST_CASE("marked_from_rendered rebuilds the wire form") {
  PartialTriple cond;
  cond.subject = Span{1, 3};
  cond.predicate = Span{4, 6};
  auto marked = mark(taj(), cond);

  std::vector<std::string> texts, tags;
  for (const auto& tok : marked.rendered) {
    texts.push_back(tok.text);
    tags.push_back(tok.dep);
  }
  auto rebuilt = marked_from_rendered("taj-1", texts, tags);
  CHECK(rendered_text(rebuilt) == rendered_text(marked));
  CHECK(rebuilt.markers == marked.markers);
  CHECK(rebuilt.base_to_rendered == marked.base_to_rendered);
  CHECK(strip(rebuilt).tokens.size() == taj().tokens.size());

  SUBCASE("unbalanced markers rejected") {
    texts.erase(texts.begin() + 1);  // drop the opening <S>
    tags.erase(tags.begin() + 1);
    CHECK_THROWS_AS(marked_from_rendered("taj-1", texts, tags), FormatError);
  }
  SUBCASE("stray marker symbol rejected") {
    texts[2] = "<O>";  // one lone <O> never closes
    CHECK_THROWS_AS(marked_from_rendered("taj-1", texts, tags), FormatError);
  }
}

TEST_CASE("malformed marker streams rejected") {
  auto rebuild = [](std::vector<std::string> texts) {
    std::vector<std::string> tags;
    for (const auto& t : texts)
      tags.push_back(is_marker_symbol(t) ? std::string(kMarkerTag) : "dep");
    return marked_from_rendered("x", texts, tags);
  };
  // Interleaved pairs imply overlapping element spans.
  CHECK_THROWS_AS(rebuild({"<S>", "a", "<P>", "b", "<S>", "c", "<P>"}),
                  OverlapError);
  // Empty pair.
  CHECK_THROWS_AS(rebuild({"<S>", "<S>", "a"}), FormatError);
  // More than one pair per kind.
  CHECK_THROWS_AS(rebuild({"<S>", "a", "<S>", "b", "<S>", "c", "<S>"}),
                  FormatError);
  // Open-before-close at a shared boundary is not the canonical rendering.
  CHECK_THROWS_AS(rebuild({"a", "<O>", "b", "<P>", "<O>", "c", "<P>"}),
                  FormatError);
  // The canonical close-before-open form is accepted.
  CHECK_NOTHROW(rebuild({"a", "<O>", "b", "<O>", "<P>", "c", "<P>"}));
}

TEST_CASE("encode_bio basics") {
  CHECK(bio_string(encode_bio({{1, 3}}, 5)) == "OBIOO");
  CHECK(bio_string(encode_bio({{3, 4}, {0, 2}}, 5)) == "BIOBO");
  CHECK(bio_string(encode_bio({}, 3)) == "OOO");
  CHECK_THROWS_AS(encode_bio({{0, 2}, {1, 3}}, 5), OverlapError);
  CHECK_THROWS_AS(encode_bio({{3, 6}}, 5), LengthError);
  CHECK_THROWS_AS(encode_bio({{2, 2}}, 5), LengthError);
}

TEST_CASE("decode_bio over an unmarked sentence") {
  auto marked = mark(taj(), {});
  CHECK(decode_bio(labels_from("OOOOBIOOOO"), marked) ==
        std::vector<Span>{{4, 6}});
  CHECK(decode_bio(labels_from("OOOOOOOOOO"), marked).empty());
  CHECK(decode_bio(labels_from("BIOOBIOBIO"), marked) ==
        std::vector<Span>{{0, 2}, {4, 6}, {7, 9}});

  // Stray I opens a span; I at position zero too.
  CHECK(decode_bio(labels_from("OIIOOOOOOO"), marked) ==
        std::vector<Span>{{1, 3}});
  CHECK(decode_bio(labels_from("IIOOOOOOOO"), marked) ==
        std::vector<Span>{{0, 2}});
  // B after I splits; adjacent B's split.
  CHECK(decode_bio(labels_from("BIBOOOOOOO"), marked) ==
        std::vector<Span>{{0, 2}, {2, 3}});
  CHECK(decode_bio(labels_from("BBOOOOOOOO"), marked) ==
        std::vector<Span>{{0, 1}, {1, 2}});

  BioSequence wrong_len = labels_from("OOO");
  CHECK_THROWS_AS(decode_bio(wrong_len, marked), DataError);
}

TEST_CASE("decode_bio maps rendered labels to base spans") {
  PartialTriple cond;
  cond.subject = Span{1, 3};
  auto marked = mark(taj(), cond);  // 12 rendered positions

  // Mark predicate positions in rendered coordinates: built=6 by=7.
  BioSequence labels(marked.size(), BioLabel::O);
  labels[6] = BioLabel::B;
  labels[7] = BioLabel::I;
  CHECK(decode_bio(labels, marked) == std::vector<Span>{{4, 6}});

  // Non-O at a marker position is an alignment violation.
  labels.assign(marked.size(), BioLabel::O);
  labels[1] = BioLabel::B;  // opening <S>
  CHECK_THROWS_AS(decode_bio(labels, marked), AlignmentError);

  // Spans on both sides of a marker stay separate even without a second B.
  labels.assign(marked.size(), BioLabel::O);
  labels[3] = BioLabel::B;   // "Mahal"
  labels[5] = BioLabel::I;   // "was", after closing <S>
  CHECK(decode_bio(labels, marked) == std::vector<Span>{{2, 3}, {3, 4}});
}

TEST_CASE("decode inverts encode for random disjoint spans") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    std::size_t len = 1 + draw_index(rng, 24);
    auto spans = synthetic::random_disjoint_spans(rng, len);
    Sentence s;
    s.id = "x";
    for (std::size_t t = 0; t < len; ++t)
      s.tokens.push_back({t, "w", "dep", "X", -1});
    auto marked = mark(s, {});
    CHECK(decode_bio(encode_bio(spans, len), marked) == spans);
  }
}

TEST_CASE("bio char codec") {
  CHECK(bio_char(BioLabel::B) == 'B');
  CHECK(bio_char(BioLabel::I) == 'I');
  CHECK(bio_char(BioLabel::O) == 'O');
  CHECK(bio_from_char('B') == BioLabel::B);
  CHECK_THROWS_AS(bio_from_char('Q'), FormatError);
}

TEST_CASE("normalize builds a role-sensitive confidence-free key") {
  Triple t = taj_triple();
  NormKey a = normalize(t, taj());
  CHECK(a.sentence_id == taj().id);
  CHECK(a.subject == t.subject);
  CHECK(a.args == t.args);

  Triple louder = t;
  louder.confidence = 0.25;
  CHECK(normalize(louder, taj()) == a);

  Triple swapped = t;
  std::swap(swapped.subject, swapped.object);
  CHECK(normalize(swapped, taj()) != a);

  Triple shuffled = t;
  shuffled.args = {{8, 10}, {0, 1}};
  Triple sorted = t;
  sorted.args = {{0, 1}, {8, 10}};
  CHECK(normalize(shuffled, taj()) == normalize(sorted, taj()));

  Triple bad = t;
  bad.subject = Span{5, 99};
  CHECK_THROWS_AS(normalize(bad, taj()), DataError);
}

TEST_CASE("triple element access") {
  const Triple& t = taj_triple();
  CHECK(t.element(ElementKind::Subject) == Span{1, 3});
  CHECK(t.element(ElementKind::Predicate) == Span{4, 6});
  CHECK(t.element(ElementKind::Object) == Span{6, 8});
  CHECK_THROWS_AS(t.element(ElementKind::Argument), DataError);

  PartialTriple p = t.as_partial();
  CHECK(p.subject == t.subject);
  CHECK(p.predicate == t.predicate);
  CHECK(p.object == t.object);
  CHECK(p.args == t.args);
  CHECK(*p.slot(ElementKind::Object) == t.object);

  PartialTriple empty;
  CHECK(empty.empty());
  CHECK_FALSE(p.empty());
}

TEST_CASE("deterministic rng helpers") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("a") != fnv1a("b"));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));

  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 1 + i % 17;
    CHECK(draw_index(a, n) == draw_index(b, n));
  }
  double u = draw_unit(a);
  CHECK(u >= 0.0);
  CHECK(u < 1.0);

  std::vector<int> v1{1, 2, 3, 4, 5, 6, 7, 8}, v2 = v1;
  std::mt19937_64 r1(9), r2(9);
  shuffle_deterministic(v1, r1);
  shuffle_deterministic(v2, r2);
  CHECK(v1 == v2);
  std::vector<int> sorted = v1;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
}
