#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace milie {

// Maximum rendered sentence length (tokens plus inserted markers).
// 100-token corpus cap plus a 20-token slack for markers.
inline constexpr std::size_t kDefaultMaxLen = 120;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OverlapError : Error { using Error::Error; };
struct LengthError : Error { using Error::Error; };
struct AlignmentError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct DataError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ModelError : Error { using Error::Error; };
struct MixedSentenceError : Error { using Error::Error; };
struct MissingTagError : Error { using Error::Error; };

struct Token {
  std::size_t index = 0;
  std::string text;
  std::string dep;
  std::string pos;  // empty when the corpus carries no part-of-speech layer
  int head = -1;    // parent token index, -1 when unknown
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
};

// Contiguous token range, half-open [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(std::size_t i) const { return i >= start && i < end; }
  bool overlaps(const Span& o) const { return start < o.end && o.start < end; }

  friend auto operator<=>(const Span&, const Span&) = default;
};

enum class ElementKind : std::uint8_t { Subject, Predicate, Object, Argument };

inline constexpr std::array<ElementKind, 3> kCoreKinds = {
    ElementKind::Subject, ElementKind::Predicate, ElementKind::Object};

char kind_code(ElementKind kind);                // 'S', 'P', 'O', 'A'
ElementKind kind_from_code(char code);           // throws FormatError
std::string_view kind_name(ElementKind kind);    // "subject", ...

// Reserved conditioning-marker vocabulary. Corpora must not contain these
// token strings; loaders reject them so stripping stays unambiguous.
std::string_view marker_symbol(ElementKind kind);  // "<S>", "<P>", "<O>"
bool is_marker_symbol(std::string_view text);
std::optional<ElementKind> marker_kind(std::string_view text);

inline constexpr std::string_view kMarkerTag = "MARKER";

// At most one span per core element; arguments are carried but never marked.
struct PartialTriple {
  std::optional<Span> subject;
  std::optional<Span> predicate;
  std::optional<Span> object;
  std::vector<Span> args;

  const std::optional<Span>& slot(ElementKind kind) const;
  std::optional<Span>& slot(ElementKind kind);
  bool empty() const { return !subject && !predicate && !object && args.empty(); }

  friend bool operator==(const PartialTriple&, const PartialTriple&) = default;
};

struct Triple {
  Span subject;
  Span predicate;
  Span object;
  std::vector<Span> args;
  double confidence = 1.0;

  const Span& element(ElementKind kind) const;  // core kinds only
  PartialTriple as_partial() const;
};

// A sentence with its gold extractions; confidences are ignored.
struct GoldRecord {
  Sentence sentence;
  std::vector<Triple> triples;
};

enum class BioLabel : std::uint8_t { B, I, O };
using BioSequence = std::vector<BioLabel>;

char bio_char(BioLabel label);
BioLabel bio_from_char(char c);
std::string bio_string(const BioSequence& labels);

// A sentence with conditioning markers inserted around already-extracted
// elements, plus the index maps needed to move spans between the base and
// rendered coordinate systems.
struct MarkedSentence {
  Sentence base;
  std::map<ElementKind, Span> markers;           // base-index spans
  std::vector<Token> rendered;                   // markers carry dep=pos=MARKER
  std::vector<std::size_t> base_to_rendered;     // one entry per base token
  std::vector<std::ptrdiff_t> rendered_to_base;  // -1 at marker positions

  std::size_t size() const { return rendered.size(); }
  bool is_marker(std::size_t r) const { return rendered_to_base[r] < 0; }
  Span to_rendered(Span base_span) const;
  Span to_base(Span rendered_span) const;
};

// Inserts a balanced marker pair immediately around each conditioned core
// element. Throws OverlapError when conditioned spans overlap, LengthError
// when the rendered sequence would exceed max_len.
MarkedSentence mark(const Sentence& sentence, const PartialTriple& conditioned,
                    std::size_t max_len = kDefaultMaxLen);

// Drops marker tokens and re-indexes; strip(mark(s, c)) == s.
Sentence strip(const MarkedSentence& marked);

// Rebuilds a MarkedSentence from a rendered token/tag stream (the training
// instance wire form). Throws FormatError on unbalanced or nested markers.
MarkedSentence marked_from_rendered(const std::string& id,
                                    const std::vector<std::string>& texts,
                                    const std::vector<std::string>& tags);

// B at each span start, I inside, O elsewhere. Spans may be given in any
// order; throws OverlapError on overlap, LengthError when out of range.
BioSequence encode_bio(const std::vector<Span>& spans, std::size_t length);

// Maximal contiguous spans in base indices, left to right. A stray I (no
// preceding B or I) opens a span. Marker positions must be labeled O;
// anything else is an AlignmentError.
std::vector<Span> decode_bio(const BioSequence& labels, const MarkedSentence& over);

// Canonical identity of an extraction: role-sensitive spans plus the
// sorted argument list, confidence excluded.
struct NormKey {
  std::string sentence_id;
  Span subject;
  Span predicate;
  Span object;
  std::vector<Span> args;  // sorted

  friend auto operator<=>(const NormKey&, const NormKey&) = default;
};

NormKey normalize(const Triple& triple, const Sentence& sentence);

bool span_in_sentence(Span span, const Sentence& sentence);
std::string span_text(const Sentence& sentence, Span span);
std::string rendered_text(const MarkedSentence& marked);
std::vector<std::string> span_tokens(const Sentence& sentence, Span span);

}  // namespace milie
