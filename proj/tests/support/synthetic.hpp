#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "milie/core.hpp"
#include "milie/eval.hpp"

// Deterministic fixtures and generators shared by the unit and acceptance
// suites.
namespace milie::synthetic {

// "The Taj Mahal was built by Shah Jahan in 1643" with its n-ary extraction.
GoldRecord taj_record();

// "Barrack Obama became US President in the year 2008": an n-ary triple
// whose argument re-extracts against a second gold triple.
Sentence obama_sentence();
Triple obama_nary();           // (Barrack Obama; became; US President; [2008])
GoldRecord obama_record();     // obama_nary plus (BO; became US President in; 2008)

// Uniform random sentence over a small closed vocabulary; ids "r<n>".
Sentence random_sentence(std::mt19937_64& rng, std::size_t min_len = 1,
                         std::size_t max_len = 12);

// Random valid conditioning: a subset of {S, P, O} with pairwise disjoint
// spans inside the sentence.
PartialTriple random_partial(std::mt19937_64& rng, const Sentence& sentence);

// Sorted, pairwise disjoint spans over [0, length).
std::vector<Span> random_disjoint_spans(std::mt19937_64& rng, std::size_t length);

// Templated grammar: six sentence shapes over closed vocabulary pools, each
// with one n-ary gold extraction carrying dependency, part-of-speech, and
// head annotations. Ids are "<id_prefix><n>".
GoldRecord grammar_record(std::mt19937_64& rng, const std::string& id);
std::vector<GoldRecord> grammar_corpus(std::uint64_t seed, std::size_t count,
                                       const std::string& id_prefix);

// One single-variant synset per gold triple (exact surface forms).
std::vector<FactSynset> synsets_from_gold(const std::vector<GoldRecord>& records);

// Synset JSONL writer (inverse of read_fact_synsets): synsets sharing a
// sentence id are grouped onto one line, preserving first-seen order.
void write_fact_synsets(const std::string& path,
                        const std::vector<FactSynset>& synsets);

std::vector<Sentence> sentences_of(const std::vector<GoldRecord>& records);

}  // namespace milie::synthetic
