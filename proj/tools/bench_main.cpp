// Benchmarks the parallel corpus runner against the serial reference and
// verifies that both produce identical triples.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "milie/jsonl.hpp"
#include "milie/runner.hpp"

namespace {

using namespace milie;

double seconds_for(const std::function<std::vector<SentenceResult>()>& run,
                   int repeat, std::vector<SentenceResult>& out) {
  double best = 1e300;
  for (int i = 0; i < repeat; ++i) {
    auto start = std::chrono::steady_clock::now();
    out = run();
    std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    best = std::min(best, elapsed.count());
  }
  return best;
}

bool same_results(const std::vector<SentenceResult>& a,
                  const std::vector<SentenceResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].triples.size() != b[i].triples.size()) return false;
    for (std::size_t j = 0; j < a[i].triples.size(); ++j) {
      const SentenceTriple& x = a[i].triples[j];
      const SentenceTriple& y = b[i].triples[j];
      if (x.sentence_id != y.sentence_id) return false;
      if (triple_to_json(x.sentence_id, x.triple) !=
          triple_to_json(y.sentence_id, y.triple))
        return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel extraction benchmark"};
  std::string sentences_path;
  std::string model_path;
  int jobs = 0;
  int repeat = 3;
  app.add_option("sentences", sentences_path, "Sentence JSONL")->required();
  app.add_option("-m,--model", model_path, "Model file")->required();
  app.add_option("--jobs", jobs, "Worker threads (0 = runtime default)");
  app.add_option("--repeat", repeat, "Timing repetitions (best of N)")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    auto sentences = read_sentences(sentences_path);
    auto model = load_model_file(model_path);
    PipelineOptions options;

    std::vector<SentenceResult> serial, parallel;
    double serial_s = seconds_for(
        [&] { return run_corpus(sentences, *model, options); }, repeat, serial);
    double parallel_s = seconds_for(
        [&] { return run_corpus_parallel(sentences, *model, options, jobs); },
        repeat, parallel);

    if (!same_results(serial, parallel)) {
      std::cerr << "error: serial and parallel runners disagree\n";
      return 1;
    }
    std::printf("sentences: %zu\n", sentences.size());
    std::printf("serial:    %.4f s\n", serial_s);
    std::printf("parallel:  %.4f s\n", parallel_s);
    std::printf("speedup:   %.2fx\n", serial_s / parallel_s);
    return 0;
  } catch (const milie::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
