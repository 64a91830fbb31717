/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include <CLI11.hpp>

#include <iostream>

#include "synth_corpus.hpp"

int main(int argc, char** argv) {
  CLI::App app{"synthetic benchmark corpus with a gold similarity probe"};
  ngramvec::synth::SynthOptions opts;
  std::string corpus = "synth_corpus.txt";
  std::string pairs = "synth_pairs.tsv";
  app.add_option("--tokens", opts.tokens, "approximate corpus size in tokens");
  app.add_option("--vocab", opts.vocab, "vocabulary size");
  app.add_option("--topics", opts.topics, "latent topic count");
  app.add_option("--pairs", opts.pair_count, "gold probe pair count");
  app.add_option("--seed", opts.seed, "random seed");
  app.add_option("--corpus-out", corpus, "corpus output path");
  app.add_option("--pairs-out", pairs, "similarity probe output path");
  CLI11_PARSE(app, argc, argv);

  try {
    ngramvec::synth::generate_corpus(opts, corpus, pairs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
