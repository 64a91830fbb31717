/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <cstdint>
#include <string>

namespace ngramvec::synth {

/// Knobs for the synthetic benchmark corpus: Zipfian word frequencies, latent
/// topic vectors driving co-occurrence, morphological families sharing
/// stems, and topic-bound collocations that only bigram features can capture
/// as units.
struct SynthOptions {
  std::uint64_t tokens = 20000000;
  std::size_t vocab = 30000;
  int topics = 120;
  int latent_dim = 12;
  double zipf_exponent = 1.05;
  double topic_sharpness = 4.0;  // beta in P_k(w) ~ freq(w)*exp(beta*<z_w,c_k>)
  double collocation_rate = 0.3;
  std::size_t pair_count = 1500;
  std::uint64_t seed = 42;
};

/// Writes a one-sentence-per-line corpus to `corpus_path` and a gold
/// similarity probe (`word1<TAB>word2<TAB>score` with scores in [0,10],
/// derived from latent cosines) to `pairs_path`.
void generate_corpus(const SynthOptions& opts, const std::string& corpus_path,
                     const std::string& pairs_path);

}  // namespace ngramvec::synth
