/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include "synth_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace ngramvec::synth {

namespace {

// Walker alias table for O(1) draws from a fixed distribution.
class Alias {
 public:
  explicit Alias(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    double total = 0.0;
    for (double w : weights) total += w;
    threshold_.assign(n, 1.0);
    alias_.resize(n);
    std::vector<double> scaled(n);
    std::vector<std::size_t> small;
    std::vector<std::size_t> large;
    for (std::size_t i = 0; i < n; ++i) {
      alias_[i] = i;
      scaled[i] = weights[i] / total * static_cast<double>(n);
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back();
      const std::size_t l = large.back();
      small.pop_back();
      large.pop_back();
      threshold_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
  }

  template <typename Rng>
  std::size_t operator()(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> cell(0, alias_.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t i = cell(rng);
    return unit(rng) < threshold_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> threshold_;
  std::vector<std::size_t> alias_;
};

std::vector<double> normalized(std::vector<double> v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

void generate_corpus(const SynthOptions& opts, const std::string& corpus_path,
                     const std::string& pairs_path) {
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t vocab = opts.vocab;
  const int topics = opts.topics;
  const int dim = opts.latent_dim;

  // Unique random surfaces; one fifth are suffixed variants of earlier stems
  // so char n-grams have real morphology to share.
  const std::size_t stems = vocab - vocab / 5;
  std::vector<std::string> surface(vocab);
  std::vector<std::size_t> stem_of(vocab);
  std::unordered_set<std::string> used;
  std::uniform_int_distribution<int> letter(0, 25);
  std::uniform_int_distribution<int> stem_len(4, 8);
  for (std::size_t w = 0; w < stems; ++w) {
    std::string s;
    do {
      s.clear();
      const int len = stem_len(rng);
      for (int i = 0; i < len; ++i) {
        s.push_back(static_cast<char>('a' + letter(rng)));
      }
    } while (!used.insert(s).second);
    surface[w] = std::move(s);
    stem_of[w] = w;
  }
  const char* suffixes[] = {"s", "ed", "ing", "er", "ly"};
  std::uniform_int_distribution<std::size_t> pick_stem(0, stems - 1);
  std::uniform_int_distribution<std::size_t> pick_suffix(0, 4);
  for (std::size_t w = stems; w < vocab; ++w) {
    std::string s;
    std::size_t base;
    do {
      base = pick_stem(rng);
      s = surface[base] + suffixes[pick_suffix(rng)];
    } while (!used.insert(s).second);
    surface[w] = std::move(s);
    stem_of[w] = base;
  }

  // Zipfian frequencies over a random rank permutation.
  std::vector<std::size_t> rank(vocab);
  for (std::size_t i = 0; i < vocab; ++i) rank[i] = i;
  std::shuffle(rank.begin(), rank.end(), rng);
  std::vector<double> freq(vocab);
  for (std::size_t w = 0; w < vocab; ++w) {
    freq[w] = 1.0 / std::pow(static_cast<double>(rank[w]) + 2.0,
                             opts.zipf_exponent);
  }

  // Latent topic centers and per-word latents; variants stay near their stem.
  std::vector<std::vector<double>> center(topics, std::vector<double>(dim));
  for (auto& c : center) {
    for (double& x : c) x = gauss(rng);
    c = normalized(std::move(c));
  }
  std::uniform_int_distribution<int> pick_topic(0, topics - 1);
  std::vector<int> topic_of(vocab);
  std::vector<std::vector<double>> latent(vocab, std::vector<double>(dim));
  for (std::size_t w = 0; w < stems; ++w) {
    topic_of[w] = pick_topic(rng);
    for (int i = 0; i < dim; ++i) {
      latent[w][i] = center[topic_of[w]][i] + 0.45 * gauss(rng);
    }
    latent[w] = normalized(std::move(latent[w]));
  }
  for (std::size_t w = stems; w < vocab; ++w) {
    topic_of[w] = topic_of[stem_of[w]];
    for (int i = 0; i < dim; ++i) {
      latent[w][i] = latent[stem_of[w]][i] + 0.15 * gauss(rng);
    }
    latent[w] = normalized(std::move(latent[w]));
  }

  // Per-topic sampling tables.
  std::vector<Alias> topic_table;
  topic_table.reserve(topics);
  std::vector<double> weights(vocab);
  for (int k = 0; k < topics; ++k) {
    for (std::size_t w = 0; w < vocab; ++w) {
      weights[w] =
          freq[w] * std::exp(opts.topic_sharpness * dot(latent[w], center[k]));
    }
    topic_table.emplace_back(weights);
  }

  // Topic-bound collocations: adjacent pairs whose joint occurrence carries
  // the topic signal as a unit.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> collocations(
      topics);
  std::uniform_int_distribution<std::size_t> pick_word(0, vocab - 1);
  for (int k = 0; k < topics; ++k) {
    for (int c = 0; c < 12; ++c) {
      std::size_t a = topic_table[k](rng);
      std::size_t b = topic_table[k](rng);
      if (a != b) {
        collocations[k].emplace_back(a, b);
      }
    }
  }

  std::ofstream corpus(corpus_path);
  if (!corpus) {
    throw std::runtime_error("cannot write corpus: " + corpus_path);
  }
  std::poisson_distribution<int> extra_len(10);
  std::uint64_t written = 0;
  std::string line;
  while (written < opts.tokens) {
    const int k = pick_topic(rng);
    const int len = 8 + extra_len(rng);
    line.clear();
    int produced = 0;
    while (produced < len) {
      if (!collocations[k].empty() && unit(rng) < opts.collocation_rate / len) {
        const auto& [a, b] = collocations[k][std::uniform_int_distribution<
            std::size_t>(0, collocations[k].size() - 1)(rng)];
        if (!line.empty()) line.push_back(' ');
        line.append(surface[a]);
        line.push_back(' ');
        line.append(surface[b]);
        produced += 2;
      } else {
        if (!line.empty()) line.push_back(' ');
        line.append(surface[topic_table[k](rng)]);
        ++produced;
      }
    }
    corpus << line << '\n';
    written += produced;
  }
  corpus.close();
  if (!corpus) {
    throw std::runtime_error("write error on corpus: " + corpus_path);
  }

  // Gold probe: latent cosine mapped to [0, 10], over words frequent enough
  // to be reliably trained. Mix of same-topic, cross-topic and same-stem
  // pairs, so ranks span the full similarity range.
  std::vector<std::size_t> frequent;
  for (std::size_t w = 0; w < vocab; ++w) {
    if (rank[w] < vocab / 2) {
      frequent.push_back(w);
    }
  }
  std::vector<std::vector<std::size_t>> by_topic(topics);
  for (std::size_t w : frequent) {
    by_topic[topic_of[w]].push_back(w);
  }
  std::ofstream pairs(pairs_path);
  if (!pairs) {
    throw std::runtime_error("cannot write pairs: " + pairs_path);
  }
  pairs << "# synthetic similarity probe: gold = 5*(1+cos(latent))\n";
  std::uniform_int_distribution<std::size_t> pick_frequent(
      0, frequent.size() - 1);
  std::unordered_set<std::uint64_t> seen;
  std::size_t emitted = 0;
  while (emitted < opts.pair_count) {
    std::size_t a = frequent[pick_frequent(rng)];
    std::size_t b;
    const double mode = unit(rng);
    if (mode < 0.45) {
      const auto& pool = by_topic[topic_of[a]];
      if (pool.size() < 2) continue;
      b = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(
          rng)];
    } else {
      b = frequent[pick_frequent(rng)];
    }
    if (a == b) continue;
    const std::uint64_t key = static_cast<std::uint64_t>(std::min(a, b)) << 32 |
                              static_cast<std::uint64_t>(std::max(a, b));
    if (!seen.insert(key).second) continue;
    const double gold = 5.0 * (1.0 + dot(latent[a], latent[b]));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", gold);
    pairs << surface[a] << '\t' << surface[b] << '\t' << buf << '\n';
    ++emitted;
  }
}

}  // namespace ngramvec::synth
