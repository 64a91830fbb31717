/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ngramvec/errors.hpp"
#include "ngramvec/features.hpp"
#include "ngramvec/vectors.hpp"
#include "ngramvec/vocab.hpp"

namespace ngramvec {

enum class ModelVariant { kCbow, kCbowChar, kSkipgram, kSkipgramChar, kSent2vec };

bool uses_char_ngrams(ModelVariant v);
bool is_skipgram(ModelVariant v);
std::string to_string(ModelVariant v);
ModelVariant variant_from_string(std::string_view name);  // throws ConfigError

/// Full hyperparameter set. defaults_for() reproduces the per-variant
/// published configuration for a given word-n-gram order.
struct TrainingConfig {
  ModelVariant model = ModelVariant::kCbow;
  int dim = 300;
  int window_size = 10;
  int epochs = 5;
  double initial_lr = 0.05;
  double subsampling_t = 1e-4;
  int word_ngram_order = 1;  // 1..3; orders >= 2 add hashed word n-grams
  std::uint32_t word_bucket = 0;
  std::uint32_t char_bucket = 0;
  int min_n = 0;
  int max_n = 0;
  int negatives = 5;
  int dropout_k = 0;
  double halt_fraction = 1.0;
  int checkpoint_count = 20;
  std::uint64_t min_count = 5;
  std::size_t max_vocab = 750000;
  std::uint64_t seed = 1;

  static TrainingConfig defaults_for(ModelVariant v, int word_ngram_order = 1);
  void validate() const;  // throws ConfigError
  IndexLayout layout(std::uint32_t vocab_size) const {
    return IndexLayout{vocab_size, char_bucket, word_bucket};
  }
};

/// Input matrix: unigram rows, then the char-n-gram bucket, then the
/// word-n-gram bucket. Output matrix: one target row per vocabulary word.
/// Scalar-templated so the gradient oracle can run the same code in double.
template <typename Scalar>
struct EmbeddingStoreT {
  using Matrix =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Matrix input;
  Matrix output;

  Eigen::Index dim() const { return input.cols(); }

  // Input rows uniform in (-0.5/dim, 0.5/dim), output rows zero.
  static EmbeddingStoreT init(const IndexLayout& layout, int dim,
                              std::uint64_t seed) {
    EmbeddingStoreT store;
    store.input.resize(layout.rows(), dim);
    store.output = Matrix::Zero(layout.vocab_size, dim);
    std::mt19937_64 rng(seed);
    const double bound = 0.5 / dim;
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index r = 0; r < store.input.rows(); ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        store.input(r, c) = static_cast<Scalar>(dist(rng));
      }
    }
    return store;
  }
};

using EmbeddingStore = EmbeddingStoreT<float>;

/// The rows realizing one context, plus the averaging denominator.
/// denom is counted during assembly; it always equals rows.size().
struct ContextBag {
  std::vector<std::uint32_t> rows;
  std::uint32_t denom = 0;
};

/// Negative-sampling noise: alias table over counts^alpha with exact
/// probabilities and full-vocabulary support.
class NoiseTable {
 public:
  explicit NoiseTable(const Vocabulary& vocab, double alpha = 0.75);

  std::int32_t sample(std::mt19937& rng) const;
  const std::vector<double>& probabilities() const { return prob_; }

 private:
  std::vector<double> prob_;        // normalized sampling distribution
  std::vector<double> threshold_;   // alias acceptance thresholds
  std::vector<std::int32_t> alias_;
};

/// Uniform integer in [1, ws].
int sample_window(int ws, std::mt19937& rng);

/// Per-vocabulary-word char-n-gram rows, precomputed once per training run.
struct CharNgramCache {
  std::vector<std::vector<std::uint32_t>> rows;  // empty when disabled

  static CharNgramCache build(const Vocabulary& vocab,
                              const TrainingConfig& cfg,
                              const IndexLayout& layout);
};

/// Context of Eq.-style averaged rows for a CBOW-family target: unigram rows
/// of subsampled context words within +-sampled_ws of target_pos, their char
/// n-grams for char variants, and word n-grams read off the original sentence
/// restricted to the window's origin span (n-gram dropout applied). Returns
/// nullopt when no context row survives.
std::optional<ContextBag> assemble_context_cbow(
    const SubsampledSentence& sub, std::size_t target_pos, int sampled_ws,
    const TrainingConfig& cfg, const IndexLayout& layout,
    const Vocabulary& vocab, const CharNgramCache& chars, std::mt19937& rng);

/// Whole-sentence context: unigram rows of every kept token except the target
/// occurrence, plus word n-grams over the full original sentence excluding
/// any n-gram covering the target's origin position. No char n-grams.
std::optional<ContextBag> assemble_context_sent2vec(
    const SubsampledSentence& sub, std::size_t target_origin_pos,
    const TrainingConfig& cfg, const IndexLayout& layout,
    const Vocabulary& vocab, std::mt19937& rng);

/// Reusable buffers for the allocation-free assembly variants.
struct AssembleScratch {
  std::vector<std::string_view> surfaces;
  std::vector<std::int32_t> ids;
  std::string key;
};

bool assemble_context_cbow_into(const SubsampledSentence& sub,
                                std::size_t target_pos, int sampled_ws,
                                const TrainingConfig& cfg,
                                const IndexLayout& layout,
                                const Vocabulary& vocab,
                                const CharNgramCache& chars, std::mt19937& rng,
                                ContextBag& bag, AssembleScratch& scratch);

bool assemble_context_sent2vec_into(const SubsampledSentence& sub,
                                    std::size_t target_origin_pos,
                                    const TrainingConfig& cfg,
                                    const IndexLayout& layout,
                                    const Vocabulary& vocab, std::mt19937& rng,
                                    ContextBag& bag, AssembleScratch& scratch);

/// context_vec = mean of the bag's input rows (double accumulation);
/// score = dot(output[target], context_vec).
template <typename Scalar>
std::pair<Eigen::VectorXd, double> forward(const ContextBag& bag,
                                           std::int32_t target_id,
                                           const EmbeddingStoreT<Scalar>& store) {
  Eigen::VectorXd ctx = Eigen::VectorXd::Zero(store.dim());
  for (std::uint32_t r : bag.rows) {
    ctx += store.input.row(r).template cast<double>();
  }
  ctx /= static_cast<double>(bag.denom);
  const double score =
      store.output.row(target_id).template cast<double>().dot(ctx);
  return {std::move(ctx), score};
}

namespace detail {
// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace detail

/// Reusable buffers for the SGD inner loop.
template <typename Scalar>
struct TrainScratch {
  Eigen::VectorXd ctx;
  Eigen::VectorXd ctx_grad;
  Eigen::RowVectorXd row_step;
  std::vector<std::pair<std::int32_t, double>> steps;
  std::vector<std::int32_t> negatives;
};

/// One SGD step of the pairwise binary loss
///   -log sigma(s_target) - sum_j log sigma(-s_neg_j)
/// against fixed negatives. All k+1 scores are taken at the pre-update
/// parameters, then output rows get lr*(label - sigma(s))*ctx and every input
/// row gets (lr/denom) * sum_i (label_i - sigma(s_i)) * u_i. Returns the
/// pre-update loss.
template <typename Scalar>
double train_example_fixed(const ContextBag& bag, std::int32_t target_id,
                           std::span<const std::int32_t> negatives, double lr,
                           EmbeddingStoreT<Scalar>& store,
                           TrainScratch<Scalar>& scratch) {
  const auto dim = store.dim();
  Eigen::VectorXd& ctx = scratch.ctx;
  ctx.setZero(dim);
  for (std::uint32_t r : bag.rows) {
    ctx += store.input.row(r).template cast<double>();
  }
  ctx /= static_cast<double>(bag.denom);

  double loss = 0.0;
  // (id, g) per scored word, g = label - sigma(score) at the initial point.
  auto& steps = scratch.steps;
  steps.clear();

  const double target_score =
      store.output.row(target_id).template cast<double>().dot(ctx);
  loss += detail::softplus(-target_score);
  steps.emplace_back(target_id, 1.0 - detail::sigmoid(target_score));

  for (std::int32_t neg : negatives) {
    const double score =
        store.output.row(neg).template cast<double>().dot(ctx);
    loss += detail::softplus(score);
    steps.emplace_back(neg, -detail::sigmoid(score));
  }

  Eigen::VectorXd& ctx_grad = scratch.ctx_grad;
  ctx_grad.setZero(dim);
  for (const auto& [id, g] : steps) {
    ctx_grad += g * store.output.row(id).template cast<double>();
    store.output.row(id) +=
        ((lr * g) * ctx).template cast<Scalar>().transpose();
  }
  scratch.row_step = (lr / bag.denom) * ctx_grad.transpose();
  for (std::uint32_t r : bag.rows) {
    store.input.row(r) += scratch.row_step.template cast<Scalar>();
  }
  return loss;
}

template <typename Scalar>
double train_example_fixed(const ContextBag& bag, std::int32_t target_id,
                           std::span<const std::int32_t> negatives, double lr,
                           EmbeddingStoreT<Scalar>& store) {
  TrainScratch<Scalar> scratch;
  return train_example_fixed(bag, target_id, negatives, lr, store, scratch);
}

inline constexpr int kNegativeRedrawLimit = 16;

/// Draws k negatives from the noise table, redrawing on a collision with the
/// target (a negative that keeps colliding after kNegativeRedrawLimit tries
/// is skipped), then applies train_example_fixed.
template <typename Scalar>
double train_example(const ContextBag& bag, std::int32_t target_id,
                     const NoiseTable& noise, int k, double lr,
                     EmbeddingStoreT<Scalar>& store, std::mt19937& rng,
                     TrainScratch<Scalar>& scratch) {
  auto& negatives = scratch.negatives;
  negatives.clear();
  for (int j = 0; j < k; ++j) {
    for (int attempt = 0; attempt < kNegativeRedrawLimit; ++attempt) {
      const std::int32_t id = noise.sample(rng);
      if (id != target_id) {
        negatives.push_back(id);
        break;
      }
    }
  }
  return train_example_fixed(bag, target_id, negatives, lr, store, scratch);
}

template <typename Scalar>
double train_example(const ContextBag& bag, std::int32_t target_id,
                     const NoiseTable& noise, int k, double lr,
                     EmbeddingStoreT<Scalar>& store, std::mt19937& rng) {
  TrainScratch<Scalar> scratch;
  return train_example(bag, target_id, noise, k, lr, store, rng, scratch);
}

/// Word vectors for release: the unigram row, plus for char variants the
/// average of the word's char-n-gram rows. Word-n-gram rows are discarded.
VectorTable extract_word_vectors(const EmbeddingStore& store,
                                 const Vocabulary& vocab,
                                 const TrainingConfig& cfg);

}  // namespace ngramvec
