/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include "ngramvec/model.hpp"

#include <algorithm>
#include <cmath>

namespace ngramvec {

bool uses_char_ngrams(ModelVariant v) {
  return v == ModelVariant::kCbowChar || v == ModelVariant::kSkipgramChar;
}

bool is_skipgram(ModelVariant v) {
  return v == ModelVariant::kSkipgram || v == ModelVariant::kSkipgramChar;
}

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::kCbow: return "cbow";
    case ModelVariant::kCbowChar: return "cbow_char";
    case ModelVariant::kSkipgram: return "skipgram";
    case ModelVariant::kSkipgramChar: return "skipgram_char";
    case ModelVariant::kSent2vec: return "sent2vec";
  }
  return "?";
}

ModelVariant variant_from_string(std::string_view name) {
  if (name == "cbow") return ModelVariant::kCbow;
  if (name == "cbow_char") return ModelVariant::kCbowChar;
  if (name == "skipgram") return ModelVariant::kSkipgram;
  if (name == "skipgram_char") return ModelVariant::kSkipgramChar;
  if (name == "sent2vec") return ModelVariant::kSent2vec;
  throw ConfigError("unknown model variant: " + std::string(name));
}

TrainingConfig TrainingConfig::defaults_for(ModelVariant v,
                                            int word_ngram_order) {
  TrainingConfig cfg;
  cfg.model = v;
  cfg.word_ngram_order = word_ngram_order;
  cfg.dim = 300;
  cfg.max_vocab = 750000;
  cfg.min_count = 5;
  cfg.checkpoint_count = 20;

  const std::uint32_t order_bucket =
      word_ngram_order >= 3 ? 4000000u : (word_ngram_order == 2 ? 2000000u : 0u);
  cfg.word_bucket = order_bucket;

  switch (v) {
    case ModelVariant::kSent2vec:
      cfg.initial_lr = 0.2;
      cfg.epochs = 9;
      cfg.negatives = 10;
      cfg.window_size = 0;  // whole-sentence context
      cfg.halt_fraction = 1.0;
      cfg.dropout_k = word_ngram_order >= 2 ? 4 : 0;
      cfg.subsampling_t = word_ngram_order >= 3
                              ? 5e-6
                              : (word_ngram_order == 2 ? 5e-5 : 1e-5);
      break;
    case ModelVariant::kCbowChar:
      cfg.initial_lr = 0.05;
      cfg.epochs = 9;
      cfg.negatives = 5;
      cfg.window_size = 10;
      cfg.subsampling_t = 1e-4;
      cfg.char_bucket = 2000000;
      cfg.min_n = 3;
      cfg.max_n = 6;
      cfg.dropout_k = word_ngram_order >= 2 ? 2 : 0;
      cfg.halt_fraction = word_ngram_order >= 2 ? 0.8 : 0.75;
      break;
    case ModelVariant::kCbow:
      cfg.initial_lr = 0.05;
      cfg.epochs = 5;
      cfg.negatives = 5;
      cfg.window_size = 10;
      cfg.subsampling_t = 1e-4;
      cfg.dropout_k = word_ngram_order >= 2 ? 2 : 0;
      cfg.halt_fraction = 0.6;
      break;
    case ModelVariant::kSkipgramChar:
      cfg.initial_lr = 0.05;
      cfg.epochs = 15;
      cfg.negatives = 5;
      cfg.window_size = 5;
      cfg.subsampling_t = 1e-4;
      cfg.char_bucket = 2000000;
      cfg.min_n = 3;
      cfg.max_n = 6;
      cfg.halt_fraction = 1.0;
      break;
    case ModelVariant::kSkipgram:
      cfg.initial_lr = 0.05;
      cfg.epochs = 15;
      cfg.negatives = 5;
      cfg.window_size = 5;
      cfg.subsampling_t = 1e-4;
      cfg.halt_fraction = 1.0;
      break;
  }
  return cfg;
}

void TrainingConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) {
      throw ConfigError(msg);
    }
  };
  require(dim >= 1, "dim must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(initial_lr > 0.0, "initial learning rate must be positive");
  require(subsampling_t >= 0.0, "subsampling threshold must be >= 0");
  require(word_ngram_order >= 1 && word_ngram_order <= 3,
          "word n-gram order must be in [1, 3]");
  require(negatives >= 1, "number of negatives must be >= 1");
  require(dropout_k >= 0, "dropout count must be >= 0");
  require(halt_fraction > 0.0 && halt_fraction <= 1.0,
          "halt fraction must be in (0, 1]");
  require(checkpoint_count >= 0, "checkpoint count must be >= 0");
  require(min_count >= 1, "min count must be >= 1");
  require(max_vocab >= 1, "max vocab size must be >= 1");

  if (model != ModelVariant::kSent2vec) {
    require(window_size >= 1, "window size must be >= 1");
  }
  if (uses_char_ngrams(model)) {
    require(char_bucket > 0, "char variants need a char-n-gram bucket");
    require(min_n >= 1 && min_n <= max_n,
            "char variants need 1 <= minn <= maxn");
  } else {
    require(char_bucket == 0,
            "char-n-gram bucket only applies to char variants");
    require(min_n == 0 && max_n == 0,
            "char-n-gram sizes only apply to char variants");
  }
  if (word_ngram_order >= 2) {
    require(!is_skipgram(model),
            "word n-grams are not defined for skip-gram variants");
    require(word_bucket > 0, "word n-gram orders >= 2 need a word bucket");
  } else {
    require(word_bucket == 0, "a word bucket needs word n-gram order >= 2");
  }
}

NoiseTable::NoiseTable(const Vocabulary& vocab, double alpha) {
  const std::size_t n = vocab.size();
  prob_.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    prob_[i] = std::pow(static_cast<double>(vocab.count(static_cast<std::int32_t>(i))),
                        alpha);
    total += prob_[i];
  }
  for (double& p : prob_) {
    p /= total;
  }

  // Vose alias construction.
  threshold_.assign(n, 1.0);
  alias_.resize(n);
  std::vector<std::int32_t> small;
  std::vector<std::int32_t> large;
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    alias_[i] = static_cast<std::int32_t>(i);
    scaled[i] = prob_[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::int32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::int32_t s = small.back();
    const std::int32_t l = large.back();
    small.pop_back();
    large.pop_back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
}

std::int32_t NoiseTable::sample(std::mt19937& rng) const {
  const std::size_t n = prob_.size();
  std::uniform_int_distribution<std::size_t> cell(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t i = cell(rng);
  return unit(rng) < threshold_[i] ? static_cast<std::int32_t>(i) : alias_[i];
}

int sample_window(int ws, std::mt19937& rng) {
  std::uniform_int_distribution<int> dist(1, ws);
  return dist(rng);
}

CharNgramCache CharNgramCache::build(const Vocabulary& vocab,
                                     const TrainingConfig& cfg,
                                     const IndexLayout& layout) {
  CharNgramCache cache;
  if (!uses_char_ngrams(cfg.model)) {
    return cache;
  }
  cache.rows.resize(vocab.size());
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    cache.rows[w] = char_ngrams(vocab.surface(static_cast<std::int32_t>(w)),
                                cfg.min_n, cfg.max_n, layout);
  }
  return cache;
}

bool assemble_context_cbow_into(const SubsampledSentence& sub,
                                std::size_t target_pos, int sampled_ws,
                                const TrainingConfig& cfg,
                                const IndexLayout& layout,
                                const Vocabulary& vocab,
                                const CharNgramCache& chars, std::mt19937& rng,
                                ContextBag& bag, AssembleScratch& scratch) {
  bag.rows.clear();
  bag.denom = 0;
  const std::size_t n = sub.kept_ids.size();
  const std::size_t ws = static_cast<std::size_t>(sampled_ws);
  const std::size_t lo = target_pos >= ws ? target_pos - ws : 0;
  const std::size_t hi = std::min(n - 1, target_pos + ws);
  const bool with_chars = uses_char_ngrams(cfg.model);
  for (std::size_t j = lo; j <= hi; ++j) {
    if (j == target_pos) {
      continue;
    }
    const std::int32_t id = sub.kept_ids[j];
    bag.rows.push_back(static_cast<std::uint32_t>(id));
    ++bag.denom;
    if (with_chars) {
      const auto& rows = chars.rows[static_cast<std::size_t>(id)];
      bag.rows.insert(bag.rows.end(), rows.begin(), rows.end());
      bag.denom += static_cast<std::uint32_t>(rows.size());
    }
  }
  if (cfg.word_ngram_order >= 2) {
    const std::size_t span_lo = sub.origin_positions[lo];
    const std::size_t span_hi = sub.origin_positions[hi];
    scratch.surfaces.clear();
    scratch.ids.clear();
    for (std::size_t p = span_lo; p <= span_hi; ++p) {
      const std::int32_t id = sub.original_ids[p];
      scratch.ids.push_back(id);
      scratch.surfaces.push_back(id >= 0 ? std::string_view(vocab.surface(id))
                                         : std::string_view());
    }
    const std::size_t ngram_start = bag.rows.size();
    append_word_ngrams(scratch.surfaces, scratch.ids, cfg.word_ngram_order,
                       layout, bag.rows, scratch.key);
    dropout_range(bag.rows, ngram_start,
                  static_cast<std::size_t>(cfg.dropout_k), rng);
    bag.denom += static_cast<std::uint32_t>(bag.rows.size() - ngram_start);
  }
  return !bag.rows.empty();
}

std::optional<ContextBag> assemble_context_cbow(
    const SubsampledSentence& sub, std::size_t target_pos, int sampled_ws,
    const TrainingConfig& cfg, const IndexLayout& layout,
    const Vocabulary& vocab, const CharNgramCache& chars, std::mt19937& rng) {
  ContextBag bag;
  AssembleScratch scratch;
  if (!assemble_context_cbow_into(sub, target_pos, sampled_ws, cfg, layout,
                                  vocab, chars, rng, bag, scratch)) {
    return std::nullopt;
  }
  return bag;
}

bool assemble_context_sent2vec_into(const SubsampledSentence& sub,
                                    std::size_t target_origin_pos,
                                    const TrainingConfig& cfg,
                                    const IndexLayout& layout,
                                    const Vocabulary& vocab, std::mt19937& rng,
                                    ContextBag& bag, AssembleScratch& scratch) {
  bag.rows.clear();
  bag.denom = 0;
  for (std::size_t j = 0; j < sub.kept_ids.size(); ++j) {
    if (sub.origin_positions[j] == target_origin_pos) {
      continue;  // leave-one-out: the target occurrence, not the word type
    }
    bag.rows.push_back(static_cast<std::uint32_t>(sub.kept_ids[j]));
    ++bag.denom;
  }
  if (cfg.word_ngram_order >= 2) {
    scratch.surfaces.clear();
    scratch.ids.clear();
    for (std::size_t p = 0; p < sub.original_ids.size(); ++p) {
      // Masking the target position drops every n-gram that covers it.
      const std::int32_t id =
          p == target_origin_pos ? kAbsentId : sub.original_ids[p];
      scratch.ids.push_back(id);
      scratch.surfaces.push_back(id >= 0 ? std::string_view(vocab.surface(id))
                                         : std::string_view());
    }
    const std::size_t ngram_start = bag.rows.size();
    append_word_ngrams(scratch.surfaces, scratch.ids, cfg.word_ngram_order,
                       layout, bag.rows, scratch.key);
    dropout_range(bag.rows, ngram_start,
                  static_cast<std::size_t>(cfg.dropout_k), rng);
    bag.denom += static_cast<std::uint32_t>(bag.rows.size() - ngram_start);
  }
  return !bag.rows.empty();
}

std::optional<ContextBag> assemble_context_sent2vec(
    const SubsampledSentence& sub, std::size_t target_origin_pos,
    const TrainingConfig& cfg, const IndexLayout& layout,
    const Vocabulary& vocab, std::mt19937& rng) {
  ContextBag bag;
  AssembleScratch scratch;
  if (!assemble_context_sent2vec_into(sub, target_origin_pos, cfg, layout,
                                      vocab, rng, bag, scratch)) {
    return std::nullopt;
  }
  return bag;
}

VectorTable extract_word_vectors(const EmbeddingStore& store,
                                 const Vocabulary& vocab,
                                 const TrainingConfig& cfg) {
  const auto vsize = static_cast<Eigen::Index>(vocab.size());
  const Eigen::Index dim = store.dim();
  MatrixRM out(vsize, dim);
  if (!uses_char_ngrams(cfg.model)) {
    out = store.input.topRows(vsize);
  } else {
    const IndexLayout layout =
        cfg.layout(static_cast<std::uint32_t>(vocab.size()));
    Eigen::VectorXd acc(dim);
    for (Eigen::Index w = 0; w < vsize; ++w) {
      acc = store.input.row(w).cast<double>();
      const auto rows = char_ngrams(vocab.surface(static_cast<std::int32_t>(w)),
                                    cfg.min_n, cfg.max_n, layout);
      if (!rows.empty()) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
        for (std::uint32_t r : rows) {
          sum += store.input.row(r).cast<double>();
        }
        acc += sum / static_cast<double>(rows.size());
      }
      out.row(w) = acc.cast<float>();
    }
  }
  std::vector<std::string> words;
  words.reserve(vocab.size());
  for (const auto& e : vocab.entries()) {
    words.push_back(e.surface);
  }
  return VectorTable(std::move(words), std::move(out));
}

}  // namespace ngramvec
