/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include "ngramvec/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "ngramvec/errors.hpp"

namespace ngramvec {

namespace {

struct EncodedCorpus {
  std::vector<std::int32_t> ids;        // every token position, kAbsentId = OOV
  std::vector<std::uint64_t> offsets;   // sentence starts + end sentinel
  std::uint64_t max_sentence = 0;

  std::size_t sentences() const { return offsets.size() - 1; }
  std::span<const std::int32_t> sentence(std::size_t s) const {
    return {ids.data() + offsets[s], ids.data() + offsets[s + 1]};
  }
};

EncodedCorpus encode_corpus(const std::string& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open corpus file: " + path);
  }
  EncodedCorpus enc;
  enc.offsets.push_back(0);
  std::string line;
  while (std::getline(in, line)) {
    const auto toks = split_tokens(line);
    if (toks.empty()) {
      continue;
    }
    for (std::string_view tok : toks) {
      enc.ids.push_back(vocab.id(tok));
    }
    enc.offsets.push_back(enc.ids.size());
    enc.max_sentence = std::max<std::uint64_t>(enc.max_sentence, toks.size());
  }
  if (enc.ids.empty()) {
    throw DataError("zero-token corpus: " + path);
  }
  return enc;
}

void atomic_add(std::atomic<double>& a, double v) {
  double cur = a.load(std::memory_order_relaxed);
  while (!a.compare_exchange_weak(cur, cur + v, std::memory_order_relaxed)) {
  }
}

constexpr std::uint64_t kHaltDenom = 1000000000ull;

struct SharedState {
  SharedState(const TrainingConfig& cfg_in, const TrainOptions& opts_in,
              const EncodedCorpus& enc_in, const Vocabulary& vocab_in,
              const IndexLayout& layout_in, const CharNgramCache& chars_in,
              const NoiseTable& noise_in, EmbeddingStore& store_in)
      : cfg(cfg_in), opts(opts_in), enc(enc_in), vocab(vocab_in),
        layout(layout_in), chars(chars_in), noise(noise_in), store(store_in) {}

  const TrainingConfig& cfg;
  const TrainOptions& opts;
  const EncodedCorpus& enc;
  const Vocabulary& vocab;
  const IndexLayout& layout;
  const CharNgramCache& chars;
  const NoiseTable& noise;
  EmbeddingStore& store;

  std::uint64_t budget = 0;
  std::uint64_t halt_tokens = 0;

  std::atomic<std::uint64_t> progress{0};
  std::atomic<int> next_checkpoint{1};
  std::atomic<bool> stop{false};
  std::atomic<int> last_percent{-1};
  std::atomic<double> loss_sum{0.0};
  std::atomic<std::uint64_t> loss_count{0};

  std::mutex io_mutex;
  std::vector<CheckpointInfo> checkpoints;
  std::exception_ptr failure;

  std::vector<double>* losses = nullptr;  // parallelism 1 only

  std::uint64_t checkpoint_threshold(int i) const {
    const auto cp = static_cast<std::uint64_t>(cfg.checkpoint_count);
    return (budget * static_cast<std::uint64_t>(i) + cp - 1) / cp;
  }
};

void write_checkpoint(SharedState& sh, int index) {
  const VectorTable table = extract_word_vectors(sh.store, sh.vocab, sh.cfg);
  CheckpointInfo info;
  info.index = index;
  info.progress_fraction =
      static_cast<double>(index) / sh.cfg.checkpoint_count;
  info.path = sh.opts.checkpoint_prefix + ".ckpt" + std::to_string(index);
  save_vectors(table, info.path, sh.opts.checkpoint_format);
  sh.checkpoints.push_back(std::move(info));
}

class Worker {
 public:
  Worker(SharedState& sh, int id, std::size_t sent_lo, std::size_t sent_hi)
      : sh_(sh), id_(id), sent_lo_(sent_lo), sent_hi_(sent_hi) {
    std::seed_seq seq{static_cast<std::uint32_t>(sh.cfg.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(sh.cfg.seed >> 32),
                      static_cast<std::uint32_t>(id)};
    rng_ = std::mt19937(seq);
    lr_ = sh.cfg.initial_lr;
  }

  void run() {
    try {
      for (int epoch = 0; epoch < sh_.cfg.epochs; ++epoch) {
        for (std::size_t s = sent_lo_; s < sent_hi_; ++s) {
          if (sh_.stop.load(std::memory_order_relaxed)) {
            return;
          }
          process_sentence(sh_.enc.sentence(s));
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(sh_.io_mutex);
      if (!sh_.failure) {
        sh_.failure = std::current_exception();
      }
      sh_.stop.store(true);
    }
  }

 private:
  void process_sentence(std::span<const std::int32_t> ids) {
    const TrainingConfig& cfg = sh_.cfg;
    subsample_encoded_into(ids, sh_.vocab, cfg.subsampling_t, rng_, sub_);
    sentence_loss_ = 0.0;
    sentence_examples_ = 0;

    if (cfg.model == ModelVariant::kSent2vec) {
      for (std::size_t p = 0; p < ids.size(); ++p) {
        if (ids[p] == kAbsentId) {
          continue;
        }
        if (assemble_context_sent2vec_into(sub_, p, cfg, sh_.layout, sh_.vocab,
                                           rng_, bag_, assemble_)) {
          train(bag_, ids[p]);
        }
      }
    } else if (is_skipgram(cfg.model)) {
      const std::size_t n = sub_.kept_ids.size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto ws =
            static_cast<std::size_t>(sample_window(cfg.window_size, rng_));
        const std::int32_t target = sub_.kept_ids[i];
        bag_.rows.clear();
        bag_.rows.push_back(static_cast<std::uint32_t>(target));
        if (uses_char_ngrams(cfg.model)) {
          const auto& rows = sh_.chars.rows[static_cast<std::size_t>(target)];
          bag_.rows.insert(bag_.rows.end(), rows.begin(), rows.end());
        }
        bag_.denom = static_cast<std::uint32_t>(bag_.rows.size());
        const std::size_t lo = i >= ws ? i - ws : 0;
        const std::size_t hi = std::min(n - 1, i + ws);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j != i) {
            train(bag_, sub_.kept_ids[j]);
          }
        }
      }
    } else {  // CBOW family
      for (std::size_t i = 0; i < sub_.kept_ids.size(); ++i) {
        const int ws = sample_window(cfg.window_size, rng_);
        if (assemble_context_cbow_into(sub_, i, ws, cfg, sh_.layout, sh_.vocab,
                                       sh_.chars, rng_, bag_, assemble_)) {
          train(bag_, sub_.kept_ids[i]);
        }
      }
    }
    flush_progress(ids.size());
  }

  void train(const ContextBag& bag, std::int32_t target) {
    const double loss = train_example(bag, target, sh_.noise,
                                      sh_.cfg.negatives, lr_, sh_.store, rng_,
                                      scratch_);
    sentence_loss_ += loss;
    ++sentence_examples_;
    if (sh_.losses != nullptr) {
      sh_.losses->push_back(loss);
    }
  }

  void flush_progress(std::uint64_t tokens) {
    const std::uint64_t done =
        sh_.progress.fetch_add(tokens, std::memory_order_relaxed) + tokens;
    const double p = std::min(
        1.0, static_cast<double>(done) / static_cast<double>(sh_.budget));
    lr_ = sh_.cfg.initial_lr * (1.0 - p);
    if (sentence_examples_ > 0) {
      atomic_add(sh_.loss_sum, sentence_loss_);
      sh_.loss_count.fetch_add(sentence_examples_, std::memory_order_relaxed);
    }

    if (sh_.cfg.checkpoint_count > 0) {
      int c = sh_.next_checkpoint.load(std::memory_order_relaxed);
      while (c <= sh_.cfg.checkpoint_count && done >= sh_.checkpoint_threshold(c)) {
        if (sh_.next_checkpoint.compare_exchange_strong(c, c + 1)) {
          std::lock_guard<std::mutex> lock(sh_.io_mutex);
          write_checkpoint(sh_, c);
          c = sh_.next_checkpoint.load(std::memory_order_relaxed);
        }
      }
    }
    if (done >= sh_.halt_tokens) {
      sh_.stop.store(true, std::memory_order_relaxed);
    }
    if (sh_.opts.verbose) {
      report(done);
    }
  }

  void report(std::uint64_t done) {
    const int pct = static_cast<int>(
        std::min<std::uint64_t>(100, done * 100 / sh_.budget));
    int prev = sh_.last_percent.load(std::memory_order_relaxed);
    while (pct > prev) {
      if (sh_.last_percent.compare_exchange_weak(prev, pct)) {
        const std::uint64_t n =
            std::max<std::uint64_t>(1, sh_.loss_count.load());
        std::fprintf(stderr, "progress %3d%% lr %.6f loss %.4f\n", pct, lr_,
                     sh_.loss_sum.load() / static_cast<double>(n));
        break;
      }
    }
  }

  SharedState& sh_;
  int id_;
  std::size_t sent_lo_;
  std::size_t sent_hi_;
  std::mt19937 rng_;
  double lr_ = 0.0;
  double sentence_loss_ = 0.0;
  std::uint64_t sentence_examples_ = 0;
  SubsampledSentence sub_;
  ContextBag bag_;
  AssembleScratch assemble_;
  TrainScratch<float> scratch_;
};

}  // namespace

TrainResult run_training(const std::string& corpus_path,
                         const TrainingConfig& cfg, const TrainOptions& opts) {
  cfg.validate();
  if (opts.parallelism < 1) {
    throw ConfigError("parallelism must be >= 1");
  }
  if (cfg.checkpoint_count > 0 && opts.checkpoint_prefix.empty()) {
    throw ConfigError("checkpoints enabled but no checkpoint prefix given");
  }

  Vocabulary vocab =
      Vocabulary::build_from_file(corpus_path, cfg.min_count, cfg.max_vocab);
  const EncodedCorpus enc = encode_corpus(corpus_path, vocab);
  const IndexLayout layout =
      cfg.layout(static_cast<std::uint32_t>(vocab.size()));
  const CharNgramCache chars = CharNgramCache::build(vocab, cfg, layout);
  const NoiseTable noise(vocab);
  EmbeddingStore store = EmbeddingStore::init(layout, cfg.dim, cfg.seed);

  SharedState sh(cfg, opts, enc, vocab, layout, chars, noise, store);
  sh.budget = static_cast<std::uint64_t>(cfg.epochs) * enc.ids.size();
  const auto halt_num = static_cast<std::uint64_t>(
      std::llround(cfg.halt_fraction * static_cast<double>(kHaltDenom)));
  sh.halt_tokens = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(sh.budget) * halt_num + kHaltDenom - 1) /
      kHaltDenom);

  std::vector<double> losses;
  if (opts.collect_losses && opts.parallelism == 1) {
    sh.losses = &losses;
  }

  // Contiguous sentence shards with roughly equal token counts.
  const int workers = std::min<int>(opts.parallelism,
                                    static_cast<int>(enc.sentences()));
  std::vector<std::size_t> bounds(static_cast<std::size_t>(workers) + 1, 0);
  bounds.back() = enc.sentences();
  for (int w = 1; w < workers; ++w) {
    const std::uint64_t target =
        enc.ids.size() * static_cast<std::uint64_t>(w) / workers;
    bounds[w] = static_cast<std::size_t>(
        std::lower_bound(enc.offsets.begin(), enc.offsets.end(), target) -
        enc.offsets.begin());
  }

  if (workers == 1) {
    Worker(sh, 0, bounds[0], bounds[1]).run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&sh, w, lo = bounds[w], hi = bounds[w + 1]] {
        Worker(sh, w, lo, hi).run();
      });
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (sh.failure) {
    std::rethrow_exception(sh.failure);
  }

  TrainResult result;
  result.budget_tokens = sh.budget;
  result.processed_tokens = sh.progress.load();
  result.max_sentence_tokens = enc.max_sentence;
  result.checkpoints = std::move(sh.checkpoints);
  std::sort(result.checkpoints.begin(), result.checkpoints.end(),
            [](const CheckpointInfo& a, const CheckpointInfo& b) {
              return a.index < b.index;
            });
  result.losses = std::move(losses);
  result.layout = layout;
  result.vocab = std::move(vocab);
  result.store = std::move(store);
  return result;
}

}  // namespace ngramvec
