/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>

#include "ngramvec/errors.hpp"
#include "ngramvec/eval.hpp"
#include "ngramvec/model.hpp"
#include "ngramvec/trainer.hpp"
#include "ngramvec/vectors.hpp"

namespace {

using namespace ngramvec;

std::string env_name(std::string flag) {
  for (char& c : flag) {
    c = c == '-' ? '_' : static_cast<char>(std::toupper(
                             static_cast<unsigned char>(c)));
  }
  return "NGRAMVEC_" + flag;
}

// Adds an option whose default depends on the selected model variant; the
// value is applied onto the config only when the user (or the environment)
// supplied it.
template <typename T>
CLI::Option* variant_option(CLI::App& app, const std::string& flag,
                            T& storage, const std::string& help) {
  auto* opt = app.add_option(flag, storage, help);
  opt->envname(env_name(flag.substr(2)));
  return opt;
}

struct TrainArgs {
  std::string input;
  std::string output;
  std::string model = "cbow";
  std::string save_vocab;
  bool binary = false;
  bool quiet = false;
  bool dump_config = false;
  int threads = 1;

  int dim = 0;
  int ws = 0;
  int epochs = 0;
  double lr = 0.0;
  double t = 0.0;
  int word_ngrams = 1;
  std::uint32_t word_bucket = 0;
  std::uint32_t char_bucket = 0;
  int minn = 0;
  int maxn = 0;
  int neg = 0;
  int dropout_k = 0;
  double halt = 0.0;
  std::uint64_t min_count = 0;
  std::size_t max_vocab = 0;
  int checkpoints = 0;
  std::uint64_t seed = 0;
};

void write_manifest(const std::string& path, const TrainingConfig& cfg,
                    const TrainArgs& args, const TrainResult* result) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write manifest: " + path);
  }
  out << "model=" << to_string(cfg.model) << '\n'
      << "dim=" << cfg.dim << '\n'
      << "ws=" << cfg.window_size << '\n'
      << "epochs=" << cfg.epochs << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", cfg.initial_lr);
  out << "lr=" << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.10g", cfg.subsampling_t);
  out << "t=" << buf << '\n';
  out << "word_ngrams=" << cfg.word_ngram_order << '\n'
      << "word_bucket=" << cfg.word_bucket << '\n'
      << "char_bucket=" << cfg.char_bucket << '\n'
      << "minn=" << cfg.min_n << '\n'
      << "maxn=" << cfg.max_n << '\n'
      << "neg=" << cfg.negatives << '\n'
      << "dropout_k=" << cfg.dropout_k << '\n';
  std::snprintf(buf, sizeof buf, "%.10g", cfg.halt_fraction);
  out << "halt=" << buf << '\n';
  out << "checkpoints=" << cfg.checkpoint_count << '\n'
      << "min_count=" << cfg.min_count << '\n'
      << "max_vocab=" << cfg.max_vocab << '\n'
      << "seed=" << cfg.seed << '\n'
      << "threads=" << args.threads << '\n'
      << "input=" << args.input << '\n'
      << "output=" << args.output << '\n'
      << "binary=" << (args.binary ? 1 : 0) << '\n';
  if (result != nullptr) {
    out << "budget_tokens=" << result->budget_tokens << '\n'
        << "processed_tokens=" << result->processed_tokens << '\n';
    for (const CheckpointInfo& c : result->checkpoints) {
      out << "checkpoint_" << c.index << '=' << c.path << '\n';
    }
  }
}

int cmd_train(CLI::App& cmd, const TrainArgs& args) {
  const ModelVariant variant = variant_from_string(args.model);
  TrainingConfig cfg = TrainingConfig::defaults_for(variant, args.word_ngrams);

  auto set = [&cmd](const char* flag) { return cmd.count(flag) > 0; };

  // Flags that contradict the selected variant are rejected up front.
  if (!uses_char_ngrams(variant)) {
    for (const char* flag : {"--minn", "--maxn", "--char-bucket"}) {
      if (set(flag)) {
        throw ConfigError(std::string(flag) + " conflicts with --model " +
                          args.model + " (not a char variant)");
      }
    }
  }
  if (args.word_ngrams < 2) {
    for (const char* flag : {"--word-bucket", "--dropout-k"}) {
      if (set(flag)) {
        throw ConfigError(std::string(flag) +
                          " needs --word-ngrams 2 or 3");
      }
    }
  }
  if (variant == ModelVariant::kSent2vec && set("--ws")) {
    throw ConfigError("--ws conflicts with --model sent2vec "
                      "(the context is the whole sentence)");
  }

  if (set("--dim")) cfg.dim = args.dim;
  if (set("--ws")) cfg.window_size = args.ws;
  if (set("--epochs")) cfg.epochs = args.epochs;
  if (set("--lr")) cfg.initial_lr = args.lr;
  if (set("--t")) cfg.subsampling_t = args.t;
  if (set("--word-bucket")) cfg.word_bucket = args.word_bucket;
  if (set("--char-bucket")) cfg.char_bucket = args.char_bucket;
  if (set("--minn")) cfg.min_n = args.minn;
  if (set("--maxn")) cfg.max_n = args.maxn;
  if (set("--neg")) cfg.negatives = args.neg;
  if (set("--dropout-k")) cfg.dropout_k = args.dropout_k;
  if (set("--halt")) cfg.halt_fraction = args.halt;
  if (set("--min-count")) cfg.min_count = args.min_count;
  if (set("--max-vocab")) cfg.max_vocab = args.max_vocab;
  if (set("--checkpoints")) cfg.checkpoint_count = args.checkpoints;
  if (set("--seed")) cfg.seed = args.seed;
  cfg.validate();

  if (args.dump_config) {
    write_manifest(args.output + ".manifest", cfg, args, nullptr);
    return 0;
  }

  TrainOptions opts;
  opts.parallelism = args.threads;
  opts.checkpoint_prefix = args.output;
  opts.checkpoint_format = args.binary ? VectorFormat::kBinary
                                       : VectorFormat::kText;
  opts.verbose = !args.quiet;

  TrainResult result = run_training(args.input, cfg, opts);

  const VectorTable table =
      extract_word_vectors(result.store, result.vocab, cfg);
  save_vectors(table, args.output, opts.checkpoint_format);
  write_manifest(args.output + ".manifest", cfg, args, &result);
  if (!args.save_vocab.empty()) {
    std::ofstream vout(args.save_vocab);
    if (!vout) {
      throw DataError("cannot write vocabulary dump: " + args.save_vocab);
    }
    result.vocab.dump(vout);
  }
  return 0;
}

struct EvalArgs {
  std::vector<std::string> vectors;
  std::vector<std::string> datasets;
  std::string task = "sim";
  std::string name;
  double eps = 1e-4;
  std::size_t cap = 200000;
  bool raw_cos = false;
  int threads = 1;
};

struct Aggregate {
  std::string dataset;
  std::vector<double> metrics;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;

  double mean() const {
    double s = 0.0;
    for (double m : metrics) s += m;
    return s / static_cast<double>(metrics.size());
  }
  std::optional<double> std_dev() const {
    if (metrics.size() < 2) {
      return std::nullopt;
    }
    const double mu = mean();
    double acc = 0.0;
    for (double m : metrics) acc += (m - mu) * (m - mu);
    return std::sqrt(acc / static_cast<double>(metrics.size() - 1));
  }
};

void print_aggregates(const std::string& model_name, const std::string& metric,
                      const std::vector<Aggregate>& rows) {
  std::size_t width = 7;
  for (const auto& r : rows) {
    width = std::max(width, r.dataset.size());
  }
  std::printf("# %-*s  %8s  %8s  %9s  %7s\n", static_cast<int>(width),
              "dataset", "mean", "std", "evaluated", "oov");
  for (const auto& r : rows) {
    const auto sd = r.std_dev();
    std::printf("# %-*s  %8.4f  %8s  %9zu  %7zu\n", static_cast<int>(width),
                r.dataset.c_str(), r.mean(),
                sd ? (std::to_string(*sd).substr(0, 8)).c_str() : "-",
                r.evaluated, r.skipped);
  }
  for (const auto& r : rows) {
    const auto sd = r.std_dev();
    char sdbuf[32] = "-";
    if (sd) {
      std::snprintf(sdbuf, sizeof sdbuf, "%.6f", *sd);
    }
    std::printf("%s\t%s\t%s\t%.6f\t%s\n", model_name.c_str(),
                r.dataset.c_str(), metric.c_str(), r.mean(), sdbuf);
  }
}

int cmd_eval(const EvalArgs& args) {
  if (args.task != "sim" && args.task != "analogy") {
    throw ConfigError("--task must be 'sim' or 'analogy'");
  }
  std::vector<VectorTable> tables;
  tables.reserve(args.vectors.size());
  for (const std::string& path : args.vectors) {
    tables.push_back(load_vectors(path));
  }
  const std::string model_name =
      args.name.empty() ? std::filesystem::path(args.vectors.front())
                              .filename()
                              .string()
                        : args.name;

  std::vector<Aggregate> rows;
  auto add_metric = [&rows](const EvalReport& rep) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const Aggregate& a) {
      return a.dataset == rep.dataset;
    });
    if (it == rows.end()) {
      rows.push_back(Aggregate{rep.dataset, {}, rep.evaluated, rep.skipped_oov});
      it = rows.end() - 1;
    }
    it->metrics.push_back(rep.metric);
  };

  if (args.task == "sim") {
    for (const std::string& ds_path : args.datasets) {
      const SimilarityDataset ds = load_similarity_dataset(ds_path);
      for (const VectorTable& table : tables) {
        add_metric(evaluate_similarity(table, ds));
      }
    }
  } else {
    AnalogyOptions opts;
    opts.epsilon = args.eps;
    opts.candidate_cap = args.cap;
    opts.shifted = !args.raw_cos;
    opts.threads = args.threads;
    for (const std::string& ds_path : args.datasets) {
      const AnalogyDataset ds = load_analogy_dataset(ds_path);
      for (const VectorTable& table : tables) {
        add_metric(evaluate_analogy(table, ds, opts));
      }
      if (ds.has_sections()) {
        const AnalogyDataset sem = ds.semantic_subset();
        const AnalogyDataset syn = ds.syntactic_subset();
        for (const VectorTable& table : tables) {
          if (!sem.quads.empty()) {
            add_metric(evaluate_analogy(table, sem, opts));
          }
          if (!syn.quads.empty()) {
            add_metric(evaluate_analogy(table, syn, opts));
          }
        }
      }
    }
  }
  print_aggregates(model_name, args.task == "sim" ? "spearman" : "accuracy",
                   rows);
  return 0;
}

int cmd_nn(const std::string& vectors_path, const std::string& query,
           std::size_t k) {
  const VectorTable table = load_vectors(vectors_path);
  for (const auto& [id, cos] : nearest_neighbors(table, query, k)) {
    std::printf("%s\t%.6f\n", table.word(id).c_str(), cos);
  }
  return 0;
}

struct SweepArgs {
  std::string dir = ".";
  std::vector<std::string> datasets;
  std::string task = "sim";
  int checkpoints = 20;
  double eps = 1e-4;
  std::size_t cap = 200000;
  int threads = 1;
};

int cmd_checkpoint_sweep(const SweepArgs& args) {
  const std::regex ckpt_re(R"(\.ckpt(\d+)$)");
  std::vector<std::pair<int, std::string>> found;
  for (const auto& entry : std::filesystem::directory_iterator(args.dir)) {
    if (!entry.is_regular_file()) {
      continue;
    }
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (std::regex_search(name, m, ckpt_re)) {
      found.emplace_back(std::stoi(m[1].str()), entry.path().string());
    }
  }
  if (found.empty()) {
    throw DataError("no .ckpt<i> files under: " + args.dir);
  }
  std::sort(found.begin(), found.end());

  std::vector<SimilarityDataset> sim_sets;
  std::vector<AnalogyDataset> ana_sets;
  AnalogyOptions opts;
  opts.epsilon = args.eps;
  opts.candidate_cap = args.cap;
  opts.threads = args.threads;
  for (const std::string& path : args.datasets) {
    if (args.task == "sim") {
      sim_sets.push_back(load_similarity_dataset(path));
    } else {
      ana_sets.push_back(load_analogy_dataset(path));
    }
  }
  for (const auto& [index, path] : found) {
    const VectorTable table = load_vectors(path);
    const double fraction =
        static_cast<double>(index) / static_cast<double>(args.checkpoints);
    for (const auto& ds : sim_sets) {
      const EvalReport rep = evaluate_similarity(table, ds);
      std::printf("%.4f\t%s\t%.6f\n", fraction, rep.dataset.c_str(), rep.metric);
    }
    for (const auto& ds : ana_sets) {
      const EvalReport rep = evaluate_analogy(table, ds, opts);
      std::printf("%.4f\t%s\t%.6f\n", fraction, rep.dataset.c_str(), rep.metric);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word embeddings trained with n-gram augmented contexts"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train a model");
  train->add_option("--input", train_args.input, "corpus file, one sentence per line")
      ->required()->envname(env_name("input"));
  train->add_option("--output", train_args.output, "output vector file")
      ->required()->envname(env_name("output"));
  train->add_option("--model", train_args.model,
                    "cbow|cbow_char|skipgram|skipgram_char|sent2vec")
      ->envname(env_name("model"));
  variant_option(*train, "--dim", train_args.dim, "embedding dimensions");
  variant_option(*train, "--ws", train_args.ws, "context window size");
  variant_option(*train, "--epochs", train_args.epochs, "training epochs");
  variant_option(*train, "--lr", train_args.lr, "initial learning rate");
  variant_option(*train, "--t", train_args.t, "subsampling threshold");
  variant_option(*train, "--word-ngrams", train_args.word_ngrams,
                 "word n-gram order (1-3)");
  variant_option(*train, "--word-bucket", train_args.word_bucket,
                 "word n-gram bucket size");
  variant_option(*train, "--char-bucket", train_args.char_bucket,
                 "char n-gram bucket size");
  variant_option(*train, "--minn", train_args.minn, "min char n-gram size");
  variant_option(*train, "--maxn", train_args.maxn, "max char n-gram size");
  variant_option(*train, "--neg", train_args.neg, "negatives per example");
  variant_option(*train, "--dropout-k", train_args.dropout_k,
                 "word n-grams dropped per context");
  variant_option(*train, "--halt", train_args.halt,
                 "fraction of training at which to halt");
  variant_option(*train, "--min-count", train_args.min_count,
                 "minimum word count");
  variant_option(*train, "--max-vocab", train_args.max_vocab,
                 "maximum vocabulary size");
  variant_option(*train, "--checkpoints", train_args.checkpoints,
                 "number of equidistant checkpoints");
  variant_option(*train, "--seed", train_args.seed, "random seed");
  train->add_option("--threads", train_args.threads, "training workers")
      ->envname(env_name("threads"));
  train->add_flag("--binary", train_args.binary, "write binary vector files")
      ->envname(env_name("binary"));
  train->add_option("--save-vocab", train_args.save_vocab,
                    "dump the vocabulary (surface<TAB>count)")
      ->envname(env_name("save-vocab"));
  train->add_flag("--quiet", train_args.quiet, "suppress progress lines")
      ->envname(env_name("quiet"));
  train->add_flag("--dump-config", train_args.dump_config,
                  "write the manifest and exit without training")
      ->envname(env_name("dump-config"));

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "similarity/analogy benchmarks");
  eval->add_option("--vectors", eval_args.vectors, "vector file(s), one per seed")
      ->required()->envname(env_name("vectors"));
  eval->add_option("--dataset", eval_args.datasets, "dataset file(s)")
      ->required()->envname(env_name("dataset"));
  eval->add_option("--task", eval_args.task, "sim|analogy")
      ->envname(env_name("task"));
  eval->add_option("--name", eval_args.name, "model label for the report")
      ->envname(env_name("name"));
  eval->add_option("--eps", eval_args.eps, "3CosMul epsilon")
      ->envname(env_name("eps"));
  eval->add_option("--cap", eval_args.cap,
                   "analogy candidates limited to the most frequent N words")
      ->envname(env_name("cap"));
  eval->add_flag("--raw-cos", eval_args.raw_cos,
                 "3CosMul on raw cosines instead of the (cos+1)/2 shift")
      ->envname(env_name("raw-cos"));
  eval->add_option("--threads", eval_args.threads, "analogy workers")
      ->envname(env_name("eval-threads"));

  std::string nn_vectors;
  std::string nn_query;
  std::size_t nn_k = 10;
  CLI::App* nn = app.add_subcommand("nn", "nearest neighbors by cosine");
  nn->add_option("--vectors", nn_vectors, "vector file")->required();
  nn->add_option("--query", nn_query, "query word")->required();
  nn->add_option("-k,--k", nn_k, "neighbor count");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "checkpoint-sweep", "evaluate every checkpoint in a directory");
  sweep->add_option("--dir", sweep_args.dir, "directory holding .ckpt<i> files");
  sweep->add_option("--dataset", sweep_args.datasets, "dataset file(s)")
      ->required();
  sweep->add_option("--task", sweep_args.task, "sim|analogy");
  sweep->add_option("--checkpoints", sweep_args.checkpoints,
                    "checkpoint count the run was configured with");
  sweep->add_option("--eps", sweep_args.eps, "3CosMul epsilon");
  sweep->add_option("--cap", sweep_args.cap, "analogy candidate cap");
  sweep->add_option("--threads", sweep_args.threads, "analogy workers");

  try {
    app.parse(argc, argv);
    if (train->parsed()) {
      return cmd_train(*train, train_args);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_args);
    }
    if (nn->parsed()) {
      return cmd_nn(nn_vectors, nn_query, nn_k);
    }
    if (sweep->parsed()) {
      return cmd_checkpoint_sweep(sweep_args);
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
