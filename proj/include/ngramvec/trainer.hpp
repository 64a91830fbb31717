/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ngramvec/model.hpp"
#include "ngramvec/vectors.hpp"
#include "ngramvec/vocab.hpp"

namespace ngramvec {

struct TrainOptions {
  int parallelism = 1;
  // Checkpoints are written to "<checkpoint_prefix>.ckpt<i>"; required when
  // cfg.checkpoint_count > 0.
  std::string checkpoint_prefix;
  VectorFormat checkpoint_format = VectorFormat::kText;
  bool verbose = true;        // one status line per 1% progress on stderr
  bool collect_losses = false;  // record per-example losses (parallelism 1)
};

struct CheckpointInfo {
  int index = 0;
  double progress_fraction = 0.0;
  std::string path;
};

struct TrainResult {
  Vocabulary vocab;
  EmbeddingStore store;
  IndexLayout layout;
  std::uint64_t budget_tokens = 0;     // epochs x corpus tokens
  std::uint64_t processed_tokens = 0;  // where training actually stopped
  std::uint64_t max_sentence_tokens = 0;
  std::vector<CheckpointInfo> checkpoints;
  std::vector<double> losses;  // per example, only when collect_losses
};

/// Full training run: vocabulary build, corpus encoding, hogwild-style SGD
/// over sentence shards with linear lr decay, equidistant checkpoints and the
/// halt fraction, all driven by a shared processed-token counter. Determinism
/// is guaranteed at parallelism 1 only.
TrainResult run_training(const std::string& corpus_path,
                         const TrainingConfig& cfg, const TrainOptions& opts);

}  // namespace ngramvec
