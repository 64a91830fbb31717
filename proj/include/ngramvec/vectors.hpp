/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ngramvec/errors.hpp"
#include "ngramvec/string_map.hpp"

namespace ngramvec {

using MatrixRM =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// In-memory word-vector table: one row per surface, rows ordered as loaded
/// (training order = descending frequency). Immutable and shareable once
/// built.
class VectorTable {
 public:
  VectorTable() = default;
  VectorTable(std::vector<std::string> words, MatrixRM vecs);

  std::size_t size() const { return words_.size(); }
  Eigen::Index dim() const { return vecs_.cols(); }
  const std::vector<std::string>& words() const { return words_; }
  const MatrixRM& matrix() const { return vecs_; }
  const std::string& word(std::int32_t id) const {
    return words_[static_cast<std::size_t>(id)];
  }
  auto row(std::int32_t id) const { return vecs_.row(id); }

  /// Exact-case lookup only.
  std::int32_t id(std::string_view surface) const;
  /// Exact-case lookup, then an ASCII-lowercased fallback.
  std::int32_t find(std::string_view surface) const;

 private:
  std::vector<std::string> words_;
  MatrixRM vecs_;
  StringMap<std::int32_t> index_;
};

enum class VectorFormat { kText, kBinary };

/// Writes `V D` header then one record per word. Text records are
/// space-separated %.6g decimals, newline-terminated; binary records are the
/// surface, one space, then D little-endian 32-bit floats.
void save_vectors(const VectorTable& table, const std::string& path,
                  VectorFormat format);

/// Parses either format, auto-detected from the payload after the header
/// line. Rejects malformed headers, record-count and dimension mismatches,
/// duplicate surfaces and non-finite components, each with its own
/// VectorFileError kind.
VectorTable load_vectors(const std::string& path);

}  // namespace ngramvec
