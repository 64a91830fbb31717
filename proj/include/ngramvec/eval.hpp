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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ngramvec/errors.hpp"
#include "ngramvec/vectors.hpp"

namespace ngramvec {

/// dot(u,v) / (|u||v|). Throws NumericError when either vector is zero.
template <typename DerivedA, typename DerivedB>
double cosine(const Eigen::MatrixBase<DerivedA>& u,
              const Eigen::MatrixBase<DerivedB>& v) {
  const double nu = u.template cast<double>().norm();
  const double nv = v.template cast<double>().norm();
  if (nu == 0.0 || nv == 0.0) {
    throw NumericError("cosine of a zero vector is undefined");
  }
  return u.template cast<double>().dot(v.template cast<double>()) / (nu * nv);
}

/// Fractional (average) ranks; equal values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the rank vectors, ties averaged. Throws
/// NumericError when either list is constant.
double spearman_rho(std::span<const double> a, std::span<const double> b);

struct SimilarityPair {
  std::string word1;
  std::string word2;
  double gold = 0.0;
};

struct SimilarityDataset {
  std::string name;
  std::vector<SimilarityPair> pairs;
};

/// One `word1<TAB>word2<TAB>score` per line, `#` comments ignored.
SimilarityDataset load_similarity_dataset(const std::string& path);

struct AnalogyQuad {
  std::string x;
  std::string y;
  std::string x_star;
  std::string y_star;
};

struct AnalogyDataset {
  std::string name;
  std::vector<AnalogyQuad> quads;
  // Google-format section names, aligned with quads; empty when the file has
  // no `: section` headers. Sections starting with "gram" count as syntactic.
  std::vector<std::string> sections;

  bool has_sections() const { return !sections.empty(); }
  AnalogyDataset syntactic_subset() const;
  AnalogyDataset semantic_subset() const;
};

/// One `x y x* y*` per space-separated line; `: section-name` headers are
/// recognized and attached to the quads that follow.
AnalogyDataset load_analogy_dataset(const std::string& path);

struct EvalReport {
  std::string dataset;
  double metric = 0.0;       // Spearman rho or accuracy
  std::size_t evaluated = 0;
  std::size_t skipped_oov = 0;
};

/// Pairs with either word OOV are skipped and counted; Spearman's rho between
/// model cosines and gold scores over the rest. Throws DataError with fewer
/// than two evaluable pairs.
EvalReport evaluate_similarity(const VectorTable& vectors,
                               const SimilarityDataset& ds);

struct AnalogyOptions {
  double epsilon = 1e-4;
  // Candidate argmax restricted to the most frequent rows of the table.
  std::size_t candidate_cap = 200000;
  // (cos+1)/2 shift keeping Eq. numerator/denominator non-negative; raw
  // cosines selectable for comparison.
  bool shifted = true;
  int threads = 1;
};

/// argmax over candidates z (excluding x, y, x*) of
/// cos(z,y)*cos(z,x*) / (cos(z,x)+eps), ties broken by lower id.
/// Returns kAbsentTable (-1) when any query word is missing from the table.
std::int32_t solve_analogy_3cosmul(std::string_view x, std::string_view y,
                                   std::string_view x_star,
                                   const VectorTable& vectors,
                                   const AnalogyOptions& opts = {});

/// Quads with any word OOV are skipped and counted; accuracy over the rest.
/// Throws DataError when no quad is evaluable.
EvalReport evaluate_analogy(const VectorTable& vectors,
                            const AnalogyDataset& ds,
                            const AnalogyOptions& opts = {});

/// k highest-cosine words excluding the query itself, descending, ties by id.
/// Throws DataError when the query is OOV.
std::vector<std::pair<std::int32_t, double>> nearest_neighbors(
    const VectorTable& vectors, std::string_view query, std::size_t k);

}  // namespace ngramvec
