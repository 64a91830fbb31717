/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include "ngramvec/eval.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <thread>

#include "ngramvec/vocab.hpp"

namespace ngramvec {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[idx[j]] == values[idx[i]]) {
      ++j;
    }
    // Positions i+1 .. j (1-based) share the average rank.
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t p = i; p < j; ++p) {
      ranks[idx[p]] = rank;
    }
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw NumericError("spearman_rho needs two equal-length lists of size >= 2");
  }
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mean_b = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - mean_a;
    const double db = rb[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw NumericError("spearman_rho is undefined for a constant list");
  }
  return cov / std::sqrt(var_a * var_b);
}

namespace {

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
}

}  // namespace

SimilarityDataset load_similarity_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open similarity dataset: " + path);
  }
  SimilarityDataset ds;
  ds.name = stem_of(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected word1<TAB>word2<TAB>score");
    }
    SimilarityPair pair;
    pair.word1 = line.substr(0, t1);
    pair.word2 = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      pair.gold = std::stod(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) + ": bad score");
    }
    if (pair.word1.empty() || pair.word2.empty() || !std::isfinite(pair.gold)) {
      throw DataError(path + ":" + std::to_string(lineno) + ": malformed pair");
    }
    ds.pairs.push_back(std::move(pair));
  }
  if (ds.pairs.empty()) {
    throw DataError("similarity dataset has no pairs: " + path);
  }
  return ds;
}

AnalogyDataset load_analogy_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open analogy dataset: " + path);
  }
  AnalogyDataset ds;
  ds.name = stem_of(path);
  std::string line;
  std::string section;
  bool saw_section = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) {
      continue;
    }
    if (line[0] == ':') {
      section = line.substr(1);
      const std::size_t start = section.find_first_not_of(" \t");
      section = start == std::string::npos ? "" : section.substr(start);
      saw_section = true;
      continue;
    }
    const auto toks = split_tokens(line);
    if (toks.size() != 4) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected 'x y x* y*'");
    }
    ds.quads.push_back(AnalogyQuad{std::string(toks[0]), std::string(toks[1]),
                                   std::string(toks[2]), std::string(toks[3])});
    ds.sections.push_back(section);
  }
  if (ds.quads.empty()) {
    throw DataError("analogy dataset has no quadruplets: " + path);
  }
  if (!saw_section) {
    ds.sections.clear();
  }
  return ds;
}

namespace {

bool is_syntactic_section(std::string_view section) {
  return section.substr(0, 4) == "gram";
}

AnalogyDataset filter_sections(const AnalogyDataset& ds, bool syntactic,
                               const char* suffix) {
  AnalogyDataset out;
  out.name = ds.name + suffix;
  for (std::size_t i = 0; i < ds.quads.size(); ++i) {
    if (is_syntactic_section(ds.sections[i]) == syntactic) {
      out.quads.push_back(ds.quads[i]);
      out.sections.push_back(ds.sections[i]);
    }
  }
  return out;
}

}  // namespace

AnalogyDataset AnalogyDataset::syntactic_subset() const {
  return filter_sections(*this, true, " (syntactic)");
}

AnalogyDataset AnalogyDataset::semantic_subset() const {
  return filter_sections(*this, false, " (semantic)");
}

EvalReport evaluate_similarity(const VectorTable& vectors,
                               const SimilarityDataset& ds) {
  EvalReport report;
  report.dataset = ds.name;
  std::vector<double> gold;
  std::vector<double> model;
  for (const SimilarityPair& pair : ds.pairs) {
    const std::int32_t a = vectors.find(pair.word1);
    const std::int32_t b = vectors.find(pair.word2);
    if (a < 0 || b < 0) {
      ++report.skipped_oov;
      continue;
    }
    gold.push_back(pair.gold);
    model.push_back(cosine(vectors.row(a), vectors.row(b)));
  }
  if (gold.size() < 2) {
    throw DataError("dataset '" + ds.name + "': only " +
                    std::to_string(gold.size()) + " evaluable pairs (" +
                    std::to_string(report.skipped_oov) + " skipped as OOV)");
  }
  report.evaluated = gold.size();
  report.metric = spearman_rho(model, gold);
  return report;
}

namespace {

// Sequential double-precision dot and norm: accumulation order is fixed so
// results are reproducible and comparable against a plain reference loop.
double dot_seq(const MatrixRM& m, std::int32_t a, std::int32_t b) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    acc += static_cast<double>(m(a, i)) * static_cast<double>(m(b, i));
  }
  return acc;
}

double norm_seq(const MatrixRM& m, std::int32_t r) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    acc += static_cast<double>(m(r, i)) * static_cast<double>(m(r, i));
  }
  return std::sqrt(acc);
}

}  // namespace

std::int32_t solve_analogy_3cosmul(std::string_view x, std::string_view y,
                                   std::string_view x_star,
                                   const VectorTable& vectors,
                                   const AnalogyOptions& opts) {
  const std::int32_t ix = vectors.find(x);
  const std::int32_t iy = vectors.find(y);
  const std::int32_t ixs = vectors.find(x_star);
  if (ix < 0 || iy < 0 || ixs < 0) {
    return -1;  // query skipped: OOV
  }
  const MatrixRM& m = vectors.matrix();
  const double nx = norm_seq(m, ix);
  const double ny = norm_seq(m, iy);
  const double nxs = norm_seq(m, ixs);
  if (nx == 0.0 || ny == 0.0 || nxs == 0.0) {
    throw NumericError("3CosMul query word has a zero vector");
  }
  const std::int32_t cap = static_cast<std::int32_t>(
      opts.candidate_cap == 0
          ? vectors.size()
          : std::min(opts.candidate_cap, vectors.size()));
  std::int32_t best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::int32_t z = 0; z < cap; ++z) {
    if (z == ix || z == iy || z == ixs) {
      continue;
    }
    const double nz = norm_seq(m, z);
    if (nz == 0.0) {
      continue;
    }
    double cy = dot_seq(m, z, iy) / (nz * ny);
    double cx = dot_seq(m, z, ix) / (nz * nx);
    double cxs = dot_seq(m, z, ixs) / (nz * nxs);
    if (opts.shifted) {
      cy = (cy + 1.0) / 2.0;
      cx = (cx + 1.0) / 2.0;
      cxs = (cxs + 1.0) / 2.0;
    }
    const double score = cy * cxs / (cx + opts.epsilon);
    if (score > best_score) {  // ties keep the lower id
      best_score = score;
      best = z;
    }
  }
  return best;
}

EvalReport evaluate_analogy(const VectorTable& vectors,
                            const AnalogyDataset& ds,
                            const AnalogyOptions& opts) {
  EvalReport report;
  report.dataset = ds.name;
  const std::size_t n = ds.quads.size();
  // 0 = skipped, 1 = correct, 2 = wrong
  std::vector<std::uint8_t> outcome(n, 0);

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const AnalogyQuad& q = ds.quads[i];
      const std::int32_t truth = vectors.find(q.y_star);
      if (truth < 0) {
        continue;
      }
      const std::int32_t pred =
          solve_analogy_3cosmul(q.x, q.y, q.x_star, vectors, opts);
      if (pred < 0) {
        continue;
      }
      outcome[i] = pred == truth ? 1 : 2;
    }
  };

  const int workers = std::max(1, opts.threads);
  if (workers == 1 || n < 2) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n, static_cast<std::size_t>(w) * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) {
        pool.emplace_back(run_range, begin, end);
      }
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  std::size_t correct = 0;
  for (std::uint8_t o : outcome) {
    if (o == 0) {
      ++report.skipped_oov;
    } else {
      ++report.evaluated;
      correct += o == 1;
    }
  }
  if (report.evaluated == 0) {
    throw DataError("dataset '" + ds.name + "': no evaluable quadruplets (" +
                    std::to_string(report.skipped_oov) + " skipped as OOV)");
  }
  report.metric =
      static_cast<double>(correct) / static_cast<double>(report.evaluated);
  return report;
}

std::vector<std::pair<std::int32_t, double>> nearest_neighbors(
    const VectorTable& vectors, std::string_view query, std::size_t k) {
  const std::int32_t q = vectors.find(query);
  if (q < 0) {
    throw DataError("query word not in vocabulary: " + std::string(query));
  }
  const MatrixRM& m = vectors.matrix();
  const double nq = norm_seq(m, q);
  if (nq == 0.0) {
    throw NumericError("query word has a zero vector");
  }
  std::vector<std::pair<std::int32_t, double>> scored;
  scored.reserve(vectors.size());
  for (std::int32_t z = 0; z < static_cast<std::int32_t>(vectors.size()); ++z) {
    if (z == q) {
      continue;
    }
    const double nz = norm_seq(m, z);
    if (nz == 0.0) {
      continue;
    }
    scored.emplace_back(z, dot_seq(m, z, q) / (nz * nq));
  }
  const std::size_t kk = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + kk, scored.end(),
                    [](const auto& a, const auto& b) {
                      if (a.second != b.second) {
                        return a.second > b.second;
                      }
                      return a.first < b.first;
                    });
  scored.resize(kk);
  return scored;
}

}  // namespace ngramvec
