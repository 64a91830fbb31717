// Test-side reference implementations, independent of the library code they
// check: a bytewise FNV-1a, a counting-based rank correlation, an exhaustive
// 3CosMul scorer and a finite-difference loss gradient.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace oracle {

inline std::uint32_t fnv1a(const std::string& data) {
  std::uint32_t h = 2166136261u;
  for (char c : data) {
    h = (h ^ static_cast<unsigned char>(c)) * 16777619u;
  }
  return h;
}

// Fractional ranks via pairwise counting: rank = #smaller + (#equal + 1) / 2.
inline std::vector<double> counting_ranks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t smaller = 0;
    std::size_t equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      smaller += v[j] < v[i];
      equal += v[j] == v[i];
    }
    ranks[i] = static_cast<double>(smaller) +
               (static_cast<double>(equal) + 1.0) / 2.0;
  }
  return ranks;
}

inline double rank_pearson(const std::vector<double>& a,
                           const std::vector<double>& b) {
  const std::vector<double> ra = counting_ranks(a);
  const std::vector<double> rb = counting_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  return cov / std::sqrt(va * vb);
}

using MatrixF =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline double naive_cosine(const MatrixF& m, int a, int b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    dot += static_cast<double>(m(a, i)) * static_cast<double>(m(b, i));
    na += static_cast<double>(m(a, i)) * static_cast<double>(m(a, i));
    nb += static_cast<double>(m(b, i)) * static_cast<double>(m(b, i));
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Exhaustive argmax of cos(z,y)*cos(z,x*) / (cos(z,x)+eps), excluding the
// query ids, ties resolved toward the lower id.
inline int brute_3cosmul(const MatrixF& m, int ix, int iy, int ixs, double eps,
                         bool shifted, int cap) {
  int best = -1;
  double best_score = -1e300;
  for (int z = 0; z < cap; ++z) {
    if (z == ix || z == iy || z == ixs) continue;
    double cy = naive_cosine(m, z, iy);
    double cx = naive_cosine(m, z, ix);
    double cxs = naive_cosine(m, z, ixs);
    if (shifted) {
      cy = (cy + 1.0) / 2.0;
      cx = (cx + 1.0) / 2.0;
      cxs = (cxs + 1.0) / 2.0;
    }
    const double score = cy * cxs / (cx + eps);
    if (score > best_score) {
      best_score = score;
      best = z;
    }
  }
  return best;
}

// Negative-sampling loss recomputed from scratch on double matrices.
inline double ns_loss(const Eigen::MatrixXd& input,
                      const Eigen::MatrixXd& output,
                      const std::vector<std::uint32_t>& rows,
                      std::uint32_t denom, int target,
                      const std::vector<std::int32_t>& negatives) {
  Eigen::VectorXd ctx = Eigen::VectorXd::Zero(input.cols());
  for (std::uint32_t r : rows) {
    ctx += input.row(r);
  }
  ctx /= static_cast<double>(denom);
  auto softplus = [](double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  };
  double loss = softplus(-output.row(target).dot(ctx));
  for (std::int32_t neg : negatives) {
    loss += softplus(output.row(neg).dot(ctx));
  }
  return loss;
}

// RAII scratch directory under the system temp root.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path = std::filesystem::temp_directory_path() /
           (tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace oracle
