/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include "ngramvec/vectors.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "ngramvec/string_map.hpp"

namespace ngramvec {

static_assert(std::endian::native == std::endian::little,
              "binary vector files are little-endian");

VectorTable::VectorTable(std::vector<std::string> words, MatrixRM vecs)
    : words_(std::move(words)), vecs_(std::move(vecs)) {
  if (static_cast<Eigen::Index>(words_.size()) != vecs_.rows()) {
    throw DataError("vector table: word count does not match matrix rows");
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto [it, inserted] =
        index_.emplace(words_[i], static_cast<std::int32_t>(i));
    if (!inserted) {
      throw VectorFileError(VectorFileError::Kind::kDuplicateSurface,
                            "duplicate surface: " + words_[i]);
    }
  }
}

std::int32_t VectorTable::id(std::string_view surface) const {
  auto it = index_.find(surface);
  return it == index_.end() ? -1 : it->second;
}

std::int32_t VectorTable::find(std::string_view surface) const {
  std::int32_t i = id(surface);
  if (i >= 0) {
    return i;
  }
  std::string lowered(surface);
  for (char& c : lowered) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return id(lowered);
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(VectorFileError::Kind kind, const std::string& msg) {
  throw VectorFileError(kind, msg);
}

}  // namespace

void save_vectors(const VectorTable& table, const std::string& path,
                  VectorFormat format) {
  if (table.size() == 0) {
    throw DataError("refusing to save an empty vector table");
  }
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) {
    fail(VectorFileError::Kind::kIo, "cannot write vector file: " + path);
  }
  const auto& m = table.matrix();
  std::fprintf(f.get(), "%zu %ld\n", table.size(), static_cast<long>(m.cols()));
  if (format == VectorFormat::kText) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::fputs(table.word(static_cast<std::int32_t>(r)).c_str(), f.get());
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        std::fprintf(f.get(), " %.6g", static_cast<double>(m(r, c)));
      }
      std::fputc('\n', f.get());
    }
  } else {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const std::string& w = table.word(static_cast<std::int32_t>(r));
      std::fwrite(w.data(), 1, w.size(), f.get());
      std::fputc(' ', f.get());
      std::fwrite(m.row(r).data(), sizeof(float),
                  static_cast<std::size_t>(m.cols()), f.get());
    }
  }
  if (std::ferror(f.get())) {
    fail(VectorFileError::Kind::kIo, "write error on: " + path);
  }
}

namespace {

// Numeric text fields contain only these bytes; anything else after the first
// surface means the payload is binary.
bool numeric_charset(std::string_view s) {
  for (char c : s) {
    if (std::strchr("0123456789+-.eE naif", c) == nullptr) {
      return false;
    }
  }
  return true;
}

float parse_component(const std::string& tok, std::size_t record) {
  try {
    std::size_t used = 0;
    const float v = std::stof(tok, &used);
    if (used != tok.size()) {
      throw std::invalid_argument(tok);
    }
    return v;
  } catch (const std::exception&) {
    fail(VectorFileError::Kind::kDimensionMismatch,
         "record " + std::to_string(record) + ": bad component '" + tok + "'");
  }
}

VectorTable finish(std::vector<std::string> words, MatrixRM m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!std::isfinite(m(r, c))) {
        fail(VectorFileError::Kind::kNonFinite,
             "non-finite component in record for '" +
                 words[static_cast<std::size_t>(r)] + "'");
      }
    }
  }
  return VectorTable(std::move(words), std::move(m));
}

VectorTable load_text(std::istream& in, std::size_t vocab, Eigen::Index dim) {
  std::vector<std::string> words;
  words.reserve(vocab);
  MatrixRM m(vocab, dim);
  std::string line;
  std::size_t r = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.peek() == EOF) {
      break;
    }
    if (r >= vocab) {
      fail(VectorFileError::Kind::kCountMismatch,
           "more records than the header announced");
    }
    std::istringstream fields(line);
    std::string surface;
    fields >> surface;
    words.push_back(surface);
    std::string tok;
    Eigen::Index c = 0;
    while (fields >> tok) {
      if (c >= dim) {
        fail(VectorFileError::Kind::kDimensionMismatch,
             "record " + std::to_string(r) + ": more than " +
                 std::to_string(dim) + " components");
      }
      m(static_cast<Eigen::Index>(r), c++) = parse_component(tok, r);
    }
    if (c != dim) {
      fail(VectorFileError::Kind::kDimensionMismatch,
           "record " + std::to_string(r) + ": expected " +
               std::to_string(dim) + " components, got " + std::to_string(c));
    }
    ++r;
  }
  if (r != vocab) {
    fail(VectorFileError::Kind::kCountMismatch,
         "header announced " + std::to_string(vocab) + " records, found " +
             std::to_string(r));
  }
  return finish(std::move(words), std::move(m));
}

VectorTable load_binary(std::istream& in, std::size_t vocab, Eigen::Index dim) {
  std::vector<std::string> words;
  words.reserve(vocab);
  MatrixRM m(vocab, dim);
  for (std::size_t r = 0; r < vocab; ++r) {
    int ch = in.get();
    // Tolerate word2vec-style record separators before the surface.
    while (ch == '\n' || ch == '\r' || ch == ' ') {
      ch = in.get();
    }
    std::string surface;
    while (ch != EOF && ch != ' ') {
      surface.push_back(static_cast<char>(ch));
      ch = in.get();
    }
    if (ch == EOF) {
      fail(VectorFileError::Kind::kCountMismatch,
           "unexpected end of file after " + std::to_string(r) + " records");
    }
    in.read(reinterpret_cast<char*>(m.row(static_cast<Eigen::Index>(r)).data()),
            static_cast<std::streamsize>(sizeof(float)) * dim);
    if (in.gcount() != static_cast<std::streamsize>(sizeof(float)) * dim) {
      fail(VectorFileError::Kind::kCountMismatch,
           "unexpected end of file inside record " + std::to_string(r));
    }
    words.push_back(std::move(surface));
  }
  int trailing = in.get();
  while (trailing == '\n' || trailing == '\r' || trailing == ' ') {
    trailing = in.get();
  }
  if (trailing != EOF) {
    fail(VectorFileError::Kind::kCountMismatch,
         "trailing data after the announced record count");
  }
  return finish(std::move(words), std::move(m));
}

}  // namespace

VectorTable load_vectors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(VectorFileError::Kind::kIo, "cannot open vector file: " + path);
  }
  std::string header;
  if (!std::getline(in, header)) {
    fail(VectorFileError::Kind::kBadHeader, "missing header line");
  }
  std::uint64_t vocab = 0;
  long dim = 0;
  char extra = 0;
  if (std::sscanf(header.c_str(), "%lu %ld %c", &vocab, &dim, &extra) != 2 ||
      vocab == 0 || dim <= 0) {
    fail(VectorFileError::Kind::kBadHeader,
         "header must be '<vocab> <dim>', got: '" + header + "'");
  }

  // Sniff the first record: a text record holds nothing but numeric fields
  // between the surface and the newline.
  const std::streampos payload = in.tellg();
  std::string first_line;
  std::getline(in, first_line);
  bool text = false;
  const std::size_t space = first_line.find(' ');
  if (space != std::string::npos) {
    text = numeric_charset(
        std::string_view(first_line).substr(space + 1));
  }
  in.clear();
  in.seekg(payload);
  return text ? load_text(in, vocab, dim)
              : load_binary(in, vocab, static_cast<Eigen::Index>(dim));
}

}  // namespace ngramvec
