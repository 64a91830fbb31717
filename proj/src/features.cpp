/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include "ngramvec/features.hpp"

#include <string>

namespace ngramvec {

std::uint32_t hash_bytes(std::string_view data) {
  std::uint32_t h = kFnvOffsetBasis;
  for (unsigned char b : data) {
    h ^= b;
    h *= 16777619u;
  }
  return h;
}

namespace {

// Start offsets of the Unicode scalar values in a UTF-8 string, plus the end
// offset as a sentinel. Continuation bytes are 10xxxxxx.
void char_starts(std::string_view s, std::vector<std::size_t>& out) {
  out.clear();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      out.push_back(i);
    }
  }
  out.push_back(s.size());
}

template <typename Emit>
void enumerate_char_ngrams(std::string_view word, int min_n, int max_n,
                           Emit&& emit) {
  std::string wrapped;
  wrapped.reserve(word.size() + 2);
  wrapped.push_back('<');
  wrapped.append(word);
  wrapped.push_back('>');

  std::vector<std::size_t> starts;
  char_starts(wrapped, starts);
  const std::size_t nchars = starts.size() - 1;
  for (std::size_t i = 0; i < nchars; ++i) {
    const std::size_t max_len = std::min<std::size_t>(max_n, nchars - i);
    for (std::size_t n = static_cast<std::size_t>(min_n); n <= max_len; ++n) {
      if (i == 0 && n == nchars) {
        continue;  // the full wrapped token duplicates the unigram
      }
      emit(std::string_view(wrapped).substr(starts[i], starts[i + n] - starts[i]));
    }
  }
}

}  // namespace

std::vector<std::uint32_t> char_ngrams(std::string_view word, int min_n,
                                       int max_n, const IndexLayout& layout) {
  std::vector<std::uint32_t> rows;
  enumerate_char_ngrams(word, min_n, max_n, [&](std::string_view ngram) {
    rows.push_back(layout.char_begin() + hash_bytes(ngram) % layout.char_bucket);
  });
  return rows;
}

std::vector<std::string> char_ngram_strings(std::string_view word, int min_n,
                                            int max_n) {
  std::vector<std::string> ngrams;
  enumerate_char_ngrams(word, min_n, max_n, [&](std::string_view ngram) {
    ngrams.emplace_back(ngram);
  });
  return ngrams;
}

void append_word_ngrams(std::span<const std::string_view> surfaces,
                        std::span<const std::int32_t> ids, int n_max,
                        const IndexLayout& layout,
                        std::vector<std::uint32_t>& out, std::string& key) {
  const std::size_t len = surfaces.size();
  for (std::size_t i = 0; i < len; ++i) {
    if (ids[i] < 0) {
      continue;
    }
    key.assign(surfaces[i]);
    const std::size_t last = std::min(len, i + static_cast<std::size_t>(n_max));
    for (std::size_t j = i + 1; j < last; ++j) {
      if (ids[j] < 0) {
        break;  // an absent position blocks every n-gram across it
      }
      key.push_back(' ');
      key.append(surfaces[j]);
      out.push_back(layout.word_begin() + hash_bytes(key) % layout.word_bucket);
    }
  }
}

std::vector<std::uint32_t> word_ngrams(std::span<const std::string_view> surfaces,
                                       std::span<const std::int32_t> ids,
                                       int n_max, const IndexLayout& layout) {
  std::vector<std::uint32_t> out;
  std::string key;
  append_word_ngrams(surfaces, ids, n_max, layout, out, key);
  return out;
}

void dropout_range(std::vector<std::uint32_t>& v, std::size_t begin,
                   std::size_t k, std::mt19937& rng) {
  const std::size_t n = v.size() - begin;
  if (k == 0 || n == 0) {
    return;
  }
  if (k >= n) {
    v.resize(begin);
    return;
  }
  // Partial Fisher-Yates over positions picks k distinct victims uniformly.
  static thread_local std::vector<std::uint32_t> positions;
  positions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    positions[i] = static_cast<std::uint32_t>(i);
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(positions[i], positions[pick(rng)]);
  }
  static thread_local std::vector<bool> removed;
  removed.assign(n, false);
  for (std::size_t i = 0; i < k; ++i) {
    removed[positions[i]] = true;
  }
  std::size_t w = begin;
  for (std::size_t i = 0; i < n; ++i) {
    if (!removed[i]) {
      v[w++] = v[begin + i];
    }
  }
  v.resize(w);
}

std::vector<std::uint32_t> dropout_ngrams(std::vector<std::uint32_t> set,
                                          std::size_t k, std::mt19937& rng) {
  dropout_range(set, 0, k, rng);
  return set;
}

}  // namespace ngramvec
