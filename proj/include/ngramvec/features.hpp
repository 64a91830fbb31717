/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ngramvec {

/// Row layout of the input embedding matrix. Unigrams, char n-grams and word
/// n-grams live in three disjoint index ranges so hashed features can never
/// collide with each other or with vocabulary rows.
struct IndexLayout {
  std::uint32_t vocab_size = 0;
  std::uint32_t char_bucket = 0;  // 0 disables char n-grams
  std::uint32_t word_bucket = 0;  // 0 disables word n-grams

  std::uint32_t char_begin() const { return vocab_size; }
  std::uint32_t word_begin() const { return vocab_size + char_bucket; }
  std::uint32_t rows() const { return vocab_size + char_bucket + word_bucket; }
};

/// 32-bit FNV-1a. Deterministic across runs and platforms.
std::uint32_t hash_bytes(std::string_view data);

inline constexpr std::uint32_t kFnvOffsetBasis = 2166136261u;

/// Char n-grams of the boundary-wrapped word `<w>`, as input-matrix rows in
/// [V, V+B_c). n-gram lengths are counted in Unicode scalar values; lengths
/// outside [min_n, max_n] and the full wrapped form itself are skipped.
std::vector<std::uint32_t> char_ngrams(std::string_view word, int min_n,
                                       int max_n, const IndexLayout& layout);

/// Same, returning the n-gram strings instead of hashed rows.
std::vector<std::string> char_ngram_strings(std::string_view word, int min_n,
                                            int max_n);

/// Word n-grams of orders 2..n_max over a window, as rows in
/// [V+B_c, V+B_c+B_w). `ids` aligns with `surfaces`; n-grams touching an
/// absent (negative-id) position are not emitted. The hash key is the
/// surfaces joined by single spaces.
std::vector<std::uint32_t> word_ngrams(std::span<const std::string_view> surfaces,
                                       std::span<const std::int32_t> ids,
                                       int n_max, const IndexLayout& layout);

/// Removes min(k, size) elements uniformly at random without replacement,
/// preserving the order of the survivors.
std::vector<std::uint32_t> dropout_ngrams(std::vector<std::uint32_t> set,
                                          std::size_t k, std::mt19937& rng);

// Allocation-free variants for the training loop.
void append_word_ngrams(std::span<const std::string_view> surfaces,
                        std::span<const std::int32_t> ids, int n_max,
                        const IndexLayout& layout,
                        std::vector<std::uint32_t>& out, std::string& key);
void dropout_range(std::vector<std::uint32_t>& v, std::size_t begin,
                   std::size_t k, std::mt19937& rng);

}  // namespace ngramvec
