/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ngramvec/string_map.hpp"

namespace ngramvec {

// Id given to tokens that are not in the vocabulary.
inline constexpr std::int32_t kAbsentId = -1;

/// Token -> dense id map with counts, ordered by descending count
/// (ties by first occurrence). Immutable once built; safe to share
/// across training workers.
class Vocabulary {
 public:
  struct Entry {
    std::string surface;
    std::uint64_t count = 0;
  };

  Vocabulary() = default;

  // `total_tokens` must count every corpus token seen during counting,
  // including occurrences of words later pruned away.
  Vocabulary(std::vector<Entry> entries, std::uint64_t total_tokens);

  /// Counts whitespace-separated tokens, one sentence per line, then prunes
  /// below `min_count` and keeps at most `max_vocab_size` most frequent words.
  static Vocabulary build(std::istream& corpus, std::uint64_t min_count,
                          std::size_t max_vocab_size);
  static Vocabulary build_from_file(const std::string& path,
                                    std::uint64_t min_count,
                                    std::size_t max_vocab_size);

  std::int32_t id(std::string_view surface) const;
  const std::string& surface(std::int32_t id) const {
    return entries_[static_cast<std::size_t>(id)].surface;
  }
  std::uint64_t count(std::int32_t id) const {
    return entries_[static_cast<std::size_t>(id)].count;
  }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t total_tokens() const { return total_tokens_; }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Debug dump: one `surface<TAB>count` line per entry, descending count.
  void dump(std::ostream& out) const;

 private:
  std::vector<Entry> entries_;
  StringMap<std::int32_t> index_;
  std::uint64_t total_tokens_ = 0;

  void rebuild_index();
};

/// P(discard) = max(0, 1 - sqrt(t / f)) with f = count / total_tokens.
/// Zero at or below the threshold frequency, strictly increasing above it.
double discard_probability(std::uint64_t count, std::uint64_t total_tokens,
                           double t);

/// A sentence after frequent-word subsampling, keeping the map back to the
/// original token positions so n-grams can be read off the original sequence.
struct SubsampledSentence {
  std::vector<std::int32_t> kept_ids;
  std::vector<std::size_t> origin_positions;   // strictly increasing
  std::vector<std::int32_t> original_ids;      // kAbsentId marks OOV positions
};

/// Encodes `tokens` against `vocab` and independently discards each in-vocab
/// token with discard_probability(count, total, t). OOV tokens never reach
/// kept_ids but stay in original_ids as absent markers.
SubsampledSentence subsample_sentence(std::span<const std::string_view> tokens,
                                      const Vocabulary& vocab, double t,
                                      std::mt19937& rng);

/// Same, over an already id-encoded sentence (absent = kAbsentId).
SubsampledSentence subsample_encoded(std::span<const std::int32_t> ids,
                                     const Vocabulary& vocab, double t,
                                     std::mt19937& rng);

/// Allocation-free variant for the training loop; reuses `out`'s capacity.
void subsample_encoded_into(std::span<const std::int32_t> ids,
                            const Vocabulary& vocab, double t,
                            std::mt19937& rng, SubsampledSentence& out);

/// Splits on single spaces / runs of whitespace; no other normalization.
std::vector<std::string_view> split_tokens(std::string_view line);

}  // namespace ngramvec
