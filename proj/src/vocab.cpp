/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include "ngramvec/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "ngramvec/errors.hpp"

namespace ngramvec {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
    std::size_t start = i;
    while (i < n && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
      ++i;
    }
    if (i > start) {
      out.push_back(line.substr(start, i - start));
    }
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<Entry> entries, std::uint64_t total_tokens)
    : entries_(std::move(entries)), total_tokens_(total_tokens) {
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].count > entries_[i - 1].count) {
      throw DataError("vocabulary entries must be ordered by descending count");
    }
  }
  rebuild_index();
}

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto [it, inserted] =
        index_.emplace(entries_[i].surface, static_cast<std::int32_t>(i));
    if (!inserted) {
      throw DataError("duplicate surface in vocabulary: " +
                      entries_[i].surface);
    }
  }
}

std::int32_t Vocabulary::id(std::string_view surface) const {
  auto it = index_.find(surface);
  return it == index_.end() ? kAbsentId : it->second;
}

Vocabulary Vocabulary::build(std::istream& corpus, std::uint64_t min_count,
                             std::size_t max_vocab_size) {
  if (min_count < 1 || max_vocab_size < 1) {
    throw ConfigError("build_vocabulary requires min_count >= 1 and "
                      "max_vocab_size >= 1");
  }
  struct Counted {
    std::uint64_t count = 0;
    std::uint64_t first_seen = 0;
  };
  std::unordered_map<std::string, Counted> counts;
  std::uint64_t total = 0;
  std::string line;
  while (std::getline(corpus, line)) {
    for (std::string_view tok : split_tokens(line)) {
      auto [it, inserted] = counts.try_emplace(std::string(tok));
      if (inserted) {
        it->second.first_seen = total;
      }
      ++it->second.count;
      ++total;
    }
  }
  if (total == 0) {
    throw DataError("empty corpus: no tokens found");
  }

  std::vector<std::pair<std::string, Counted>> survivors;
  survivors.reserve(counts.size());
  for (auto& [surface, c] : counts) {
    if (c.count >= min_count) {
      survivors.emplace_back(surface, c);
    }
  }
  std::sort(survivors.begin(), survivors.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) {
      return a.second.count > b.second.count;
    }
    return a.second.first_seen < b.second.first_seen;
  });
  if (survivors.size() > max_vocab_size) {
    survivors.resize(max_vocab_size);
  }

  std::vector<Entry> entries;
  entries.reserve(survivors.size());
  for (auto& [surface, c] : survivors) {
    entries.push_back(Entry{std::move(surface), c.count});
  }
  return Vocabulary(std::move(entries), total);
}

Vocabulary Vocabulary::build_from_file(const std::string& path,
                                       std::uint64_t min_count,
                                       std::size_t max_vocab_size) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open corpus file: " + path);
  }
  return build(in, min_count, max_vocab_size);
}

void Vocabulary::dump(std::ostream& out) const {
  for (const Entry& e : entries_) {
    out << e.surface << '\t' << e.count << '\n';
  }
}

double discard_probability(std::uint64_t count, std::uint64_t total_tokens,
                           double t) {
  const double f =
      static_cast<double>(count) / static_cast<double>(total_tokens);
  const double p = 1.0 - std::sqrt(t / f);
  return p > 0.0 ? p : 0.0;
}

void subsample_encoded_into(std::span<const std::int32_t> ids,
                            const Vocabulary& vocab, double t,
                            std::mt19937& rng, SubsampledSentence& out) {
  out.kept_ids.clear();
  out.origin_positions.clear();
  out.original_ids.assign(ids.begin(), ids.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    const std::int32_t id = ids[pos];
    if (id == kAbsentId) {
      continue;
    }
    const double p =
        discard_probability(vocab.count(id), vocab.total_tokens(), t);
    if (p > 0.0 && unit(rng) < p) {
      continue;
    }
    out.kept_ids.push_back(id);
    out.origin_positions.push_back(pos);
  }
}

SubsampledSentence subsample_encoded(std::span<const std::int32_t> ids,
                                     const Vocabulary& vocab, double t,
                                     std::mt19937& rng) {
  SubsampledSentence out;
  subsample_encoded_into(ids, vocab, t, rng, out);
  return out;
}

SubsampledSentence subsample_sentence(std::span<const std::string_view> tokens,
                                      const Vocabulary& vocab, double t,
                                      std::mt19937& rng) {
  std::vector<std::int32_t> ids;
  ids.reserve(tokens.size());
  for (std::string_view tok : tokens) {
    ids.push_back(vocab.id(tok));
  }
  return subsample_encoded(ids, vocab, t, rng);
}

}  // namespace ngramvec
