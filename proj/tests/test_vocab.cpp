#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ngramvec/errors.hpp"
#include "ngramvec/vocab.hpp"

using namespace ngramvec;

TEST_CASE("build_vocabulary counts and orders") {
  std::istringstream corpus("a a b\n");
  const Vocabulary v = Vocabulary::build(corpus, 1, 10);
  REQUIRE(v.size() == 2);
  CHECK(v.surface(0) == "a");
  CHECK(v.count(0) == 2);
  CHECK(v.surface(1) == "b");
  CHECK(v.count(1) == 1);
  CHECK(v.total_tokens() == 3);
  CHECK(v.id("a") == 0);
  CHECK(v.id("b") == 1);
  CHECK(v.id("zzz") == kAbsentId);
}

TEST_CASE("build_vocabulary prunes below min_count but keeps total") {
  std::istringstream corpus("a a b\n");
  const Vocabulary v = Vocabulary::build(corpus, 2, 10);
  REQUIRE(v.size() == 1);
  CHECK(v.surface(0) == "a");
  CHECK(v.total_tokens() == 3);
}

TEST_CASE("build_vocabulary truncates to the most frequent words") {
  std::istringstream corpus("a a b b b c\n");
  const Vocabulary v = Vocabulary::build(corpus, 1, 2);
  REQUIRE(v.size() == 2);
  CHECK(v.surface(0) == "b");
  CHECK(v.count(0) == 3);
  CHECK(v.surface(1) == "a");
  CHECK(v.count(1) == 2);
}

TEST_CASE("build_vocabulary breaks count ties by first occurrence") {
  std::istringstream corpus("z q z q p\n");
  const Vocabulary v = Vocabulary::build(corpus, 1, 10);
  CHECK(v.surface(0) == "z");
  CHECK(v.surface(1) == "q");
  CHECK(v.surface(2) == "p");
}

TEST_CASE("build_vocabulary rejects an empty corpus") {
  std::istringstream corpus("\n\n");
  CHECK_THROWS_AS(Vocabulary::build(corpus, 1, 10), DataError);
}

TEST_CASE("build_vocabulary is deterministic for a fixed stream") {
  const std::string text = "the cat sat on the mat\nthe dog sat\n";
  std::istringstream c1(text), c2(text);
  const Vocabulary v1 = Vocabulary::build(c1, 1, 100);
  const Vocabulary v2 = Vocabulary::build(c2, 1, 100);
  REQUIRE(v1.size() == v2.size());
  for (std::size_t i = 0; i < v1.size(); ++i) {
    CHECK(v1.surface(static_cast<std::int32_t>(i)) ==
          v2.surface(static_cast<std::int32_t>(i)));
  }
}

TEST_CASE("vocabulary dump format") {
  std::istringstream corpus("a a b\n");
  const Vocabulary v = Vocabulary::build(corpus, 1, 10);
  std::ostringstream out;
  v.dump(out);
  CHECK(out.str() == "a\t2\nb\t1\n");
}

TEST_CASE("discard_probability closed form") {
  // f == t sits exactly on the threshold
  CHECK(discard_probability(10, 1000, 0.01) == doctest::Approx(0.0));
  // f == 4t -> 1 - sqrt(1/4)
  CHECK(discard_probability(40, 1000, 0.01) == doctest::Approx(0.5));
  // f < t clamps at zero
  CHECK(discard_probability(5, 1000, 0.01) == 0.0);
  // t = 0 discards everything
  CHECK(discard_probability(1, 1000, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("discard_probability is monotone in frequency") {
  double prev = -1.0;
  for (std::uint64_t c = 1; c <= 1000; c += 7) {
    const double p = discard_probability(c, 1000, 0.01);
    CHECK(p >= prev);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    if (static_cast<double>(c) / 1000.0 > 0.01) {
      CHECK(p > prev);  // strictly increasing beyond the threshold
    }
    prev = p;
  }
}

TEST_CASE("subsample keeps everything when probabilities are zero") {
  std::istringstream corpus("a b c a b c\n");
  const Vocabulary v = Vocabulary::build(corpus, 1, 10);
  std::mt19937 rng(7);
  const std::vector<std::string_view> sent{"a", "b", "c"};
  const SubsampledSentence s = subsample_sentence(sent, v, 1.0, rng);
  REQUIRE(s.kept_ids.size() == 3);
  CHECK(s.origin_positions == std::vector<std::size_t>{0, 1, 2});
  for (std::size_t i = 0; i < s.kept_ids.size(); ++i) {
    CHECK(s.kept_ids[i] == s.original_ids[s.origin_positions[i]]);
  }
}

TEST_CASE("subsample drops OOV tokens but keeps their origin slots") {
  std::istringstream corpus("a a b b\n");
  const Vocabulary v = Vocabulary::build(corpus, 1, 10);
  std::mt19937 rng(7);
  const std::vector<std::string_view> sent{"a", "UNSEEN", "b"};
  const SubsampledSentence s = subsample_sentence(sent, v, 1.0, rng);
  REQUIRE(s.kept_ids.size() == 2);
  CHECK(s.origin_positions == std::vector<std::size_t>{0, 2});
  CHECK(s.original_ids[1] == kAbsentId);
}

TEST_CASE("subsampled sentences always map back into the original") {
  std::istringstream corpus("a a a a b b c\n");
  const Vocabulary v = Vocabulary::build(corpus, 1, 10);
  std::mt19937 rng(123);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<int> word(0, 3);
  const char* words[] = {"a", "b", "c", "zz-oov"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string_view> sent;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      sent.push_back(words[word(rng)]);
    }
    const SubsampledSentence s = subsample_sentence(sent, v, 1e-2, rng);
    REQUIRE(s.original_ids.size() == sent.size());
    std::size_t prev = 0;
    for (std::size_t i = 0; i < s.kept_ids.size(); ++i) {
      if (i > 0) {
        CHECK(s.origin_positions[i] > prev);
      }
      prev = s.origin_positions[i];
      CHECK(s.kept_ids[i] == s.original_ids[s.origin_positions[i]]);
      CHECK(s.kept_ids[i] != kAbsentId);
    }
  }
}

TEST_CASE("subsampling matches the closed form on a Zipf vocabulary") {
  // Monte Carlo: discard rate of the most frequent word within +-2%.
  std::vector<Vocabulary::Entry> entries;
  std::uint64_t total = 0;
  for (int i = 0; i < 50; ++i) {
    const auto count = static_cast<std::uint64_t>(1000000.0 / (i + 1));
    entries.push_back({"w" + std::to_string(i), count});
    total += count;
  }
  const Vocabulary v(std::move(entries), total);
  const double t = 1e-5;
  const double expected = discard_probability(v.count(0), total, t);
  REQUIRE(expected > 0.1);

  std::mt19937 rng(99);
  const std::vector<std::int32_t> sent{0};
  int discarded = 0;
  const int trials = 1000000;
  for (int i = 0; i < trials; ++i) {
    if (subsample_encoded(sent, v, t, rng).kept_ids.empty()) {
      ++discarded;
    }
  }
  const double rate = static_cast<double>(discarded) / trials;
  CHECK(rate == doctest::Approx(expected).epsilon(0.02 / expected));
}
