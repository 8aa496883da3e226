#include <doctest.h>

#include <cmath>
#include <sstream>

#include "emoarc/embeddings.hpp"
#include "emoarc/errors.hpp"
#include "test_support.hpp"

using namespace emoarc;

namespace {

EmbeddingTable parse(const std::string& text) {
  std::istringstream in(text);
  return parse_embeddings(in);
}

const EmbeddingTable& vectors() {
  static const auto t = load_embeddings(testsupport::data("emotion_vectors.txt"));
  return t;
}

// Cosine computed in long double straight from the file rows.
long double reference_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  return dot / std::sqrt(na * nb);
}

}  // namespace

TEST_CASE("parse a small table") {
  auto t = parse("happy 1 0 0\nsad 0 1.5 -2\n");
  CHECK(t.size() == 2);
  CHECK(t.dimension() == 3);
  REQUIRE(t.find("sad"));
  CHECK(*t.find("sad") == std::vector<double>{0, 1.5, -2});
  CHECK_FALSE(t.find("angry"));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("happy 1 0 0\nsad 0 1\n"), DimensionMismatch);
  try {
    parse("happy 1 0 0\n\nsad 0 1\n");
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse("happy 1 x 0\n"), ParseError);
  CHECK_THROWS_AS(parse("happy\n"), ParseError);
  CHECK_THROWS_AS(load_embeddings("/nonexistent/vectors.txt"), IoFailure);
}

TEST_CASE("empty input gives an empty table") {
  auto t = parse("");
  CHECK(t.empty());
  CHECK_FALSE(phrase_vector("happy", t));
  CHECK(phrase_similarity("happy", "happy", t) == 0.0);
}

TEST_CASE("first occurrence of a word wins") {
  auto t = parse("happy 1 0\nhappy 0 1\n");
  CHECK(t.size() == 1);
  CHECK(*t.find("happy") == std::vector<double>{1, 0});
}

TEST_CASE("phrase vectors average known words") {
  auto t = parse("bright 1 0\nhappy 0 2\n");
  auto v = phrase_vector("Bright, happy!", t);
  REQUIRE(v);
  CHECK((*v)[0] == doctest::Approx(0.5));
  CHECK((*v)[1] == doctest::Approx(1.0));
  auto only = phrase_vector("happy zebra", t);
  REQUIRE(only);
  CHECK(*only == std::vector<double>{0, 2});
  CHECK_FALSE(phrase_vector("zebra", t));
}

TEST_CASE("similarity edge values") {
  auto t = parse("x 1 0\ny 0 3\nz -1 0\nzero 0 0\n");
  CHECK(phrase_similarity("x", "x", t) == 1.0);
  CHECK(phrase_similarity("x", "y", t) == 0.0);
  CHECK(phrase_similarity("x", "z", t) == 0.0);  // clamped
  CHECK(phrase_similarity("x", "zero", t) == 0.0);
  CHECK(phrase_similarity("x", "unknown", t) == 0.0);
}

TEST_CASE("similarity against an independent computation") {
  const auto& t = vectors();
  REQUIRE(t.find("joyful"));
  REQUIRE(t.find("happy"));
  const auto expected = reference_cosine(*t.find("joyful"), *t.find("happy"));
  CHECK(expected > 0.5L);
  CHECK(phrase_similarity("joyful", "happy", t) == doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
}

TEST_CASE("similarity is symmetric and bounded") {
  const auto& t = vectors();
  const char* words[] = {"joy", "anger", "afraid", "happy", "sad", "furious", "calm", "the cat", "very sad"};
  for (const char* a : words) {
    for (const char* b : words) {
      const double s = phrase_similarity(a, b, t);
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
      CHECK(s == doctest::Approx(phrase_similarity(b, a, t)).epsilon(1e-15));
    }
  }
}
