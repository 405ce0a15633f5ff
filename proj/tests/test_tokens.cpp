#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

#include "hamvf/error.hpp"
#include "hamvf/tokens.hpp"
#include "support.hpp"

using hamvf::BasisSpec;
using hamvf::HamFunction;
using hamvf::TokenVocab;

namespace {

std::vector<hamvf::Token> toks(std::string_view text) { return HamFunction::parse(text).terms(); }

// Plain recursion with memo over suffixes, written independently of the DP.
std::size_t levenshtein_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = std::min({go(i + 1, j) + 1, go(i, j + 1) + 1, go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1)});
    return memo[key] = best;
  };
  return go(0, 0);
}

std::vector<std::string> names(const std::vector<hamvf::Token>& t) {
  std::vector<std::string> out;
  for (const auto& x : t) out.push_back(hamvf::token_to_string(x));
  return out;
}

}  // namespace

TEST_CASE("vocabulary sizes and order") {
  CHECK(TokenVocab(BasisSpec::from_names("b2", "d5", false)).size() == 20);
  CHECK(TokenVocab(BasisSpec::from_names("b2*", "d3", false)).size() == 18);
  TokenVocab v(BasisSpec::from_names("b1", "d3", false));
  REQUIRE(v.size() == 4);
  CHECK(names(v.tokens()) == std::vector<std::string>{"-x", "x", "-y", "y"});
}

TEST_CASE("vocabulary equals the union of all function token sets") {
  for (auto [b, d] : {std::pair{"b1", "d3"}, {"b2", "d5"}, {"b2*", "d3"}}) {
    auto spec = BasisSpec::from_names(b, d, false);
    hamvf::Corpus corpus(spec);
    std::set<std::string> seen;
    hamvf::CorpusEnumerator it(corpus, 0, corpus.size());
    while (auto f = it.next())
      for (const auto& t : f->terms()) seen.insert(hamvf::token_to_string(t));
    auto vocab = names(TokenVocab(spec).tokens());
    CHECK(std::set<std::string>(vocab.begin(), vocab.end()) == seen);
  }
}

TEST_CASE("vocabulary JSON") {
  TokenVocab v(BasisSpec::from_names("b1", "d5", false));
  auto j = nlohmann::json::parse(v.to_json());
  REQUIRE(j.size() == 8);
  CHECK(j[0] == nlohmann::json{{"coeff", "-1/1"}, {"shape", "x"}});
  CHECK(j[1] == nlohmann::json{{"coeff", "-1/2"}, {"shape", "x"}});
  CHECK(j[7] == nlohmann::json{{"coeff", "1/1"}, {"shape", "y"}});
}

TEST_CASE("vectorize") {
  TokenVocab v(BasisSpec::from_names("b2", "d5", false));
  auto bits = v.vectorize(HamFunction::parse("1/2*y^2 + x^2"));
  CHECK(bits.popcount() == 2);
  // index = shape rank * (l - 1) + coefficient rank among {-1, -1/2, 1/2, 1}
  CHECK(bits.indices() == std::vector<std::size_t>{2 * 4 + 3, 4 * 4 + 2});
  CHECK(v.vectorize(HamFunction::parse("-x")).popcount() == 1);
  CHECK_THROWS_AS(v.vectorize(HamFunction::parse("x^3")), hamvf::ValidationError);
  CHECK_THROWS_AS(v.vectorize(HamFunction::parse("1/3*x")), hamvf::ValidationError);
}

TEST_CASE("detokenize inverts vectorize over (B2, delta3)") {
  auto spec = BasisSpec::from_names("b2", "d3", false);
  hamvf::Corpus corpus(spec);
  TokenVocab v(spec);
  int n = 0;
  hamvf::CorpusEnumerator it(corpus, 0, corpus.size());
  while (auto f = it.next()) {
    CHECK(v.detokenize(v.vectorize(*f)) == *f);
    CHECK(v.from_indices(v.vectorize(*f).indices()) == *f);
    ++n;
  }
  CHECK(n == 242);
  CHECK_THROWS_AS(v.detokenize(hamvf::TokenVector(v.size())), hamvf::ValidationError);
  CHECK_THROWS_AS(v.from_indices({0, 1}), hamvf::ValidationError);  // -x and x together
  CHECK_THROWS_AS(v.from_indices({99}), hamvf::ValidationError);
}

TEST_CASE("Euclidean distance") {
  auto a = toks("1/2*x^2 + cos(y)"), b = toks("x^2 + cos(y)");
  CHECK(hamvf::distance_euclid(a, b) == std::sqrt(2.0));
  CHECK(hamvf::distance_euclid(a, a) == 0.0);

  auto spec = BasisSpec::from_names("b3", "d5", true);
  hamvf::Corpus corpus(spec);
  TokenVocab v(spec);
  hamvf::SplitMix64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    auto f = corpus.function_at(testing::random_index(rng, corpus.size()));
    auto g = corpus.function_at(testing::random_index(rng, corpus.size()));
    double d = hamvf::distance_euclid(v.vectorize(f), v.vectorize(g));
    // symmetric difference of the token sets, counted by hand
    std::size_t diff = 0;
    for (const auto& t : f.terms()) diff += std::find(g.terms().begin(), g.terms().end(), t) == g.terms().end();
    for (const auto& t : g.terms()) diff += std::find(f.terms().begin(), f.terms().end(), t) == f.terms().end();
    CHECK(d * d == doctest::Approx(static_cast<double>(diff)).epsilon(1e-12));
    CHECK(d == hamvf::distance_euclid(f.terms(), g.terms()));
    CHECK((d == 0.0) == (f.to_string() == g.to_string()));
  }
  CHECK_THROWS_AS(hamvf::distance_euclid(hamvf::TokenVector(3), hamvf::TokenVector(4)), hamvf::ValidationError);
}

TEST_CASE("Jaccard and Levenshtein on the written-order example") {
  auto h1 = hamvf::parse_expr("x^3 + x*y^2 + x^2*y + y^3");
  auto h2 = hamvf::parse_expr("y^3 + x*y^2 + x^2*y + x^3");
  auto w1 = hamvf::written_tokens(h1), w2 = hamvf::written_tokens(h2);
  CHECK(names(w1) == std::vector<std::string>{"x^3", "x*y^2", "x^2*y", "y^3"});
  CHECK(hamvf::distance_jaccard(w1, w2) == 0.0);
  CHECK(hamvf::distance_levenshtein(w1, w2) == 2);
  CHECK(hamvf::distance_jaccard({}, {}) == 0.0);
  CHECK(hamvf::distance_jaccard(toks("x"), toks("y")) == 1.0);
  CHECK(hamvf::distance_jaccard(toks("x + y"), toks("x")) == 0.5);
  CHECK_THROWS_AS(hamvf::written_tokens(hamvf::parse_expr("x*(x + y)")), hamvf::ValidationError);
}

TEST_CASE("Levenshtein agrees with a recursive oracle") {
  hamvf::SplitMix64 rng(31);
  const auto vocab = TokenVocab(BasisSpec::from_names("b2", "d3", false)).tokens();
  for (int i = 0; i < 500; ++i) {
    std::vector<hamvf::Token> a, b;
    for (std::size_t n = rng.next() % 7; n-- > 0;) a.push_back(vocab[rng.next() % vocab.size()]);
    for (std::size_t n = rng.next() % 7; n-- > 0;) b.push_back(vocab[rng.next() % vocab.size()]);
    CHECK(hamvf::distance_levenshtein(a, b) == levenshtein_oracle(names(a), names(b)));
  }
}
