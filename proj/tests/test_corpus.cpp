#include <doctest.h>

#include <set>

#include "hamvf/corpus.hpp"
#include "hamvf/error.hpp"
#include "support.hpp"

using hamvf::BasisSpec;
using hamvf::BigInt;
using hamvf::Corpus;

namespace {

struct Small {
  const char* basis;
  const char* delta;
  long expected;
};
// every spec with l^S <= 10^6
const Small kSmall[] = {{"b1", "d3", 8},    {"b1", "d5", 24},     {"b2", "d3", 242},    {"b1", "d7", 48},
                        {"b1", "d9", 80},   {"b2", "d5", 3124},   {"b3", "d3", 19682},  {"b2*", "d3", 19682}};

// Independent count: walk every coefficient tuple and keep the non-zero ones.
long brute_force_count(std::size_t shapes, std::size_t l) {
  std::vector<std::size_t> digits(shapes, 0);
  long count = 0;
  for (;;) {
    bool nonzero = false;
    for (auto d : digits) nonzero |= d != 0;
    count += nonzero;
    std::size_t i = 0;
    while (i < shapes && ++digits[i] == l) digits[i++] = 0;
    if (i == shapes) return count;
  }
}

}  // namespace

TEST_CASE("shape order") {
  auto shapes = hamvf::basis_shapes(2, true);
  std::vector<std::string> names;
  for (const auto& s : shapes) names.push_back(s.to_string());
  CHECK(names == std::vector<std::string>{"x", "y", "x^2", "x*y", "y^2", "sin(x)", "sin(y)", "cos(x)", "cos(y)"});
  CHECK(hamvf::monomial_shape_count(3) == 9);
  for (std::size_t i = 0; i < shapes.size(); ++i) CHECK(shapes[i].rank(2) == i);
}

TEST_CASE("cardinality matches exhaustive enumeration for the small specs") {
  for (const auto& s : kSmall) {
    auto spec = BasisSpec::from_names(s.basis, s.delta, false);
    INFO(spec.name());
    Corpus corpus(spec);
    CHECK(hamvf::cardinality(spec) == s.expected);
    CHECK(brute_force_count(spec.shape_count(), spec.delta.size()) == s.expected);

    std::set<std::string> seen;
    hamvf::CorpusEnumerator it(corpus, 0, corpus.size());
    long n = 0;
    while (auto f = it.next()) {
      CHECK(f->to_string() == corpus.function_at(n).to_string());
      CHECK(corpus.index_of(*f) == n);
      seen.insert(f->to_string());
      ++n;
    }
    CHECK(n == s.expected);
    CHECK(seen.size() == static_cast<std::size_t>(s.expected));
  }
}

TEST_CASE("(B1, delta3) in index order") {
  Corpus corpus(BasisSpec::from_names("b1", "d3", false));
  std::vector<std::string> got;
  for (int i = 0; i < 8; ++i) got.push_back(corpus.function_at(i).to_string());
  CHECK(got == std::vector<std::string>{"-x", "x", "-y", "-x - y", "x - y", "y", "-x + y", "x + y"});
  CHECK_THROWS_AS(corpus.function_at(8), hamvf::ValidationError);
  CHECK_THROWS_AS(corpus.function_at(-1), hamvf::ValidationError);
}

TEST_CASE("big corpora need big integers") {
  auto spec = BasisSpec::from_names("b5", "d9", false);
  BigInt size = hamvf::cardinality(spec);
  CHECK(size > BigInt(std::numeric_limits<std::int64_t>::max()));
  CHECK(hamvf::to_string(size) == hamvf::to_string(boost::multiprecision::pow(BigInt(9), 20) - 1));
  Corpus corpus(spec);
  hamvf::SplitMix64 rng(3);
  for (int i = 0; i < 200; ++i) {
    BigInt j = testing::random_index(rng, size);
    CHECK(corpus.index_of(corpus.function_at(j)) == j);
  }
  CHECK(corpus.function_at(size - 1).size() == 20);
}

TEST_CASE("shards concatenate to the full enumeration") {
  Corpus corpus(BasisSpec::from_names("b2", "d3", false));
  const BigInt c = corpus.size();
  std::vector<std::string> whole, parts;
  hamvf::CorpusEnumerator all(corpus, 0, c);
  while (auto f = all.next()) whole.push_back(f->to_string());
  for (const auto& [lo, hi] : {std::pair<BigInt, BigInt>{0, c / 2}, {c / 2, c}}) {
    hamvf::CorpusEnumerator part(corpus, lo, hi);
    while (auto f = part.next()) parts.push_back(f->to_string());
  }
  CHECK(whole == parts);
}

TEST_CASE("spec names and validation") {
  CHECK(BasisSpec::from_names("b2*", "d3", false).trig);
  CHECK(BasisSpec::from_names("B2", "D5", true).name() == "b2*-d5");
  for (auto [b, d] : {std::pair{"b0", "d3"}, {"x2", "d3"}, {"b2", "d4"}, {"b2", "d"}, {"b", "d3"}})
    CHECK_THROWS_AS(BasisSpec::from_names(b, d, false), hamvf::ValidationError);
  CHECK_THROWS_AS(BasisSpec::make(2, {hamvf::Rational(1), hamvf::Rational(2)}, false), hamvf::ValidationError);
  auto custom = BasisSpec::make(1, {hamvf::Rational(2), hamvf::Rational(0), hamvf::Rational(-3)}, false);
  CHECK(custom.delta_name == "custom");
  CHECK(hamvf::cardinality(custom) == 8);
  CHECK(Corpus(custom).function_at(7).to_string() == "2*x + 2*y");
  CHECK_THROWS_AS(hamvf::parse_bigint("-1"), hamvf::ValidationError);
  CHECK_THROWS_AS(hamvf::parse_bigint("12a"), hamvf::ValidationError);
}

TEST_CASE("index_of rejects foreign functions") {
  Corpus corpus(BasisSpec::from_names("b2", "d3", false));
  CHECK_THROWS_AS(corpus.index_of(hamvf::HamFunction::parse("x^3")), hamvf::ValidationError);
  CHECK_THROWS_AS(corpus.index_of(hamvf::HamFunction::parse("1/2*x")), hamvf::ValidationError);
  CHECK_THROWS_AS(corpus.index_of(hamvf::HamFunction::parse("sin(x)")), hamvf::ValidationError);
}

TEST_CASE("HamFunction parsing and printing") {
  auto f = hamvf::HamFunction::parse("cos(y) + 1/2*x^2");
  CHECK(f.to_string() == "1/2*x^2 + cos(y)");
  CHECK(hamvf::HamFunction::parse("x*y - x*y + y").to_string() == "y");
  CHECK(hamvf::HamFunction::parse("-sin(x)").to_string() == "-sin(x)");
  CHECK_THROWS_AS(hamvf::HamFunction::parse("x - x"), hamvf::ValidationError);
  CHECK_THROWS_AS(hamvf::HamFunction::parse("x + 1"), hamvf::ValidationError);
  CHECK_THROWS_AS(hamvf::HamFunction::parse("ln(x)"), hamvf::ValidationError);
}
