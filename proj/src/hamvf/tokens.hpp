#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamvf/corpus.hpp"
#include "hamvf/expr.hpp"
#include "hamvf/shape.hpp"

namespace hamvf {

// A signed basis term, e.g. (-1/2, x^2). m and -m are distinct tokens.
using Token = Term;

std::string token_to_string(const Token& t);

// Multi-hot indicator over a vocabulary.
class TokenVector {
 public:
  TokenVector() = default;
  explicit TokenVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t i) const noexcept { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i) noexcept { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  std::size_t popcount() const noexcept;
  std::vector<std::size_t> indices() const;

  // Number of differing positions; throws ValidationError on length mismatch.
  friend std::size_t hamming(const TokenVector& a, const TokenVector& b);
  friend bool operator==(const TokenVector&, const TokenVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// All (b, shape) with b in delta\{0}, ordered by shape then coefficient.
// Index of (b, shape) = rank(shape) * (l-1) + rank(b among nonzero values).
class TokenVocab {
 public:
  explicit TokenVocab(BasisSpec spec);

  const BasisSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  const Token& at(std::size_t i) const { return tokens_.at(i); }

  std::optional<std::size_t> index_of(const Token& t) const;

  // Throws ValidationError on a foreign token.
  TokenVector vectorize(const HamFunction& f) const;
  // Inverse of vectorize; throws ValidationError when the vector is empty or
  // sets two coefficients of one shape.
  HamFunction detokenize(const TokenVector& v) const;
  HamFunction from_indices(const std::vector<std::size_t>& indices) const;

  // [{"coeff": "p/q", "shape": "x^2"}, ...]
  std::string to_json() const;

 private:
  BasisSpec spec_;
  std::vector<Token> tokens_;
  std::vector<TermShape> shapes_;
  std::vector<Rational> nonzero_;
};

TokenVocab build_vocab(const BasisSpec& spec);

// sqrt(sum (a_i - b_i)^2) = sqrt(hamming(a, b)).
double distance_euclid(const TokenVector& a, const TokenVector& b);

// Euclidean distance over the union vocabulary of two token sets; equals
// distance_euclid in any vocabulary containing both.
double distance_euclid(const std::vector<Token>& a, const std::vector<Token>& b);

// 1 - |A n B| / |A u B|; 0 for two empty sets.
double distance_jaccard(const std::vector<Token>& a, const std::vector<Token>& b);

// Edit distance with unit insert/delete/substitute costs.
std::size_t distance_levenshtein(const std::vector<Token>& a, const std::vector<Token>& b);

// Top-level terms of an expression in the order written, each expanded to a
// single token ("x^3 + x*y^2" -> [(1, x^3), (1, x*y^2)]). Throws
// ValidationError when a summand is not a single basis term.
std::vector<Token> written_tokens(const Expr& e);

}  // namespace hamvf
