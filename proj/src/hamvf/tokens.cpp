#include "hamvf/tokens.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <json.hpp>

#include "hamvf/error.hpp"

namespace hamvf {

std::string token_to_string(const Token& t) { return term_to_string(t); }

std::size_t TokenVector::popcount() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> TokenVector::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size_; ++i)
    if (test(i)) out.push_back(i);
  return out;
}

std::size_t hamming(const TokenVector& a, const TokenVector& b) {
  if (a.size_ != b.size_)
    throw ValidationError("token vector length mismatch: " + std::to_string(a.size_) + " vs " + std::to_string(b.size_));
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) n += static_cast<std::size_t>(std::popcount(a.words_[i] ^ b.words_[i]));
  return n;
}

TokenVocab::TokenVocab(BasisSpec spec) : spec_(std::move(spec)), shapes_(spec_.shapes()) {
  for (const auto& c : spec_.delta)
    if (!c.is_zero()) nonzero_.push_back(c);
  tokens_.reserve(shapes_.size() * nonzero_.size());
  for (const auto& shape : shapes_)
    for (const auto& c : nonzero_) tokens_.push_back({c, shape});
}

std::optional<std::size_t> TokenVocab::index_of(const Token& t) const {
  auto s = std::lower_bound(shapes_.begin(), shapes_.end(), t.shape);
  if (s == shapes_.end() || *s != t.shape) return std::nullopt;
  auto c = std::lower_bound(nonzero_.begin(), nonzero_.end(), t.coeff);
  if (c == nonzero_.end() || *c != t.coeff) return std::nullopt;
  return static_cast<std::size_t>(s - shapes_.begin()) * nonzero_.size() + static_cast<std::size_t>(c - nonzero_.begin());
}

TokenVector TokenVocab::vectorize(const HamFunction& f) const {
  TokenVector v(tokens_.size());
  for (const auto& term : f.terms()) {
    auto i = index_of(term);
    if (!i) throw ValidationError("token " + token_to_string(term) + " is not in the " + spec_.name() + " vocabulary");
    v.set(*i);
  }
  return v;
}

HamFunction TokenVocab::from_indices(const std::vector<std::size_t>& indices) const {
  std::vector<Term> terms;
  terms.reserve(indices.size());
  for (auto i : indices) {
    if (i >= tokens_.size()) throw ValidationError("token index " + std::to_string(i) + " out of range");
    terms.push_back(tokens_[i]);
  }
  return HamFunction(std::move(terms));
}

HamFunction TokenVocab::detokenize(const TokenVector& v) const {
  if (v.size() != tokens_.size()) throw ValidationError("token vector length mismatch");
  return from_indices(v.indices());
}

std::string TokenVocab::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& t : tokens_) out.push_back({{"coeff", t.coeff.to_fraction_string()}, {"shape", t.shape.to_string()}});
  return out.dump();
}

TokenVocab build_vocab(const BasisSpec& spec) { return TokenVocab(spec); }

double distance_euclid(const TokenVector& a, const TokenVector& b) {
  return std::sqrt(static_cast<double>(hamming(a, b)));
}

namespace {

bool token_less(const Token& a, const Token& b) {
  if (a.shape != b.shape) return a.shape < b.shape;
  return a.coeff < b.coeff;
}

std::vector<Token> as_set(std::vector<Token> v) {
  std::sort(v.begin(), v.end(), token_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::pair<std::size_t, std::size_t> intersection_union(const std::vector<Token>& a, const std::vector<Token>& b) {
  auto sa = as_set(a);
  auto sb = as_set(b);
  std::vector<Token> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common), token_less);
  return {common.size(), sa.size() + sb.size() - common.size()};
}

}  // namespace

double distance_euclid(const std::vector<Token>& a, const std::vector<Token>& b) {
  auto [common, all] = intersection_union(a, b);
  return std::sqrt(static_cast<double>(all - common));
}

double distance_jaccard(const std::vector<Token>& a, const std::vector<Token>& b) {
  auto [common, all] = intersection_union(a, b);
  if (all == 0) return 0.0;
  return 1.0 - static_cast<double>(common) / static_cast<double>(all);
}

std::size_t distance_levenshtein(const std::vector<Token>& a, const std::vector<Token>& b) {
  // single-row DP over b
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t above = row[j];
      std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::vector<Token> written_tokens(const Expr& e) {
  std::vector<Expr> summands;
  if (e.kind() == Expr::Kind::add)
    summands.assign(e.children().begin(), e.children().end());
  else
    summands.push_back(e);
  std::vector<Token> out;
  out.reserve(summands.size());
  for (const auto& s : summands) {
    auto form = expand_linear(s);
    if (!form || form->size() != 1)
      throw ValidationError("summand '" + s.to_string() + "' is not a single basis term");
    const auto& [key, coeff] = *form->begin();
    if (key.trig >= 0) {
      out.push_back({coeff, TermShape::trig(key.trig < 2 ? TrigFn::sin : TrigFn::cos, key.trig % 2 == 0 ? Var::x : Var::y)});
    } else {
      if (key.h + key.k == 0) throw ValidationError("constant summand is not a token");
      out.push_back({coeff, TermShape::monomial(key.h, key.k)});
    }
  }
  return out;
}

}  // namespace hamvf
