#include "fmwb/ordinal.hpp"

#include <cctype>
#include <utility>

namespace fmwb {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OrdinalError("ordinal coefficient overflow");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OrdinalError("ordinal coefficient overflow");
  return r;
}

}  // namespace

Ordinal Ordinal::natural(std::uint64_t n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back(OrdinalTerm{Ordinal{}, n});
  return o;
}

Ordinal Ordinal::omega() { return omega_power(natural(1)); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coeff) {
  Ordinal o;
  if (coeff > 0) o.terms_.push_back(OrdinalTerm{exponent, coeff});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<OrdinalTerm> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff == 0) throw OrdinalError("zero coefficient in normal form");
    if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent))
      throw OrdinalError("exponents must be strictly decreasing");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

bool Ordinal::is_successor() const {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

std::optional<std::uint64_t> Ordinal::as_natural() const {
  if (terms_.empty()) return 0;
  if (is_finite()) return terms_[0].coeff;
  return std::nullopt;
}

Ordinal Ordinal::leading_exponent() const {
  return terms_.empty() ? Ordinal{} : terms_.front().exponent;
}

Ordinal Ordinal::trailing_exponent() const {
  return terms_.empty() ? Ordinal{} : terms_.back().exponent;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].exponent <=> b.terms_[i].exponent; c != 0) return c;
    if (auto c = a.terms_[i].coeff <=> b.terms_[i].coeff; c != 0) return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += " + ";
    const auto& t = terms_[i];
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coeff);
      continue;
    }
    out += "w";
    if (auto n = t.exponent.as_natural(); n && *n == 1) {
    } else if (n) {
      out += "^" + std::to_string(*n);
    } else {
      out += "^{" + t.exponent.str() + "}";
    }
    if (t.coeff != 1) out += "*" + std::to_string(t.coeff);
  }
  return out;
}

Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const auto& bt = b.terms();
  const Ordinal& lead = bt.front().exponent;
  std::vector<OrdinalTerm> out;
  std::uint64_t carry = 0;
  for (const auto& t : a.terms()) {
    if (t.exponent > lead) {
      out.push_back(t);
    } else {
      if (t.exponent == lead) carry = t.coeff;
      break;
    }
  }
  out.push_back(OrdinalTerm{lead, checked_add(carry, bt.front().coeff)});
  out.insert(out.end(), bt.begin() + 1, bt.end());
  return Ordinal::from_terms(std::move(out));
}

Ordinal ord_mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal{};
  const auto& at = a.terms();
  const Ordinal& lead = at.front().exponent;
  Ordinal result;
  for (const auto& t : b.terms()) {
    Ordinal piece;
    if (t.exponent.is_zero()) {
      // (w^e1*c1 + rest) * n = w^e1*(c1*n) + rest
      std::vector<OrdinalTerm> terms(at.begin(), at.end());
      terms.front().coeff = checked_mul(terms.front().coeff, t.coeff);
      piece = Ordinal::from_terms(std::move(terms));
    } else {
      piece = Ordinal::omega_power(ord_add(lead, t.exponent), t.coeff);
    }
    result = ord_add(result, piece);
  }
  return result;
}

Ordinal ord_sub_left(const Ordinal& a, const Ordinal& b) {
  if (b > a) throw OrdinalError("left subtraction requires b <= a");
  const auto& at = a.terms();
  const auto& bt = b.terms();
  std::size_t i = 0;
  while (i < bt.size() && at[i].exponent == bt[i].exponent && at[i].coeff == bt[i].coeff) ++i;
  if (i == bt.size()) {
    return Ordinal::from_terms(std::vector<OrdinalTerm>(at.begin() + i, at.end()));
  }
  std::vector<OrdinalTerm> rest;
  if (at[i].exponent == bt[i].exponent) {
    rest.push_back(OrdinalTerm{at[i].exponent, at[i].coeff - bt[i].coeff});
    rest.insert(rest.end(), at.begin() + i + 1, at.end());
  } else {
    rest.assign(at.begin() + i, at.end());
  }
  return Ordinal::from_terms(std::move(rest));
}

Ordinal floor_to_power(const Ordinal& x, const Ordinal& e) {
  std::vector<OrdinalTerm> out;
  for (const auto& t : x.terms()) {
    if (t.exponent < e) break;
    out.push_back(t);
  }
  return Ordinal::from_terms(std::move(out));
}

Ordinal quotient_by_power(const Ordinal& x, const Ordinal& e) {
  std::vector<OrdinalTerm> out;
  for (const auto& t : x.terms()) {
    if (t.exponent < e) break;
    out.push_back(OrdinalTerm{ord_sub_left(t.exponent, e), t.coeff});
  }
  // Distinct exponents f >= e give distinct f - e, order preserved.
  return Ordinal::from_terms(std::move(out));
}

Ordinal element_cb_rank(const Ordinal& gamma) {
  if (gamma.is_zero()) throw OrdinalError("element_cb_rank: 0 is isolated (rank 0 by convention)");
  return gamma.trailing_exponent();
}

Ordinal point_cb_rank(const Ordinal& gamma) {
  return gamma.is_zero() ? Ordinal{} : gamma.trailing_exponent();
}

// ---------------------------------------------------------------------------
// Parsing: sum := term ('+' term)* ; term := nat | w ['^' exp] ['*' nat]
//          exp := nat | w | '{' sum '}'

namespace {

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view s) : s_(s) {}

  Ordinal parse_all() {
    Ordinal o = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return o;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw OrdinalError("cannot parse ordinal '" + std::string(s_) + "' at " +
                       std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool at_omega() {
    skip_ws();
    if (pos_ < s_.size() && (s_[pos_] == 'w' || s_[pos_] == 'W')) return true;
    return s_.substr(pos_).starts_with("ω");
  }

  void eat_omega() {
    if (s_[pos_] == 'w' || s_[pos_] == 'W') {
      ++pos_;
    } else {
      pos_ += std::string_view("ω").size();
    }
  }

  std::uint64_t parse_nat() {
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail("expected a natural number");
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = checked_add(checked_mul(v, 10), static_cast<std::uint64_t>(s_[pos_] - '0'));
      ++pos_;
    }
    return v;
  }

  Ordinal parse_exponent() {
    if (eat('{')) {
      Ordinal e = parse_sum();
      if (!eat('}')) fail("expected '}'");
      return e;
    }
    if (at_omega()) {
      eat_omega();
      return Ordinal::omega();
    }
    return Ordinal::natural(parse_nat());
  }

  Ordinal parse_term() {
    if (at_omega()) {
      eat_omega();
      Ordinal e = Ordinal::natural(1);
      if (eat('^')) e = parse_exponent();
      std::uint64_t c = 1;
      if (eat('*') || eat('.')) c = parse_nat();
      return Ordinal::omega_power(e, c);
    }
    return Ordinal::natural(parse_nat());
  }

  Ordinal parse_sum() {
    Ordinal acc = parse_term();
    while (eat('+')) acc = ord_add(acc, parse_term());
    return acc;
  }
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text) { return OrdinalParser(text).parse_all(); }

}  // namespace fmwb
