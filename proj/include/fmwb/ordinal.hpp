#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fmwb {

struct OrdinalTerm;

/// An ordinal below epsilon-zero in Cantor normal form:
///   w^{e1}*c1 + w^{e2}*c2 + ... with e1 > e2 > ... and every ci >= 1.
/// The empty term list is zero. Exponents are themselves in normal form.
class Ordinal {
 public:
  Ordinal() = default;

  static Ordinal natural(std::uint64_t n);
  static Ordinal omega();
  /// w^exponent * coeff (coeff == 0 gives zero).
  static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coeff = 1);
  /// Builds from terms that are already strictly decreasing; throws otherwise.
  static Ordinal from_terms(std::vector<OrdinalTerm> terms);
  static Ordinal parse(std::string_view text);

  const std::vector<OrdinalTerm>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  bool is_successor() const;
  bool is_limit() const { return !is_zero() && !is_successor(); }
  std::optional<std::uint64_t> as_natural() const;

  /// Exponent of the leading term; zero for the ordinal zero.
  Ordinal leading_exponent() const;
  /// Exponent of the trailing term; zero for the ordinal zero.
  Ordinal trailing_exponent() const;

  std::string str() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
  Ordinal exponent;
  std::uint64_t coeff = 1;
};

class OrdinalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Ordinal ord_add(const Ordinal& a, const Ordinal& b);
Ordinal ord_mul(const Ordinal& a, const Ordinal& b);

/// The unique d with b + d == a. Requires b <= a.
Ordinal ord_sub_left(const Ordinal& a, const Ordinal& b);

/// Largest multiple of w^e that is <= x (the terms of x with exponent >= e).
Ordinal floor_to_power(const Ordinal& x, const Ordinal& e);

/// q with w^e * q == floor_to_power(x, e).
Ordinal quotient_by_power(const Ordinal& x, const Ordinal& e);

/// Number of Cantor-Bendixson derivatives gamma survives in any ordinal
/// space containing it: the exponent of its trailing term. Throws for zero,
/// which is isolated; use point_cb_rank when zero is a legal input.
Ordinal element_cb_rank(const Ordinal& gamma);
Ordinal point_cb_rank(const Ordinal& gamma);

}  // namespace fmwb
