#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace fmwb {

/// The finite field F_q for a prime power q <= 8. Elements are 0..q-1; for
/// q = 4 and q = 8 they are polynomials over F_2 in bit encoding.
class Field {
 public:
  explicit Field(int q);

  int q() const { return q_; }
  int add(int a, int b) const { return add_[idx(a, b)]; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int mul(int a, int b) const { return mul_[idx(a, b)]; }
  int neg(int a) const { return neg_[static_cast<std::size_t>(a)]; }
  /// Throws on zero.
  int inv(int a) const;

  static bool valid_order(int q);

 private:
  int q_;
  std::vector<int> add_, mul_, neg_, inv_;
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a * q_ + b); }
};

/// Coordinate vector with trailing zeros trimmed.
using FVec = std::vector<int>;

void trim(FVec& v);
FVec vec_add(const Field& f, const FVec& a, const FVec& b);
FVec vec_scale(const Field& f, int c, const FVec& a);

/// Row-echelon basis of the span, rows reduced so that each pivot column is
/// zero in every other row. The result is canonical for the subspace.
std::vector<FVec> reduced_basis(const Field& f, const std::vector<FVec>& vs);
bool in_span(const Field& f, const std::vector<FVec>& basis, const FVec& v);
/// All vectors of the span in increasing order; throws BoundExceeded beyond limit.
std::vector<FVec> span_elements(const Field& f, const std::vector<FVec>& vs, std::size_t limit = 4096);

using Matrix = std::vector<std::vector<int>>;

/// Inverse of a square matrix, if invertible.
std::optional<Matrix> mat_inverse(const Field& f, const Matrix& m);
Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b);
/// Applies an n x n matrix to the first n coordinates, identity beyond.
FVec mat_apply(const Field& f, const Matrix& m, const FVec& v);

}  // namespace fmwb
