#include "fmwb/field.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fmwb/errors.hpp"

namespace fmwb {

namespace {

int poly_mul_mod(int a, int b, int modulus, int degree) {
  int r = 0;
  for (int i = 0; i < degree; ++i)
    if (b >> i & 1) r ^= a << i;
  for (int i = 2 * degree - 2; i >= degree; --i)
    if (r >> i & 1) r ^= modulus << (i - degree);
  return r;
}

}  // namespace

bool Field::valid_order(int q) { return q == 2 || q == 3 || q == 4 || q == 5 || q == 7 || q == 8; }

Field::Field(int q) : q_(q) {
  if (!valid_order(q)) throw InputError("field order must be a prime power <= 8, got " + std::to_string(q));
  const auto n = static_cast<std::size_t>(q * q);
  add_.resize(n);
  mul_.resize(n);
  neg_.resize(static_cast<std::size_t>(q));
  inv_.assign(static_cast<std::size_t>(q), 0);
  const bool binary = q == 4 || q == 8;
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      if (binary) {
        add_[idx(a, b)] = a ^ b;
        mul_[idx(a, b)] = q == 4 ? poly_mul_mod(a, b, 0b111, 2) : poly_mul_mod(a, b, 0b1011, 3);
      } else {
        add_[idx(a, b)] = (a + b) % q;
        mul_[idx(a, b)] = (a * b) % q;
      }
    }
  }
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      if (add(a, b) == 0) neg_[static_cast<std::size_t>(a)] = b;
      if (mul(a, b) == 1) inv_[static_cast<std::size_t>(a)] = b;
    }
  }
}

int Field::inv(int a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return inv_[static_cast<std::size_t>(a)];
}

void trim(FVec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

FVec vec_add(const Field& f, const FVec& a, const FVec& b) {
  FVec r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = f.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}

FVec vec_scale(const Field& f, int c, const FVec& a) {
  FVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(c, a[i]);
  trim(r);
  return r;
}

std::vector<FVec> reduced_basis(const Field& f, const std::vector<FVec>& vs) {
  std::size_t width = 0;
  for (const auto& v : vs) width = std::max(width, v.size());
  std::vector<FVec> rows;
  for (auto v : vs) {
    v.resize(width, 0);
    rows.push_back(v);
  }
  std::size_t r = 0;
  for (std::size_t col = 0; col < width && r < rows.size(); ++col) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const int s = f.inv(rows[r][col]);
    for (auto& x : rows[r]) x = f.mul(s, x);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const int c = rows[i][col];
      for (std::size_t j = 0; j < width; ++j) rows[i][j] = f.sub(rows[i][j], f.mul(c, rows[r][j]));
    }
    ++r;
  }
  rows.resize(r);
  for (auto& row : rows) trim(row);
  return rows;
}

bool in_span(const Field& f, const std::vector<FVec>& basis, const FVec& v) {
  auto all = basis;
  all.push_back(v);
  return reduced_basis(f, all).size() == reduced_basis(f, basis).size();
}

std::vector<FVec> span_elements(const Field& f, const std::vector<FVec>& vs, std::size_t limit) {
  const auto basis = reduced_basis(f, vs);
  std::size_t total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    total *= static_cast<std::size_t>(f.q());
    if (total > limit) throw BoundExceeded("span has more than " + std::to_string(limit) + " vectors");
  }
  std::set<FVec> out;
  std::vector<int> coeff(basis.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t m = n;
    FVec v;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      v = vec_add(f, v, vec_scale(f, static_cast<int>(m % static_cast<std::size_t>(f.q())), basis[i]));
      m /= static_cast<std::size_t>(f.q());
    }
    out.insert(v);
  }
  return {out.begin(), out.end()};
}

std::optional<Matrix> mat_inverse(const Field& f, const Matrix& m) {
  const std::size_t n = m.size();
  Matrix a = m, inv(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[col], a[piv]);
    std::swap(inv[col], inv[piv]);
    const int s = f.inv(a[col][col]);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = f.mul(s, a[col][j]);
      inv[col][j] = f.mul(s, inv[col][j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const int c = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] = f.sub(a[i][j], f.mul(c, a[col][j]));
        inv[i][j] = f.sub(inv[i][j], f.mul(c, inv[col][j]));
      }
    }
  }
  return inv;
}

Matrix mat_mul(const Field& f, const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix r(n, std::vector<int>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t t = 0; t < k; ++t) r[i][j] = f.add(r[i][j], f.mul(a[i][t], b[t][j]));
  return r;
}

FVec mat_apply(const Field& f, const Matrix& m, const FVec& v) {
  const std::size_t n = m.size();
  FVec r(std::max(n, v.size()), 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i] = f.add(r[i], f.mul(m[i][j], j < v.size() ? v[j] : 0));
  for (std::size_t i = n; i < v.size(); ++i) r[i] = v[i];
  trim(r);
  return r;
}

}  // namespace fmwb
