// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cssim/field_math.hpp"

#include <algorithm>
#include <utility>

#include "cssim/error.hpp"

namespace cssim {

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (const uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (const uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FieldElement::FieldElement(uint64_t value, uint64_t modulus)
    : value_(modulus == 0 ? 0 : value % modulus), modulus_(modulus) {
  if (modulus < 2) throw DomainError("field modulus must be at least 2");
}

void FieldElement::check_same_field(const FieldElement& o) const {
  if (modulus_ != o.modulus_ || modulus_ == 0) {
    throw DomainError("field element operands belong to different fields");
  }
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same_field(o);
  // modulus < 2^64 and both values < modulus; detect wraparound explicitly.
  const uint64_t s = value_ + o.value_;
  value_ = (s < value_ || s >= modulus_) ? s - modulus_ : s;
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same_field(o);
  value_ = value_ >= o.value_ ? value_ - o.value_ : value_ + (modulus_ - o.value_);
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same_field(o);
  value_ = mul_mod(value_, o.value_, modulus_);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  check_same_field(o);
  return *this *= o.inv();
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  if (r.value_ != 0) r.value_ = modulus_ - r.value_;
  return r;
}

FieldElement FieldElement::pow(uint64_t exp) const {
  FieldElement r = *this;
  r.value_ = pow_mod(value_, exp, modulus_);
  return r;
}

FieldElement FieldElement::inv() const {
  if (modulus_ == 0) throw DomainError("uninitialised field element");
  if (value_ == 0) throw DomainError("zero has no multiplicative inverse");
  // Extended Euclid on signed 128-bit to stay exact for 64-bit moduli.
  __int128 r0 = modulus_, r1 = value_;
  __int128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    const __int128 q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    s0 = std::exchange(s1, s0 - q * s1);
  }
  if (r0 != 1) throw DomainError("element is not invertible modulo a composite");
  if (s0 < 0) s0 += modulus_;
  FieldElement r = *this;
  r.value_ = static_cast<uint64_t>(s0);
  return r;
}

FieldElement fe_inv(const FieldElement& a) { return a.inv(); }

std::string to_string(const FieldElement& a) {
  return std::to_string(a.value()) + " (mod " + std::to_string(a.modulus()) + ")";
}

// -- Polynomial ---------------------------------------------------------------

Polynomial::Polynomial(uint64_t modulus) : modulus_(modulus) {
  if (modulus < 2) throw DomainError("field modulus must be at least 2");
}

Polynomial::Polynomial(std::vector<FieldElement> coefficients, uint64_t modulus)
    : coeffs_(std::move(coefficients)), modulus_(modulus) {
  for (const auto& c : coeffs_) {
    if (c.modulus() != modulus_) throw DomainError("coefficient from a different field");
  }
  trim();
}

Polynomial Polynomial::from_values(std::initializer_list<uint64_t> values, uint64_t modulus) {
  return from_values(std::span<const uint64_t>(values.begin(), values.size()), modulus);
}

Polynomial Polynomial::from_values(std::span<const uint64_t> values, uint64_t modulus) {
  std::vector<FieldElement> coeffs;
  coeffs.reserve(values.size());
  for (const uint64_t v : values) coeffs.emplace_back(v, modulus);
  return Polynomial(std::move(coeffs), modulus);
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

FieldElement Polynomial::coefficient(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : FieldElement::zero(modulus_);
}

FieldElement Polynomial::operator()(const FieldElement& x) const {
  if (x.modulus() != modulus_) throw DomainError("evaluation point from a different field");
  FieldElement acc = FieldElement::zero(modulus_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.modulus_ != b.modulus_) throw DomainError("polynomials over different fields");
  const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  std::vector<FieldElement> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(a.coefficient(i) + b.coefficient(i));
  return Polynomial(std::move(out), a.modulus_);
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  if (a.modulus_ != b.modulus_) throw DomainError("polynomials over different fields");
  const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  std::vector<FieldElement> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(a.coefficient(i) - b.coefficient(i));
  return Polynomial(std::move(out), a.modulus_);
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.modulus_ != b.modulus_) throw DomainError("polynomials over different fields");
  if (a.is_zero() || b.is_zero()) return Polynomial(a.modulus_);
  std::vector<FieldElement> out(a.coeffs_.size() + b.coeffs_.size() - 1,
                                FieldElement::zero(a.modulus_));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(out), a.modulus_);
}

FieldElement poly_eval(const Polynomial& f, const FieldElement& x) { return f(x); }

PolyDivision poly_divmod(const Polynomial& numerator, const Polynomial& divisor) {
  const uint64_t p = numerator.modulus();
  if (divisor.modulus() != p) throw DomainError("polynomials over different fields");
  if (divisor.is_zero()) throw DomainError("division by the zero polynomial");
  if (numerator.degree() < divisor.degree()) return {Polynomial(p), numerator};

  std::vector<FieldElement> rem = numerator.coefficients();
  const auto& d = divisor.coefficients();
  const FieldElement lead_inv = d.back().inv();
  const std::size_t dd = d.size() - 1;
  std::vector<FieldElement> quot(rem.size() - dd, FieldElement::zero(p));
  for (std::size_t k = quot.size(); k-- > 0;) {
    const FieldElement q = rem[k + dd] * lead_inv;
    quot[k] = q;
    if (q.is_zero()) continue;
    for (std::size_t j = 0; j <= dd; ++j) rem[k + j] -= q * d[j];
  }
  rem.resize(dd);
  return {Polynomial(std::move(quot), p), Polynomial(std::move(rem), p)};
}

Polynomial lagrange_interpolate(std::span<const Point> points) {
  if (points.empty()) throw DomainError("interpolation needs at least one point");
  const uint64_t p = points.front().x.modulus();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].x.modulus() != p || points[i].y.modulus() != p) {
      throw DomainError("interpolation points from different fields");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i].x == points[j].x) throw DomainError("duplicate abscissa in interpolation");
    }
  }

  // master(X) = prod_j (X - x_j); each basis numerator is master / (X - x_i),
  // obtained by synthetic division.
  const std::size_t n = points.size();
  std::vector<FieldElement> master(n + 1, FieldElement::zero(p));
  master[0] = FieldElement::one(p);
  for (std::size_t j = 0; j < n; ++j) {
    const FieldElement xj = points[j].x;
    for (std::size_t k = j + 1; k > 0; --k) master[k] = master[k - 1] - xj * master[k];
    master[0] = -xj * master[0];
  }

  std::vector<FieldElement> acc(n, FieldElement::zero(p));
  std::vector<FieldElement> basis(n, FieldElement::zero(p));
  for (std::size_t i = 0; i < n; ++i) {
    const FieldElement xi = points[i].x;
    // Synthetic division of master by (X - xi), highest coefficient first.
    FieldElement carry = FieldElement::zero(p);
    for (std::size_t k = n; k-- > 0;) {
      carry = master[k + 1] + carry * xi;
      basis[k] = carry;
    }
    FieldElement denom = FieldElement::one(p);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) denom *= xi - points[j].x;
    }
    const FieldElement scale = points[i].y / denom;
    for (std::size_t k = 0; k < n; ++k) acc[k] += basis[k] * scale;
  }
  return Polynomial(std::move(acc), p);
}

// -- Linear algebra -------------------------------------------------------------

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, uint64_t modulus)
    : rows_(rows), cols_(cols), modulus_(modulus), data_(rows * cols, FieldElement::zero(modulus)) {}

FieldMatrix::FieldMatrix(std::initializer_list<std::initializer_list<uint64_t>> rows,
                         uint64_t modulus)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()), modulus_(modulus) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DomainError("ragged matrix literal");
    for (const uint64_t v : row) data_.emplace_back(v, modulus);
  }
}

std::vector<FieldElement> FieldMatrix::multiply(std::span<const FieldElement> x) const {
  if (x.size() != cols_) throw DomainError("matrix-vector dimension mismatch");
  std::vector<FieldElement> out(rows_, FieldElement::zero(modulus_));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out[r] += at(r, c) * x[c];
  }
  return out;
}

LinearSolution solve_linear_system(const FieldMatrix& a, std::span<const FieldElement> b) {
  if (b.size() != a.rows()) throw DomainError("right-hand side length differs from row count");
  const uint64_t p = a.modulus();
  for (const auto& v : b) {
    if (v.modulus() != p) throw DomainError("right-hand side from a different field");
  }
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();

  // Augmented working copy.
  std::vector<std::vector<FieldElement>> m(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    m[r].reserve(cols + 1);
    for (std::size_t c = 0; c < cols; ++c) m[r].push_back(a.at(r, c));
    m[r].push_back(b[r]);
  }

  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[row], m[pivot]);
    const FieldElement inv = m[row][col].inv();
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      const FieldElement f = m[r][col];
      for (std::size_t c = col; c <= cols; ++c) m[r][c] -= f * m[row][c];
    }
    pivot_cols.push_back(col);
    ++row;
  }

  const std::size_t rank = pivot_cols.size();
  for (std::size_t r = rank; r < rows; ++r) {
    if (!m[r][cols].is_zero()) return {SolveStatus::kInconsistent, {}, rank};
  }
  std::vector<FieldElement> x(cols, FieldElement::zero(p));
  for (std::size_t r = 0; r < rank; ++r) x[pivot_cols[r]] = m[r][cols];
  return {rank == cols ? SolveStatus::kUnique : SolveStatus::kUnderdetermined, std::move(x), rank};
}

}  // namespace cssim
