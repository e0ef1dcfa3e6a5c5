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

#pragma once

// Prime-field scalars, polynomials over them, interpolation and exact
// Gaussian elimination. Shamir sharing and the Berlekamp-Welch decoder are
// built on these.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cssim {

// Field profiles. The small primes keep fields enumerable for brute-force
// oracles; the Mersenne prime is the simulation default and fits a machine
// word with a 128-bit widening multiply.
inline constexpr uint64_t kPrime17 = 17;
inline constexpr uint64_t kPrime97 = 97;
inline constexpr uint64_t kPrime257 = 257;
inline constexpr uint64_t kPrime61 = (uint64_t{1} << 61) - 1;

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(uint64_t n);

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m);
uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m);

// An element of Z/pZ. The modulus travels with the value; mixing elements of
// different fields throws DomainError. A default-constructed element has no
// field and must be assigned before use.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(uint64_t value, uint64_t modulus);

  static FieldElement zero(uint64_t modulus) { return {0, modulus}; }
  static FieldElement one(uint64_t modulus) { return {1, modulus}; }

  uint64_t value() const { return value_; }
  uint64_t modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement pow(uint64_t exp) const;
  // Throws DomainError for zero.
  FieldElement inv() const;

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  FieldElement operator-() const;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  void check_same_field(const FieldElement& o) const;

  uint64_t value_ = 0;
  uint64_t modulus_ = 0;
};

FieldElement fe_inv(const FieldElement& a);

std::string to_string(const FieldElement& a);

// Dense polynomial, constant term first. Trailing zero coefficients are
// trimmed on construction so that equality is structural; the zero
// polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  explicit Polynomial(uint64_t modulus);
  Polynomial(std::vector<FieldElement> coefficients, uint64_t modulus);
  static Polynomial from_values(std::initializer_list<uint64_t> values, uint64_t modulus);
  static Polynomial from_values(std::span<const uint64_t> values, uint64_t modulus);

  uint64_t modulus() const { return modulus_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<FieldElement>& coefficients() const { return coeffs_; }
  // Zero beyond the stored length.
  FieldElement coefficient(std::size_t i) const;

  FieldElement operator()(const FieldElement& x) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();

  std::vector<FieldElement> coeffs_;
  uint64_t modulus_;
};

// Horner evaluation.
FieldElement poly_eval(const Polynomial& f, const FieldElement& x);

struct PolyDivision {
  Polynomial quotient;
  Polynomial remainder;
};

// Long division; throws DomainError when the divisor is zero.
PolyDivision poly_divmod(const Polynomial& numerator, const Polynomial& divisor);

struct Point {
  FieldElement x;
  FieldElement y;

  friend bool operator==(const Point&, const Point&) = default;
};

// Unique polynomial of degree <= points.size() - 1 through every point.
// Throws DomainError on an empty list or a repeated abscissa.
Polynomial lagrange_interpolate(std::span<const Point> points);

class FieldMatrix {
 public:
  FieldMatrix(std::size_t rows, std::size_t cols, uint64_t modulus);
  FieldMatrix(std::initializer_list<std::initializer_list<uint64_t>> rows, uint64_t modulus);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  uint64_t modulus() const { return modulus_; }

  FieldElement& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const FieldElement& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<FieldElement> multiply(std::span<const FieldElement> x) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  uint64_t modulus_;
  std::vector<FieldElement> data_;
};

enum class SolveStatus {
  kUnique,
  // Consistent with free variables; x holds the solution with every free
  // variable set to zero.
  kUnderdetermined,
  kInconsistent,
};

struct LinearSolution {
  SolveStatus status;
  std::vector<FieldElement> x;  // empty when inconsistent
  std::size_t rank = 0;

  bool solvable() const { return status != SolveStatus::kInconsistent; }
};

// Gauss-Jordan elimination with first-nonzero pivoting. Throws DomainError
// when b.size() != a.rows() or the fields differ.
LinearSolution solve_linear_system(const FieldMatrix& a, std::span<const FieldElement> b);

}  // namespace cssim
