// Copyright 2026 The lowdim Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOWDIM_NUMERIC_HPP
#define LOWDIM_NUMERIC_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lowdim {

using Int = mpz_class;
using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using IntVec = std::vector<std::int64_t>;

/// Base class of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rat make_rat(std::int64_t num, std::int64_t den = 1) {
  Rat r(Int(static_cast<long>(num)), Int(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

/// Serializes as "p/q" with q > 0, also for integers ("3/1").
inline std::string to_string(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts "p/q" or a bare integer "p". Throws std::invalid_argument.
inline Rat parse_rat(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+') {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  std::string num_s(num);
  if (num_s.front() == '+') num_s.erase(0, 1);
  Int p(num_s, 10);
  Int q(std::string(den), 10);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rat r(p, q);
  r.canonicalize();
  return r;
}

enum class Sign { negative = -1, zero = 0, positive = 1 };

/// Polynomial in a symbolic infinitesimal eps > 0; coeffs_[k] multiplies eps^k.
class EpsPoly {
 public:
  EpsPoly() = default;
  explicit EpsPoly(std::size_t length) : coeffs_(length) {}
  explicit EpsPoly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) {}

  static EpsPoly constant(std::size_t length, const Rat& value) {
    EpsPoly p(std::max<std::size_t>(length, 1));
    p.coeffs_[0] = value;
    return p;
  }
  static EpsPoly monomial(std::size_t length, std::size_t degree, const Rat& coeff = 1) {
    EpsPoly p(std::max(length, degree + 1));
    p.coeffs_[degree] = coeff;
    return p;
  }

  std::size_t size() const { return coeffs_.size(); }
  const Rat& operator[](std::size_t k) const { return coeffs_[k]; }
  Rat& operator[](std::size_t k) { return coeffs_[k]; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }

  /// Coefficient of eps^k, zero beyond the stored length.
  Rat coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rat(0); }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rat& c) { return sgn(c) == 0; });
  }

  EpsPoly& operator+=(const EpsPoly& o) {
    if (o.size() > size()) coeffs_.resize(o.size());
    for (std::size_t k = 0; k < o.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  EpsPoly& operator-=(const EpsPoly& o) {
    if (o.size() > size()) coeffs_.resize(o.size());
    for (std::size_t k = 0; k < o.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  EpsPoly& operator*=(const Rat& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  EpsPoly& operator/=(const Rat& s) {
    for (auto& c : coeffs_) c /= s;
    return *this;
  }
  friend EpsPoly operator+(EpsPoly a, const EpsPoly& b) { return a += b; }
  friend EpsPoly operator-(EpsPoly a, const EpsPoly& b) { return a -= b; }
  friend EpsPoly operator*(EpsPoly a, const Rat& s) { return a *= s; }
  friend EpsPoly operator*(const Rat& s, EpsPoly a) { return a *= s; }
  friend EpsPoly operator/(EpsPoly a, const Rat& s) { return a /= s; }
  EpsPoly operator-() const {
    EpsPoly r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  /// Coefficientwise equality; trailing zeros are ignored.
  friend bool operator==(const EpsPoly& a, const EpsPoly& b) {
    std::size_t len = std::max(a.size(), b.size());
    for (std::size_t k = 0; k < len; ++k) {
      if (a.coeff(k) != b.coeff(k)) return false;
    }
    return true;
  }

 private:
  std::vector<Rat> coeffs_;
};

/// Sign for all sufficiently small eps > 0: the sign of the lowest-order nonzero coefficient.
inline Sign eps_sign(const EpsPoly& p) {
  for (const Rat& c : p.coeffs()) {
    int s = sgn(c);
    if (s != 0) return s < 0 ? Sign::negative : Sign::positive;
  }
  return Sign::zero;
}

/// Dense row-major integer matrix; tracks the largest absolute entry.
class IntMat {
 public:
  IntMat() = default;
  IntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  explicit IntMat(const std::vector<std::vector<std::int64_t>>& rows) : rows_(rows.size()) {
    cols_ = rows.empty() ? 0 : rows.front().size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix rows");
      data_.insert(data_.end(), row.begin(), row.end());
    }
    recompute_delta();
  }
  IntMat(std::initializer_list<std::initializer_list<std::int64_t>> rows)
      : IntMat(std::vector<std::vector<std::int64_t>>(rows.begin(), rows.end())) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t delta() const { return delta_; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void set(std::size_t r, std::size_t c, std::int64_t v) {
    data_[r * cols_ + c] = v;
    recompute_delta();
  }

  IntVec column(std::size_t c) const {
    IntVec col(rows_);
    for (std::size_t r = 0; r < rows_; ++r) col[r] = (*this)(r, c);
    return col;
  }

  IntMat select_columns(std::span<const std::size_t> cols) const {
    IntMat out(rows_, cols.size());
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < cols.size(); ++k) out.data_[r * cols.size() + k] = (*this)(r, cols[k]);
    }
    out.recompute_delta();
    return out;
  }

  /// W x for an integer vector x of length cols().
  IntVec apply(std::span<const std::int64_t> x) const {
    IntVec out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * x[c];
    }
    return out;
  }

  std::vector<std::vector<std::int64_t>> to_rows() const {
    std::vector<std::vector<std::int64_t>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r].assign(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
    return out;
  }

  friend bool operator==(const IntMat& a, const IntMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void recompute_delta() {
    delta_ = 0;
    for (auto v : data_) delta_ = std::max<std::int64_t>(delta_, v < 0 ? -v : v);
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
  std::int64_t delta_ = 0;
};

/// Dense row-major exact rational matrix.
class RatMat {
 public:
  RatMat() = default;
  RatMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit RatMat(const std::vector<RatVec>& rows) : rows_(rows.size()) {
    cols_ = rows.empty() ? 0 : rows.front().size();
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix rows");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }
  explicit RatMat(const IntMat& m) : RatMat(m.rows(), m.cols()) {
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) at(r, c) = make_rat(m(r, c));
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Rat& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  RatMat transpose() const {
    RatMat t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = (*this)(r, c);
    }
    return t;
  }

  void append_row(const RatVec& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw std::invalid_argument("row length mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

  RatVec row(std::size_t r) const { return RatVec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

namespace detail {

// Scales every row by the lcm of its denominators so elimination runs on integers.
inline std::vector<std::vector<Int>> integer_rows(const RatMat& a, std::vector<Int>* scales = nullptr) {
  std::vector<std::vector<Int>> out(a.rows(), std::vector<Int>(a.cols()));
  if (scales) scales->assign(a.rows(), Int(1));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Int l = 1;
    for (std::size_t c = 0; c < a.cols(); ++c) l = lcm(l, a(r, c).get_den());
    for (std::size_t c = 0; c < a.cols(); ++c) out[r][c] = a(r, c).get_num() * (l / a(r, c).get_den());
    if (scales) (*scales)[r] = l;
  }
  return out;
}

}  // namespace detail

/// Exact rank by fraction-free (Bareiss) elimination.
inline std::size_t rank(const RatMat& a) {
  auto m = detail::integer_rows(a);
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  Int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

/// Solves A y = rhs exactly where each right-hand side entry is a polynomial in eps.
/// Returns std::nullopt when A is singular.
inline std::optional<std::vector<EpsPoly>> solve_square_system(const RatMat& a, std::span<const EpsPoly> rhs) {
  const std::size_t n = a.rows();
  if (a.cols() != n || rhs.size() != n) throw std::invalid_argument("solve_square_system: shape mismatch");
  std::vector<Int> scales;
  auto m = detail::integer_rows(a, &scales);
  std::vector<EpsPoly> b(rhs.begin(), rhs.end());
  std::size_t len = 1;
  for (const auto& p : b) len = std::max(len, p.size());
  for (std::size_t r = 0; r < n; ++r) {
    b[r] = b[r] + EpsPoly(len);
    b[r] *= Rat(scales[r]);
  }

  Int prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[k]);
    std::swap(b[piv], b[k]);
    const Rat prev_q(prev);
    const Rat pivot_q(m[k][k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rat factor(m[i][k]);
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      b[i] = (b[i] * pivot_q - b[k] * factor) / prev_q;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }

  std::vector<EpsPoly> y(n, EpsPoly(len));
  for (std::size_t i = n; i-- > 0;) {
    EpsPoly acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= y[j] * Rat(m[i][j]);
    y[i] = acc / Rat(m[i][i]);
  }
  return y;
}

}  // namespace lowdim

#endif  // LOWDIM_NUMERIC_HPP
