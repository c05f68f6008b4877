#include "crnc/linalg.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace crnc {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows, std::size_t cols) {
  RationalMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

RationalMatrix RationalMatrix::parse(const std::string& text) {
  std::vector<RationalVector> rows;
  std::size_t cols = 0;
  std::stringstream all(text);
  std::string line;
  while (std::getline(all, line, ';')) {
    std::stringstream ls(line);
    std::string tok;
    RationalVector r;
    while (ls >> tok) r.push_back(parse_rational(tok));
    if (r.empty()) continue;
    if (!rows.empty() && r.size() != cols) throw std::invalid_argument("ragged matrix text");
    cols = r.size();
    rows.push_back(std::move(r));
  }
  return from_rows(rows, cols);
}

RationalVector RationalMatrix::row(std::size_t r) const {
  return RationalVector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

RationalVector RationalMatrix::col(std::size_t c) const {
  RationalVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

void RationalMatrix::set_row(std::size_t r, const RationalVector& v) {
  if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
  for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = v[j];
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("shape mismatch in product");
  RationalMatrix p(rows_, o.cols_);
  Rational t;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        if (sgn(o(k, j)) == 0) continue;
        mpq_mul(t.get_mpq_t(), a.get_mpq_t(), o(k, j).get_mpq_t());
        p(i, j) += t;
      }
    }
  return p;
}

RationalVector RationalMatrix::operator*(const RationalVector& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("shape mismatch in product");
  RationalVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn((*this)(i, j)) != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  RationalMatrix s = *this;
  s += o;
  return s;
}

RationalMatrix& RationalMatrix::operator+=(const RationalMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch in sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch in difference");
  RationalMatrix s = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] -= o.data_[k];
  return s;
}

RationalMatrix RationalMatrix::operator-() const { return scaled(-1); }

RationalMatrix RationalMatrix::scaled(const Rational& s) const {
  RationalMatrix m = *this;
  for (auto& x : m.data_) x *= s;
  return m;
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool RationalMatrix::is_zero() const {
  for (const auto& x : data_)
    if (sgn(x) != 0) return false;
  return true;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).get_d();
  return m;
}

std::string RationalMatrix::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) s += "; ";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) s += ' ';
      s += crnc::to_string((*this)(i, j));
    }
  }
  return s;
}

RowEchelon rref(const RationalMatrix& a) {
  RowEchelon e{a, {}};
  RationalMatrix& m = e.reduced;
  std::size_t r = 0;
  Rational t;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (sgn(m(r, j)) == 0) continue;
        mpq_mul(t.get_mpq_t(), f.get_mpq_t(), m(r, j).get_mpq_t());
        m(i, j) -= t;
      }
    }
    e.pivots.push_back(c);
    ++r;
  }
  return e;
}

std::size_t rank(const RationalMatrix& a) { return rref(a).pivots.size(); }

RationalMatrix right_kernel(const RationalMatrix& a) {
  RowEchelon e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(a.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    basis.push_back(std::move(v));
  }
  return RationalMatrix::from_rows(basis, a.cols());
}

RationalMatrix left_kernel(const RationalMatrix& a) { return right_kernel(a.transpose()); }

KernelInfo rank_and_kernels(const RationalMatrix& a) {
  return KernelInfo{rank(a), right_kernel(a), left_kernel(a)};
}

std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("rhs length mismatch");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  RowEchelon e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  RationalVector x(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, a.cols());
  return x;
}

std::optional<RationalMatrix> solve_left_factor(const RationalMatrix& a, const RationalMatrix& m) {
  if (m.cols() != a.cols()) throw std::invalid_argument("shape mismatch in left factor");
  RationalMatrix at = a.transpose();
  RationalMatrix x(m.rows(), a.rows());
  for (std::size_t k = 0; k < m.rows(); ++k) {
    auto sol = solve(at, m.row(k));
    if (!sol) return std::nullopt;
    x.set_row(k, *sol);
  }
  return x;
}

std::optional<RationalMatrix> solve_right_factor(const RationalMatrix& gamma, const RationalMatrix& c) {
  return solve_left_factor(gamma, c);
}

bool same_right_kernel(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.cols()) return false;
  RationalMatrix stacked(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) stacked.set_row(i, a.row(i));
  for (std::size_t i = 0; i < b.rows(); ++i) stacked.set_row(a.rows() + i, b.row(i));
  std::size_t r = rank(stacked);
  return r == rank(a) && r == rank(b);
}

RationalVector row_sigmas(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("row_sigmas needs a square matrix");
  RationalVector s(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    s[i] = a(i, i);
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (j != i) s[i] += abs(a(i, j));
  }
  return s;
}

Rational mu_inf(const RationalMatrix& a) {
  if (a.rows() == 0) throw std::invalid_argument("mu_inf of empty matrix");
  RationalVector s = row_sigmas(a);
  Rational m = s[0];
  for (const auto& x : s)
    if (x > m) m = x;
  return m;
}

Eigen::VectorXd row_sigmas(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("row_sigmas needs a square matrix");
  Eigen::VectorXd s(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    s(i) = a(i, i) + a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
  return s;
}

double mu_inf(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) throw std::invalid_argument("mu_inf of empty matrix");
  return row_sigmas(a).maxCoeff();
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& s) {
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

RationalVector primitive_integer(const RationalVector& v) {
  mpz_class l = 1, g = 0;
  for (const auto& x : v) l = lcm(l, x.get_den());
  RationalVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] * l;
    g = gcd(g, out[i].get_num());
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

Eigen::VectorXd to_double(const RationalVector& v) {
  Eigen::VectorXd d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d(i) = v[i].get_d();
  return d;
}

}  // namespace crnc
