#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace crnc {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

// dense row-major matrix over Q
class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);
  RationalMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<RationalVector>& rows, std::size_t cols);
  // "a b c; d e f" with entries like 3, -1/2
  static RationalMatrix parse(const std::string& text);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalVector row(std::size_t r) const;
  RationalVector col(std::size_t c) const;
  void set_row(std::size_t r, const RationalVector& v);

  RationalMatrix transpose() const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalVector operator*(const RationalVector& v) const;
  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  RationalMatrix operator-() const;
  RationalMatrix scaled(const Rational& s) const;
  RationalMatrix& operator+=(const RationalMatrix& o);
  bool operator==(const RationalMatrix& o) const;
  bool operator!=(const RationalMatrix& o) const { return !(*this == o); }

  bool is_zero() const;
  Eigen::MatrixXd to_double() const;
  std::string to_string() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RowEchelon {
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon rref(const RationalMatrix& a);
std::size_t rank(const RationalMatrix& a);

// bases are returned as rows; both are canonical (derived from the unique RREF)
struct KernelInfo {
  std::size_t rank = 0;
  RationalMatrix right_kernel;  // k x cols, rows v with A v = 0
  RationalMatrix left_kernel;   // d x rows, rows w with w^T A = 0
};

RationalMatrix right_kernel(const RationalMatrix& a);
RationalMatrix left_kernel(const RationalMatrix& a);
KernelInfo rank_and_kernels(const RationalMatrix& a);

// particular solution of A x = b with free variables set to zero
std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b);
// X with X A = M, or nullopt when some row is inconsistent
std::optional<RationalMatrix> solve_left_factor(const RationalMatrix& a, const RationalMatrix& m);
// B with B Gamma = C
std::optional<RationalMatrix> solve_right_factor(const RationalMatrix& gamma, const RationalMatrix& c);

// ker A == ker B for matrices with equal column count
bool same_right_kernel(const RationalMatrix& a, const RationalMatrix& b);

// sigma_i(A) = a_ii + sum_{j != i} |a_ij|
RationalVector row_sigmas(const RationalMatrix& a);
Rational mu_inf(const RationalMatrix& a);
Eigen::VectorXd row_sigmas(const Eigen::MatrixXd& a);
double mu_inf(const Eigen::MatrixXd& a);

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);
RationalVector primitive_integer(const RationalVector& v);
Eigen::VectorXd to_double(const RationalVector& v);

}  // namespace crnc
