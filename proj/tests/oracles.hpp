#pragma once

// slow independent references used by the unit tests

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "crnc/dynamics.hpp"
#include "crnc/linalg.hpp"
#include "crnc/lpsolve.hpp"
#include "crnc/model.hpp"

namespace oracle {

using crnc::Rational;
using crnc::RationalMatrix;
using crnc::RationalVector;

// canonical a/b; mpq_class(a, b) leaves the fraction unreduced
inline Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// mu_inf straight from the row-sum formula, in doubles
inline double mu_rows(const Eigen::MatrixXd& a) {
  double best = -INFINITY;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double s = a(i, i);
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (j != i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

// mu_inf as the limit (||I + hA|| - 1) / h
inline double mu_limit(const Eigen::MatrixXd& a, double h = 1e-7) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(a.rows(), a.cols()) + h * a;
  return (m.cwiseAbs().rowwise().sum().maxCoeff() - 1) / h;
}

// exact Gaussian elimination, x with A x = b for square nonsingular A
inline std::optional<RationalVector> solve_square(RationalMatrix a, RationalVector b) {
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a(p, c)) == 0) ++p;
    if (p == n) return std::nullopt;
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(c, k));
      std::swap(b[p], b[c]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(a(r, c)) == 0) continue;
      Rational f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a(i, i);
  return b;
}

// LP over x >= 0 with constraints given as rows (<=, = or >=): enumerate every basic solution.
// returns the optimum value (minimize) or nullopt when infeasible; assumes boundedness.
inline std::optional<Rational> lp_by_vertices(const crnc::LinearProgram& lp) {
  const std::size_t n = lp.variables;
  // rows of the active-set system: constraints as equalities plus x_k = 0
  std::vector<RationalVector> rows;
  std::vector<Rational> rhs;
  for (const auto& c : lp.constraints) {
    rows.push_back(c.coeffs);
    rhs.push_back(c.rhs);
  }
  const std::size_t m = rows.size();
  for (std::size_t k = 0; k < n; ++k) {
    RationalVector e(n, 0);
    e[k] = 1;
    rows.push_back(e);
    rhs.push_back(0);
  }
  auto feasible = [&](const RationalVector& x) {
    for (std::size_t k = 0; k < n; ++k)
      if (sgn(x[k]) < 0) return false;
    for (const auto& c : lp.constraints) {
      Rational s = 0;
      for (std::size_t k = 0; k < n; ++k) s += c.coeffs[k] * x[k];
      if (c.relation == crnc::Relation::LessEqual && s > c.rhs) return false;
      if (c.relation == crnc::Relation::GreaterEqual && s < c.rhs) return false;
      if (c.relation == crnc::Relation::Equal && s != c.rhs) return false;
    }
    return true;
  };
  std::optional<Rational> best;
  std::vector<int> pick(rows.size(), 0);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(n), 1);
  std::sort(pick.begin(), pick.end());
  do {
    std::vector<std::size_t> idx;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (pick[r]) idx.push_back(r);
    bool eq_ok = true;  // every equality must be in the active set
    for (std::size_t r = 0; r < m; ++r)
      if (lp.constraints[r].relation == crnc::Relation::Equal && !pick[r]) eq_ok = false;
    if (!eq_ok) continue;
    RationalMatrix a(n, n);
    RationalVector b(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) a(i, k) = rows[idx[i]][k];
      b[i] = rhs[idx[i]];
    }
    auto x = solve_square(a, b);
    if (!x || !feasible(*x)) continue;
    Rational v = 0;
    for (std::size_t k = 0; k < n; ++k) v += lp.objective[k] * (*x)[k];
    if (lp.sense == crnc::Sense::Maximize) v = -v;
    if (!best || v < *best) best = v;
  } while (std::next_permutation(pick.begin(), pick.end()));
  if (best && lp.sense == crnc::Sense::Maximize) best = -*best;
  return best;
}

// central differences of the mass-action rate vector
inline Eigen::MatrixXd fd_rate_jacobian(const crnc::ReactionNetwork& net, const crnc::Kinetics& kin,
                                        const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::MatrixXd j(net.nu(), net.n());
  for (std::size_t i = 0; i < net.n(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    j.col(i) = (crnc::evaluate_rate(net, kin, a) - crnc::evaluate_rate(net, kin, b)) / (2 * h);
  }
  return j;
}

// all subsets of species that are siphons and minimal, by enumeration
inline std::vector<std::vector<std::size_t>> siphons_by_subsets(const crnc::ReactionNetwork& net) {
  const std::size_t n = net.n();
  auto siphon = [&](unsigned mask) {
    for (std::size_t j = 0; j < net.nu(); ++j) {
      bool makes = false, uses = false;
      for (const auto& t : net.reactions()[j].products)
        if (mask >> t.species & 1u) makes = true;
      for (const auto& t : net.reactions()[j].reactants)
        if (mask >> t.species & 1u) uses = true;
      if (makes && !uses) return false;
    }
    return true;
  };
  std::vector<unsigned> found;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (!siphon(mask)) continue;
    bool minimal = true;
    for (unsigned f : found)
      if ((f & mask) == f) minimal = false;
    if (minimal) {
      std::erase_if(found, [&](unsigned f) { return (mask & f) == mask; });
      found.push_back(mask);
    }
  }
  std::vector<std::vector<std::size_t>> out;
  for (unsigned f : found) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (f >> i & 1u) s.push_back(i);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline RationalMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  RationalMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace oracle
