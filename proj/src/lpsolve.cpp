#include "crnc/lpsolve.hpp"

#include <sstream>
#include <stdexcept>

namespace crnc {

LinearProgram::LinearProgram(std::size_t n) : variables(n), objective(n), bounds(n) {}

void LinearProgram::add(RationalVector coeffs, Relation rel, Rational rhs) {
  constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

struct Tableau {
  std::size_t m = 0, n = 0;  // rows, columns without rhs
  std::vector<Rational> a;   // m x (n + 1)
  std::vector<Rational> d;   // reduced costs, d[n] = -objective
  std::vector<std::size_t> basis;
  std::vector<bool> allowed;
  std::size_t pivots = 0;

  Rational& at(std::size_t r, std::size_t c) { return a[r * (n + 1) + c]; }

  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / at(r, c);
    for (std::size_t j = 0; j <= n; ++j)
      if (sgn(at(r, j)) != 0) at(r, j) *= inv;
    Rational t;
    auto eliminate = [&](Rational* row) {
      if (sgn(row[c]) == 0) return;
      Rational f = row[c];
      for (std::size_t j = 0; j <= n; ++j) {
        if (sgn(at(r, j)) == 0) continue;
        mpq_mul(t.get_mpq_t(), f.get_mpq_t(), at(r, j).get_mpq_t());
        row[j] -= t;
      }
    };
    for (std::size_t i = 0; i < m; ++i)
      if (i != r) eliminate(&a[i * (n + 1)]);
    eliminate(d.data());
    basis[r] = c;
    ++pivots;
  }

  void set_objective(const std::vector<Rational>& c) {
    d.assign(n + 1, Rational(0));
    for (std::size_t j = 0; j < n; ++j) d[j] = c[j];
    for (std::size_t i = 0; i < m; ++i) {
      const Rational& cb = c[basis[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= n; ++j) d[j] -= cb * at(i, j);
    }
  }

  // maximize; true when optimal, false when unbounded
  bool run() {
    for (;;) {
      std::size_t enter = n;
      for (std::size_t j = 0; j < n; ++j)
        if (allowed[j] && sgn(d[j]) > 0) {
          enter = j;
          break;
        }
      if (enter == n) return true;
      std::size_t leave = m;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(at(i, enter)) <= 0) continue;
        Rational ratio = at(i, n) / at(i, enter);
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  }

  void drop_row(std::size_t r) {
    a.erase(a.begin() + r * (n + 1), a.begin() + (r + 1) * (n + 1));
    basis.erase(basis.begin() + r);
    --m;
  }
};

// x_orig = offset + sum coef * y_col
struct VarMap {
  Rational offset;
  std::vector<std::pair<std::size_t, int>> cols;
};

}  // namespace

LpResult solve(const LinearProgram& lp) {
  const std::size_t nv = lp.variables;
  if (lp.objective.size() != nv || lp.bounds.size() != nv)
    throw std::invalid_argument("objective/bounds length differs from variable count");
  for (const auto& c : lp.constraints)
    if (c.coeffs.size() != nv) throw std::invalid_argument("constraint length differs from variable count");
  for (const auto& b : lp.bounds)
    if (b.lower && b.upper && *b.lower > *b.upper) return LpResult{LpStatus::Infeasible, 0, {}, 0, 0};

  // substitute bounds
  std::vector<VarMap> map(nv);
  std::size_t ny = 0;
  struct Row {
    std::vector<Rational> coeffs;  // over y, grown later
    Relation rel;
    Rational rhs;
  };
  std::vector<std::pair<std::size_t, Rational>> upper_rows;  // y_col <= value
  for (std::size_t j = 0; j < nv; ++j) {
    const auto& b = lp.bounds[j];
    if (b.lower) {
      map[j].offset = *b.lower;
      map[j].cols.push_back({ny, 1});
      if (b.upper) upper_rows.push_back({ny, *b.upper - *b.lower});
      ++ny;
    } else if (b.upper) {
      map[j].offset = *b.upper;
      map[j].cols.push_back({ny++, -1});
    } else {
      map[j].cols.push_back({ny++, 1});
      map[j].cols.push_back({ny++, -1});
    }
  }

  std::vector<Row> rows;
  for (const auto& c : lp.constraints) {
    Row r{std::vector<Rational>(ny), c.relation, c.rhs};
    for (std::size_t j = 0; j < nv; ++j) {
      if (sgn(c.coeffs[j]) == 0) continue;
      r.rhs -= c.coeffs[j] * map[j].offset;
      for (auto [col, s] : map[j].cols) r.coeffs[col] += s * c.coeffs[j];
    }
    rows.push_back(std::move(r));
  }
  for (auto& [col, v] : upper_rows) {
    Row r{std::vector<Rational>(ny), Relation::LessEqual, v};
    r.coeffs[col] = 1;
    rows.push_back(std::move(r));
  }

  const std::size_t m = rows.size();
  std::size_t nslack = 0;
  for (const auto& r : rows)
    if (r.rel != Relation::Equal) ++nslack;
  // slack with +1 after sign normalization can start in the basis
  std::vector<int> slack_sign(m, 0);
  std::vector<bool> needs_art(m, true);
  for (std::size_t i = 0; i < m; ++i) {
    int s = rows[i].rel == Relation::LessEqual ? 1 : rows[i].rel == Relation::GreaterEqual ? -1 : 0;
    if (sgn(rows[i].rhs) < 0) s = -s;
    slack_sign[i] = s;
    needs_art[i] = s != 1;
  }
  std::size_t nart = 0;
  for (bool b : needs_art)
    if (b) ++nart;

  Tableau t;
  t.m = m;
  t.n = ny + nslack + nart;
  t.a.assign(m * (t.n + 1), Rational(0));
  t.basis.assign(m, 0);
  t.allowed.assign(t.n, true);
  std::size_t sc = ny, ac = ny + nslack;
  for (std::size_t i = 0; i < m; ++i) {
    int flip = sgn(rows[i].rhs) < 0 ? -1 : 1;
    for (std::size_t j = 0; j < ny; ++j)
      if (sgn(rows[i].coeffs[j]) != 0) t.at(i, j) = flip * rows[i].coeffs[j];
    t.at(i, t.n) = flip * rows[i].rhs;
    if (rows[i].rel != Relation::Equal) {
      t.at(i, sc) = slack_sign[i];
      if (!needs_art[i]) t.basis[i] = sc;
      ++sc;
    }
    if (needs_art[i]) {
      t.at(i, ac) = 1;
      t.basis[i] = ac++;
    }
  }

  LpResult res;
  if (nart > 0) {
    std::vector<Rational> c1(t.n);
    for (std::size_t j = ny + nslack; j < t.n; ++j) c1[j] = -1;
    t.set_objective(c1);
    t.run();
    if (sgn(t.d[t.n]) != 0) {  // -(phase-one optimum) != 0
      res.status = LpStatus::Infeasible;
      res.pivots = res.phase1_pivots = t.pivots;
      return res;
    }
    for (std::size_t j = ny + nslack; j < t.n; ++j) t.allowed[j] = false;
    for (std::size_t i = 0; i < t.m;) {
      if (t.basis[i] < ny + nslack) {
        ++i;
        continue;
      }
      std::size_t c = t.n;
      for (std::size_t j = 0; j < ny + nslack; ++j)
        if (sgn(t.at(i, j)) != 0) {
          c = j;
          break;
        }
      if (c == t.n) {
        t.drop_row(i);
      } else {
        t.pivot(i, c);
        ++i;
      }
    }
    res.phase1_pivots = t.pivots;
  }

  std::vector<Rational> c2(t.n);
  for (std::size_t j = 0; j < nv; ++j) {
    Rational cj = lp.sense == Sense::Maximize ? lp.objective[j] : -lp.objective[j];
    for (auto [col, s] : map[j].cols) c2[col] += s * cj;
  }
  t.set_objective(c2);
  bool optimal = t.run();
  res.pivots = t.pivots;
  if (!optimal) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  std::vector<Rational> y(t.n);
  for (std::size_t i = 0; i < t.m; ++i) y[t.basis[i]] = t.at(i, t.n);
  res.x.assign(nv, Rational(0));
  for (std::size_t j = 0; j < nv; ++j) {
    res.x[j] = map[j].offset;
    for (auto [col, s] : map[j].cols) res.x[j] += s * y[col];
  }
  res.objective = 0;
  for (std::size_t j = 0; j < nv; ++j) res.objective += lp.objective[j] * res.x[j];
  res.status = LpStatus::Optimal;
  return res;
}

std::string dump(const LinearProgram& lp) {
  std::ostringstream os;
  auto term_list = [&](const RationalVector& v) {
    bool any = false;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (sgn(v[j]) == 0) continue;
      os << (sgn(v[j]) < 0 ? " - " : any ? " + " : " ");
      Rational a = abs(v[j]);
      if (a != 1) os << a.get_str() << ' ';
      os << 'x' << j;
      any = true;
    }
    if (!any) os << " 0";
  };
  os << (lp.sense == Sense::Maximize ? "maximize" : "minimize");
  term_list(lp.objective);
  os << "\nsubject to\n";
  for (const auto& c : lp.constraints) {
    term_list(c.coeffs);
    os << (c.relation == Relation::LessEqual ? " <= " : c.relation == Relation::Equal ? " = " : " >= ")
       << c.rhs.get_str() << '\n';
  }
  os << "bounds\n";
  for (std::size_t j = 0; j < lp.variables; ++j) {
    const auto& b = lp.bounds[j];
    os << ' ' << (b.lower ? b.lower->get_str() : "-inf") << " <= x" << j << " <= "
       << (b.upper ? b.upper->get_str() : "+inf") << '\n';
  }
  return os.str();
}

std::optional<RationalVector> positive_point_in_kernel(const RationalMatrix& a, KernelSide side) {
  const RationalMatrix m = side == KernelSide::Right ? a : a.transpose();
  const std::size_t k = m.cols();
  if (k == 0) return std::nullopt;
  // maximize t s.t. M v = 0, v_i >= t, 0 <= t <= 1
  LinearProgram lp(k + 1);
  lp.sense = Sense::Maximize;
  lp.objective[k] = 1;
  lp.bounds[k].upper = Rational(1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    RationalVector row(k + 1);
    for (std::size_t j = 0; j < k; ++j) row[j] = m(i, j);
    lp.add(row, Relation::Equal, 0);
  }
  for (std::size_t j = 0; j < k; ++j) {
    RationalVector row(k + 1);
    row[j] = 1;
    row[k] = -1;
    lp.add(row, Relation::GreaterEqual, 0);
  }
  LpResult r = solve(lp);
  if (r.status != LpStatus::Optimal || r.objective != 1) return std::nullopt;
  r.x.pop_back();
  return primitive_integer(r.x);
}

}  // namespace crnc
