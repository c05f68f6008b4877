#include "crnc/certificates.hpp"

#include <algorithm>
#include <cmath>

#include "crnc/lpsolve.hpp"
#include "crnc/parallel.hpp"

namespace crnc {

RankOneFamily rank_one_factors(const ReactionNetwork& net) {
  RankOneFamily f;
  const auto& g = net.gamma();
  for (const auto& p : net.reactant_pairs()) {
    RationalMatrix q(net.nu(), net.nu());
    for (std::size_t c = 0; c < net.nu(); ++c) q(p.reaction, c) = g(p.species, c);
    RationalMatrix j(net.n(), net.n());
    for (std::size_t r = 0; r < net.n(); ++r) j(r, p.species) = g(r, p.reaction);
    f.Q.push_back(std::move(q));
    f.J.push_back(std::move(j));
  }
  return f;
}

const char* to_string(CandidateKind k) {
  switch (k) {
    case CandidateKind::MaxMin: return "maxmin";
    case CandidateKind::Identity: return "identity";
    case CandidateKind::User: return "user";
  }
  return "?";
}

std::optional<CandidateKind> parse_candidate_kind(const std::string& s) {
  if (s == "maxmin") return CandidateKind::MaxMin;
  if (s == "identity") return CandidateKind::Identity;
  if (s == "user") return CandidateKind::User;
  return std::nullopt;
}

namespace {

bool same_side(const std::vector<StoichTerm>& a, const std::vector<StoichTerm>& b) {
  if (a.size() != b.size()) return false;
  auto key = [](std::vector<StoichTerm> v) {
    std::sort(v.begin(), v.end(), [](auto& x, auto& y) { return x.species < y.species; });
    return v;
  };
  auto ka = key(a), kb = key(b);
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (ka[i].species != kb[i].species || ka[i].coefficient != kb[i].coefficient) return false;
  return true;
}

// net-rate coordinates as rows over reactions
std::vector<RationalVector> net_rates(const ReactionNetwork& net) {
  const auto& rs = net.reactions();
  std::vector<bool> used(net.nu(), false);
  std::vector<RationalVector> out;
  for (std::size_t j = 0; j < net.nu(); ++j) {
    if (used[j]) continue;
    RationalVector f(net.nu());
    f[j] = 1;
    used[j] = true;
    for (std::size_t k = j + 1; k < net.nu(); ++k)
      if (!used[k] && same_side(rs[j].reactants, rs[k].products) && same_side(rs[j].products, rs[k].reactants)) {
        f[k] = -1;
        used[k] = true;
        break;
      }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

GlfCandidate candidate_C(const ReactionNetwork& net, CandidateKind kind, const RationalMatrix* user) {
  GlfCandidate c;
  c.kind = kind;
  if (kind == CandidateKind::Identity) {
    c.C = net.gamma();
  } else if (kind == CandidateKind::MaxMin) {
    auto f = net_rates(net);
    std::vector<RationalVector> rows;
    for (std::size_t a = 0; a < f.size(); ++a)
      for (std::size_t b = a + 1; b < f.size(); ++b) {
        RationalVector r(net.nu());
        for (std::size_t j = 0; j < net.nu(); ++j) r[j] = f[a][j] - f[b][j];
        rows.push_back(std::move(r));
      }
    if (rows.empty()) rows.push_back(f.front());
    c.C = RationalMatrix::from_rows(rows, net.nu());
  } else {
    if (!user) throw std::invalid_argument("user candidate needs a matrix");
    if (user->cols() != net.nu())
      throw std::invalid_argument("user C has " + std::to_string(user->cols()) + " columns, network has " +
                                  std::to_string(net.nu()) + " reactions");
    if (user->rows() == 0) throw std::invalid_argument("user C has no rows");
    c.C = *user;
  }
  for (std::size_t i = 0; i < c.C.rows(); ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < c.C.cols() && zero; ++j) zero = sgn(c.C(i, j)) == 0;
    if (zero) throw std::invalid_argument("candidate C has a zero row " + std::to_string(i + 1));
  }
  return c;
}

namespace {

struct RowOutcome {
  bool ok = false;
  RationalVector lambda;
  std::size_t lps = 0, pivots = 0;
  bool trivial = false;
};

// row k of Lambda_l: lambda^T C = target with sigma_k(lambda) minimal, then sparse
RowOutcome solve_row(const RationalMatrix& C, std::size_t k, const RationalVector& target, const GlfOptions& opt) {
  RowOutcome out;
  const std::size_t m = C.rows(), nu = C.cols();
  bool zero = std::all_of(target.begin(), target.end(), [](const Rational& x) { return sgn(x) == 0; });
  if (zero) {
    out.ok = true;
    out.trivial = true;
    out.lambda.assign(m, Rational(0));
    return out;
  }
  // variables: lambda_0..lambda_{m-1} free, u_q (q != k) >= 0 stored at m + q'
  const std::size_t nv = m + (m - 1);
  auto uidx = [&](std::size_t q) { return m + (q < k ? q : q - 1); };
  LinearProgram lp(nv);
  for (std::size_t q = 0; q < m; ++q) lp.bounds[q] = VariableBounds::free();
  for (std::size_t c = 0; c < nu; ++c) {
    RationalVector row(nv);
    for (std::size_t q = 0; q < m; ++q) row[q] = C(q, c);
    lp.add(row, Relation::Equal, target[c]);
  }
  for (std::size_t q = 0; q < m; ++q) {
    if (q == k) continue;
    RationalVector a(nv), b(nv);
    a[q] = 1;
    a[uidx(q)] = -1;
    b[q] = -1;
    b[uidx(q)] = -1;
    lp.add(a, Relation::LessEqual, 0);
    lp.add(b, Relation::LessEqual, 0);
  }
  RationalVector sigma_row(nv);
  sigma_row[k] = 1;
  for (std::size_t q = 0; q < m; ++q)
    if (q != k) sigma_row[uidx(q)] = 1;

  Rational sigma_cap = 0;
  if (opt.minimize_sigma) {
    Rational bound = 1;
    for (const auto& t : target) bound += abs(t);
    LinearProgram p1 = lp;
    p1.add(sigma_row, Relation::GreaterEqual, -bound);
    p1.add(sigma_row, Relation::LessEqual, 0);
    p1.objective = sigma_row;
    p1.sense = Sense::Minimize;
    LpResult r = solve(p1);
    ++out.lps;
    out.pivots += r.pivots;
    if (r.status != LpStatus::Optimal) return out;
    sigma_cap = r.objective;
    if (!opt.sparsify) {
      out.ok = true;
      out.lambda.assign(r.x.begin(), r.x.begin() + m);
      return out;
    }
  }
  LinearProgram p2 = lp;
  p2.add(sigma_row, Relation::LessEqual, sigma_cap);
  p2.sense = Sense::Minimize;
  for (std::size_t q = 0; q < m; ++q)
    if (q != k) p2.objective[uidx(q)] = 1;
  LpResult r = solve(p2);
  ++out.lps;
  out.pivots += r.pivots;
  if (r.status != LpStatus::Optimal) return out;
  out.ok = true;
  out.lambda.assign(r.x.begin(), r.x.begin() + m);
  return out;
}

// C = Theta Gamma row by row gives the diagonal B = Theta
std::optional<RationalMatrix> row_scaling(const RationalMatrix& g, const RationalMatrix& C) {
  if (C.rows() != g.rows()) return std::nullopt;
  RationalMatrix b(C.rows(), C.rows());
  for (std::size_t i = 0; i < C.rows(); ++i) {
    Rational t;
    bool set = false;
    for (std::size_t j = 0; j < C.cols(); ++j) {
      if (sgn(g(i, j)) == 0) {
        if (sgn(C(i, j)) != 0) return std::nullopt;
        continue;
      }
      Rational q = C(i, j) / g(i, j);
      if (set && q != t) return std::nullopt;
      t = q;
      set = true;
    }
    if (!set) return std::nullopt;
    b(i, i) = t;
  }
  return b;
}

}  // namespace

GlfVerification verify_glf(const ReactionNetwork& net, const GlfCandidate& cand, const GlfOptions& opt) {
  GlfVerification v;
  const RationalMatrix& C = cand.C;
  if (C.cols() != net.nu()) throw std::invalid_argument("candidate C column count differs from reaction count");
  if (!same_right_kernel(C, net.gamma())) {
    v.failure = "ker C differs from ker Gamma";
    return v;
  }
  std::optional<RationalMatrix> B = row_scaling(net.gamma(), C);
  if (!B) B = solve_right_factor(net.gamma(), C);
  if (!B) {
    v.failure = "no B with B Gamma = C";
    return v;
  }
  if (rank(*B * net.gamma()) != rank(net.gamma())) {
    v.failure = "rank(B Gamma) differs from rank(Gamma)";
    return v;
  }
  const std::size_t m = C.rows(), s = net.s();
  const auto& pairs = net.reactant_pairs();
  const auto& g = net.gamma();

  std::vector<RowOutcome> rows(s * m);
  parallel_for(s * m, opt.jobs, [&](std::size_t idx) {
    std::size_t l = idx / m, k = idx % m;
    const auto& p = pairs[l];
    RationalVector target(net.nu());
    const Rational& ckj = C(k, p.reaction);
    if (sgn(ckj) != 0)
      for (std::size_t c = 0; c < net.nu(); ++c) target[c] = ckj * g(p.species, c);
    rows[idx] = solve_row(C, k, target, opt);
  });

  GlfCertificate cert;
  cert.kind = cand.kind;
  cert.C = C;
  cert.B = *B;
  for (std::size_t l = 0; l < s; ++l) {
    RationalMatrix lam(m, m);
    for (std::size_t k = 0; k < m; ++k) {
      const RowOutcome& r = rows[l * m + k];
      v.stats.lps += r.lps;
      v.stats.pivots += r.pivots;
      if (r.trivial) ++v.stats.trivial_rows;
      if (!r.ok) {
        if (!v.failed_pair) {
          v.failed_pair = l;
          v.failed_row = k;
          v.failure = "no Lambda row with mu <= 0 for pair " + pair_string(net, pairs[l]) + ", row " +
                      std::to_string(k + 1);
        }
        continue;
      }
      lam.set_row(k, r.lambda);
    }
    cert.lambdas.push_back(std::move(lam));
  }
  if (v.failed_pair) return v;
  cert.stats = v.stats;
  auto issues = check_certificate(net, cert);
  if (!issues.empty()) {
    v.failure = "internal: synthesized certificate failed re-check: " + issues.front();
    return v;
  }
  v.certificate = std::move(cert);
  return v;
}

std::vector<std::string> check_certificate(const ReactionNetwork& net, const GlfCertificate& cert) {
  std::vector<std::string> issues;
  const auto& g = net.gamma();
  if (cert.C.cols() != net.nu()) {
    issues.push_back("C has wrong column count");
    return issues;
  }
  if (!same_right_kernel(cert.C, g)) issues.push_back("ker C differs from ker Gamma");
  if (cert.B.rows() != cert.C.rows() || cert.B.cols() != net.n()) {
    issues.push_back("B has wrong shape");
  } else {
    if (cert.B * g != cert.C) issues.push_back("B Gamma differs from C");
    if (rank(cert.B * g) != rank(g)) issues.push_back("rank(B Gamma) differs from rank(Gamma)");
  }
  if (cert.lambdas.size() != net.s()) {
    issues.push_back("expected " + std::to_string(net.s()) + " Lambda matrices, got " +
                     std::to_string(cert.lambdas.size()));
    return issues;
  }
  auto fam = rank_one_factors(net);
  for (std::size_t l = 0; l < net.s(); ++l) {
    const auto& lam = cert.lambdas[l];
    std::string tag = "Lambda_" + std::to_string(l + 1) + " " + pair_string(net, net.reactant_pairs()[l]);
    if (lam.rows() != cert.C.rows() || lam.cols() != cert.C.rows()) {
      issues.push_back(tag + ": wrong shape");
      continue;
    }
    if (cert.C * fam.Q[l] != lam * cert.C) issues.push_back(tag + ": C Q differs from Lambda C");
    if (mu_inf(lam) > 0) issues.push_back(tag + ": mu_inf > 0");
  }
  return issues;
}

bool is_metzler(const RationalMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j && sgn(a(i, j)) < 0) return false;
  return true;
}

RationalMatrix to_metzler(const RationalMatrix& lambda) {
  const std::size_t m = lambda.rows();
  if (lambda.cols() != m) throw std::invalid_argument("to_metzler needs a square matrix");
  if (m == 0) return RationalMatrix(0, 0);
  if (mu_inf(lambda) > 0) throw std::invalid_argument("to_metzler needs mu_inf <= 0");
  RationalVector sig = row_sigmas(lambda);
  RationalMatrix out(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    Rational spread = -sig[i] / (2 * m);
    for (std::size_t j = 0; j < m; ++j) {
      Rational a11, a12;
      if (i == j) {
        a11 = lambda(i, i) + spread;
        a12 = spread;
      } else {
        const Rational& x = lambda(i, j);
        a11 = (sgn(x) > 0 ? x : Rational(0)) + spread;
        a12 = (sgn(x) < 0 ? Rational(-x) : Rational(0)) + spread;
      }
      out(i, j) = a11;
      out(i + m, j + m) = a11;
      out(i, j + m) = a12;
      out(i + m, j) = a12;
    }
  }
  return out;
}

RationalMatrix from_metzler(const RationalMatrix& lt) {
  if (lt.rows() != lt.cols() || lt.rows() % 2 != 0) throw std::invalid_argument("from_metzler needs a 2m x 2m matrix");
  const std::size_t m = lt.rows() / 2;
  if (!is_metzler(lt)) throw std::invalid_argument("from_metzler: matrix is not Metzler");
  for (std::size_t i = 0; i < 2 * m; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < 2 * m; ++j) s += lt(i, j);
    if (sgn(s) != 0) throw std::invalid_argument("from_metzler: nonzero row sum");
  }
  RationalMatrix out(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (lt(i, j) != lt(i + m, j + m) || lt(i, j + m) != lt(i + m, j))
        throw std::invalid_argument("from_metzler: block structure broken");
      out(i, j) = lt(i, j) - lt(i, j + m);
    }
  return out;
}

RationalMatrix metzler_C(const RationalMatrix& c) {
  RationalMatrix out(2 * c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) {
      out(i, j) = c(i, j);
      out(i + c.rows(), j) = -c(i, j);
    }
  return out;
}

namespace {

Rational inf_norm(const RationalVector& v) {
  Rational m = 0;
  for (const auto& x : v)
    if (abs(x) > m) m = abs(x);
  return m;
}

}  // namespace

Rational glf_value(const GlfCertificate& cert, const RationalVector& r) { return inf_norm(cert.C * r); }
Rational dual_value(const GlfCertificate& cert, const RationalVector& z) { return inf_norm(cert.B * z); }

double glf_value(const GlfCertificate& cert, const Eigen::VectorXd& r) {
  if (r.size() != static_cast<Eigen::Index>(cert.C.cols())) throw std::invalid_argument("rate vector length");
  return (cert.C.to_double() * r).cwiseAbs().maxCoeff();
}

double dual_value(const GlfCertificate& cert, const Eigen::VectorXd& z) {
  if (z.size() != static_cast<Eigen::Index>(cert.B.cols())) throw std::invalid_argument("state vector length");
  return (cert.B.to_double() * z).cwiseAbs().maxCoeff();
}

std::optional<std::vector<RationalMatrix>> residual_factors(const ReactionNetwork& net, const GlfCertificate& cert,
                                                            const RationalMatrix& D) {
  auto fam = rank_one_factors(net);
  RationalMatrix d = D.rows() == 0 ? RationalMatrix(0, net.n()) : D;
  std::vector<RationalMatrix> ys;
  for (std::size_t l = 0; l < net.s(); ++l) {
    RationalMatrix rhs = cert.B * fam.J[l] - cert.lambdas[l] * cert.B;
    if (d.rows() == 0) {
      if (!rhs.is_zero()) return std::nullopt;
      ys.emplace_back(rhs.rows(), 0);
      continue;
    }
    auto y = solve_left_factor(d, rhs);
    if (!y) return std::nullopt;
    ys.push_back(std::move(*y));
  }
  return ys;
}

RationalMatrix lambda_bar(const std::vector<RationalMatrix>& lambdas, const RationalVector& rho) {
  if (lambdas.empty() || rho.size() != lambdas.size()) throw std::invalid_argument("rho length differs from s");
  RationalMatrix s(lambdas[0].rows(), lambdas[0].cols());
  for (std::size_t l = 0; l < lambdas.size(); ++l) s += lambdas[l].scaled(rho[l]);
  return s;
}

Eigen::MatrixXd lambda_bar(const std::vector<Eigen::MatrixXd>& lambdas, const Eigen::VectorXd& rho) {
  if (lambdas.empty() || static_cast<std::size_t>(rho.size()) != lambdas.size())
    throw std::invalid_argument("rho length differs from s");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(lambdas[0].rows(), lambdas[0].cols());
  for (std::size_t l = 0; l < lambdas.size(); ++l) s += rho(l) * lambdas[l];
  return s;
}

}  // namespace crnc
