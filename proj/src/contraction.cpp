#include "crnc/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

#include "crnc/parallel.hpp"

namespace crnc {

WeakContractivityReport classify(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("classify needs a square matrix");
  WeakContractivityReport r;
  r.sigma = row_sigmas(a);
  const std::size_t m = a.rows();
  for (std::size_t i = 0; i < m; ++i) {
    if (sgn(r.sigma[i]) > 0)
      throw std::invalid_argument("sigma_" + std::to_string(i + 1) + " = " + r.sigma[i].get_str() +
                                  " > 0; matrix is not nonexpansive");
    (sgn(r.sigma[i]) < 0 ? r.S_minus : r.S_zero).push_back(i);
  }
  r.depth.assign(m, -1);
  std::deque<std::size_t> queue;
  for (auto i : r.S_minus) {
    r.depth[i] = 0;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    std::size_t t = queue.front();
    queue.pop_front();
    for (auto i : r.S_zero) {
      if (r.depth[i] >= 0 || sgn(a(i, t)) == 0) continue;
      r.depth[i] = r.depth[t] + 1;
      queue.push_back(i);
    }
  }
  r.weakly_contractive = true;
  for (auto i : r.S_zero) {
    if (r.depth[i] < 0) {
      r.weakly_contractive = false;
      continue;
    }
    std::size_t d = static_cast<std::size_t>(r.depth[i]);
    if (r.depth_classes.size() < d) r.depth_classes.resize(d);
    r.depth_classes[d - 1].push_back(i);
    r.max_depth = std::max(r.max_depth, d);
  }
  return r;
}

WeakContractivityReport classify_at_one(const GlfCertificate& cert) {
  return classify(lambda_bar(cert.lambdas, RationalVector(cert.lambdas.size(), Rational(1))));
}

RationalMatrix ContractorMatrix::at(const Rational& theta) const {
  RationalMatrix p(exponents.size(), exponents.size());
  Rational base = 1 + theta;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    Rational v = 1;
    for (unsigned k = 0; k < exponents[i]; ++k) v *= base;
    p(i, i) = v;
  }
  return p;
}

Eigen::VectorXd ContractorMatrix::diagonal(double theta) const {
  Eigen::VectorXd d(exponents.size());
  for (std::size_t i = 0; i < exponents.size(); ++i) d(i) = std::pow(1 + theta, exponents[i]);
  return d;
}

bool ContractorMatrix::trivial() const {
  return std::all_of(exponents.begin(), exponents.end(), [](unsigned e) { return e == 0; });
}

ContractorMatrix contractor(const WeakContractivityReport& r) {
  if (!r.weakly_contractive) throw std::invalid_argument("contractor needs a weakly contractive report");
  ContractorMatrix p;
  p.exponents.resize(r.depth.size());
  for (std::size_t i = 0; i < r.depth.size(); ++i)
    p.exponents[i] = static_cast<unsigned>(r.max_depth - static_cast<std::size_t>(r.depth[i]));
  return p;
}

RationalMatrix scale(const RationalMatrix& a, const ContractorMatrix& p, const Rational& theta) {
  RationalMatrix d = p.at(theta);
  RationalMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (sgn(a(i, j)) != 0) out(i, j) = a(i, j) * d(i, i) / d(j, j);
  return out;
}

Eigen::MatrixXd scale(const Eigen::MatrixXd& a, const ContractorMatrix& p, double theta) {
  Eigen::VectorXd d = p.diagonal(theta);
  return d.asDiagonal() * a * d.cwiseInverse().asDiagonal();
}

Rational scaled_lognorm(const std::vector<RationalMatrix>& lambdas, const ContractorMatrix& p, const Rational& theta,
                        const RationalVector& rho) {
  if (sgn(theta) <= 0) throw std::invalid_argument("theta must be positive");
  for (const auto& x : rho)
    if (sgn(x) <= 0) throw std::invalid_argument("rho must be positive");
  return mu_inf(scale(lambda_bar(lambdas, rho), p, theta));
}

namespace {

std::vector<Eigen::VectorXd> box_samples(const RhoBox& box, const ThetaBarOptions& opt) {
  const std::size_t s = box.lo.size();
  std::vector<std::size_t> free_axes;
  for (std::size_t k = 0; k < s; ++k) {
    if (!(box.lo[k] > 0) || box.hi[k] < box.lo[k]) throw std::invalid_argument("rho box must be positive and ordered");
    if (box.hi[k] > box.lo[k]) free_axes.push_back(k);
  }
  Eigen::VectorXd lo = Eigen::Map<const Eigen::VectorXd>(box.lo.data(), s);
  Eigen::VectorXd hi = Eigen::Map<const Eigen::VectorXd>(box.hi.data(), s);
  std::vector<Eigen::VectorXd> out;
  const std::size_t f = free_axes.size();
  auto fits = [&](double levels) { return std::pow(levels, static_cast<double>(f)) <= static_cast<double>(opt.max_grid); };
  std::mt19937_64 rng(opt.seed);
  if (fits(3) || fits(2)) {
    std::size_t levels = fits(3) ? 3 : 2;
    std::size_t total = 1;
    for (std::size_t k = 0; k < f; ++k) total *= levels;
    for (std::size_t code = 0; code < total; ++code) {
      Eigen::VectorXd x = lo;
      std::size_t c = code;
      for (std::size_t k = 0; k < f; ++k) {
        std::size_t lv = c % levels;
        c /= levels;
        std::size_t ax = free_axes[k];
        x(ax) = lo(ax) + (hi(ax) - lo(ax)) * static_cast<double>(lv) / static_cast<double>(levels - 1);
      }
      out.push_back(x);
    }
  } else {
    std::bernoulli_distribution coin(0.5);
    for (std::size_t v = 0; v < opt.max_grid; ++v) {
      Eigen::VectorXd x = lo;
      for (auto ax : free_axes)
        if (coin(rng)) x(ax) = hi(ax);
      out.push_back(x);
    }
    out.push_back((lo + hi) / 2);
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (f > 0)
    for (std::size_t k = 0; k < opt.random_samples; ++k) {
      Eigen::VectorXd x = lo;
      for (auto ax : free_axes) x(ax) = lo(ax) + (hi(ax) - lo(ax)) * u(rng);
      out.push_back(x);
    }
  return out;
}

}  // namespace

ThetaBarResult theta_bar_and_rate(const std::vector<RationalMatrix>& lambdas, const ContractorMatrix& p,
                                  const RhoBox& box, const ThetaBarOptions& opt) {
  if (box.lo.size() != lambdas.size() || box.hi.size() != lambdas.size())
    throw std::invalid_argument("rho box dimension differs from s");
  std::vector<Eigen::MatrixXd> lf;
  for (const auto& l : lambdas) lf.push_back(l.to_double());
  auto samples = box_samples(box, opt);
  std::vector<Eigen::MatrixXd> bars(samples.size());
  std::vector<double> tol(samples.size());
  parallel_for(samples.size(), opt.jobs, [&](std::size_t k) {
    bars[k] = lambda_bar(lf, samples[k]);
    tol[k] = 1e-12 * (1.0 + bars[k].cwiseAbs().maxCoeff());
  });

  std::vector<double> mus(samples.size());
  auto worst = [&](double theta) {
    parallel_for(samples.size(), opt.jobs, [&](std::size_t k) { mus[k] = mu_inf(scale(bars[k], p, theta)); });
    return *std::max_element(mus.begin(), mus.end());
  };
  auto feasible = [&](double theta) {
    parallel_for(samples.size(), opt.jobs, [&](std::size_t k) { mus[k] = mu_inf(scale(bars[k], p, theta)) + tol[k]; });
    return *std::max_element(mus.begin(), mus.end()) < 0;
  };

  ThetaBarResult res;
  res.samples = samples.size();
  if (p.trivial()) {
    res.unbounded = true;
    res.theta_used = opt.theta_eval.value_or(0.0);
    res.rate_c = worst(0.0);
    res.contractive = res.rate_c < 0;
    return res;
  }
  const double step = std::ldexp(1.0, -static_cast<int>(opt.resolution_bits));
  std::uint64_t lo = 0, hi = 0;
  if (feasible(step)) {
    lo = 1;
    for (;;) {
      std::uint64_t next = lo * 2;
      if (static_cast<double>(next) * step > opt.theta_max) {
        res.unbounded = true;
        break;
      }
      if (!feasible(static_cast<double>(next) * step)) {
        hi = next;
        break;
      }
      lo = next;
    }
    while (!res.unbounded && hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      (feasible(static_cast<double>(mid) * step) ? lo : hi) = mid;
    }
  }
  res.contractive = lo > 0;
  res.theta_bar = Rational(mpz_class(std::to_string(lo))) / Rational(mpz_class(std::to_string(1ULL << opt.resolution_bits)));
  res.theta_used = opt.theta_eval.value_or(res.theta_bar.get_d() / 2);
  res.rate_c = worst(res.theta_used);
  return res;
}

CrossCheckResult random_rho_crosscheck(const std::vector<RationalMatrix>& lambdas, std::size_t trials,
                                       std::uint64_t seed) {
  CrossCheckResult out;
  auto base = classify(lambda_bar(lambdas, RationalVector(lambdas.size(), Rational(1))));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(1, 1000), den(1, 100);
  for (std::size_t t = 0; t < trials; ++t) {
    RationalVector rho(lambdas.size());
    for (auto& x : rho) {
      x = Rational(num(rng), den(rng));
      x.canonicalize();
    }
    ++out.trials;
    std::string why;
    try {
      auto r = classify(lambda_bar(lambdas, rho));
      if (r.S_minus != base.S_minus) why = "S_minus differs";
      else if (r.weakly_contractive != base.weakly_contractive) why = "weak contractivity differs";
      else if (r.depth != base.depth) why = "depth classes differ";
    } catch (const std::invalid_argument& e) {
      why = e.what();
    }
    if (!why.empty()) {
      ++out.discrepancies;
      if (out.examples.size() < 5) {
        std::string s = why + " at rho = (";
        for (std::size_t k = 0; k < rho.size(); ++k) s += (k ? ", " : "") + rho[k].get_str();
        out.examples.push_back(s + ")");
      }
    }
  }
  return out;
}

const char* to_string(StrictCheck s) {
  switch (s) {
    case StrictCheck::Holds: return "holds";
    case StrictCheck::Fails: return "fails";
    case StrictCheck::NotApplicable: return "not_applicable";
  }
  return "?";
}

std::optional<RationalVector> diagonal_factor(const ReactionNetwork& net, const RationalMatrix& C) {
  const auto& g = net.gamma();
  if (C.rows() != net.n() || C.cols() != net.nu()) return std::nullopt;
  RationalVector theta(net.n());
  for (std::size_t i = 0; i < net.n(); ++i) {
    std::optional<Rational> t;
    for (std::size_t j = 0; j < net.nu(); ++j) {
      if (sgn(g(i, j)) == 0) {
        if (sgn(C(i, j)) != 0) return std::nullopt;
        continue;
      }
      Rational r = C(i, j) / g(i, j);
      if (t && *t != r) return std::nullopt;
      t = r;
    }
    if (!t) t = Rational(0);
    if (sgn(*t) < 0) return std::nullopt;
    theta[i] = *t;
  }
  return theta;
}

StrictCheck diagonal_strict_check(const ReactionNetwork& net, const GlfCertificate& cert) {
  auto theta = diagonal_factor(net, cert.C);
  if (!theta) return StrictCheck::NotApplicable;
  const auto& g = net.gamma();
  const auto& pairs = net.reactant_pairs();
  auto fam = rank_one_factors(net);
  for (std::size_t i = 0; i < net.n(); ++i) {
    if (sgn((*theta)[i]) == 0) continue;
    bool found = false;
    for (std::size_t l = 0; l < pairs.size() && !found; ++l) {
      const auto& p = pairs[l];
      if (p.species != i || sgn(g(i, p.reaction)) >= 0) continue;
      // row i of Lambda_l replaced by gamma_ij e_i
      RationalMatrix lam = cert.lambdas[l];
      RationalVector row(lam.cols());
      row[i] = g(i, p.reaction);
      lam.set_row(i, row);
      RationalMatrix lhs = lam * cert.C, rhs = cert.C * fam.Q[l];
      bool row_ok = true;
      for (std::size_t c = 0; c < net.nu() && row_ok; ++c) row_ok = lhs(i, c) == rhs(i, c);
      found = row_ok && sgn(row_sigmas(lam)[i]) < 0;
    }
    if (!found) return StrictCheck::Fails;
  }
  return StrictCheck::Holds;
}

}  // namespace crnc
