#include <algorithm>
#include <cmath>
#include <random>

#include "crnc/dynamics.hpp"
#include "crnc/parallel.hpp"

namespace crnc {

double ExperimentResult::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  throw std::out_of_range("no metric " + name);
}

namespace {

std::mt19937_64 item_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXd uniform_state(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd x(n);
  for (std::size_t i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

// x + Gamma eta inside [lo, hi] (hi may be infinite); eta shrinks after repeated rejection
std::optional<Eigen::VectorXd> class_partner(const Eigen::MatrixXd& G, const Eigen::VectorXd& x, double scale, double lo,
                                             double hi, std::mt19937_64& rng) {
  for (int round = 0; round < 8; ++round, scale /= 2) {
    std::normal_distribution<double> nd(0.0, scale);
    for (int tries = 0; tries < 200; ++tries) {
      Eigen::VectorXd eta(G.cols());
      for (Eigen::Index j = 0; j < eta.size(); ++j) eta(j) = nd(rng);
      Eigen::VectorXd y = x + G * eta;
      if (y.minCoeff() >= lo && y.maxCoeff() <= hi) return y;
    }
  }
  return std::nullopt;
}

void finish_series(DistanceSeries& s, const std::vector<double>& t) {
  s.derivative.clear();
  s.summary.initial = s.values.front();
  s.summary.final = s.values.back();
  s.summary.max_derivative = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < s.values.size(); ++k) {
    double d = (s.values[k + 1] - s.values[k]) / (t[k + 1] - t[k]);
    s.derivative.push_back(d);
    s.summary.max_derivative = std::max(s.summary.max_derivative, d);
  }
  if (s.derivative.empty()) s.summary.max_derivative = 0;
}

double growth(const Trajectory& tr) {
  double g = 1;
  const auto& x0 = tr.states.front();
  for (const auto& x : tr.states)
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x0(i) > 0) g = std::max(g, x(i) / x0(i));
  return g;
}

// least-squares slope of log d against t over points above the noise floor
double log_slope(const std::vector<double>& t, const std::vector<double>& d) {
  if (d.empty() || d.front() <= 0) return std::numeric_limits<double>::quiet_NaN();
  const double floor = std::max(1e-10, 1e-7 * d.front());
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] <= floor) break;
    double y = std::log(d[k]);
    st += t[k];
    sy += y;
    stt += t[k] * t[k];
    sty += t[k] * y;
    ++n;
  }
  if (n < 3) return std::numeric_limits<double>::quiet_NaN();
  double den = static_cast<double>(n) * stt - st * st;
  return (static_cast<double>(n) * sty - st * sy) / den;
}

}  // namespace

ExperimentResult nonexpansivity_experiment(const ReactionNetwork& net, const GlfCertificate& cert, const Kinetics& kin,
                                           const ExperimentOptions& opt) {
  kin.validate(net);
  ExperimentResult res;
  res.kind = "nonexpansivity";
  res.times = sample_grid(opt.t0, opt.t1, opt.dt);
  const Eigen::MatrixXd G = net.gamma().to_double();
  const Eigen::MatrixXd B = cert.B.to_double();
  res.series.resize(opt.n);
  std::vector<std::string> errors(opt.n);
  parallel_for(opt.n, opt.jobs, [&](std::size_t k) {
    auto rng = item_rng(opt.seed, k);
    Eigen::VectorXd x1 = uniform_state(net.n(), opt.box_lo, opt.box_hi, rng);
    auto x2 = class_partner(G, x1, opt.eta_scale, 0.0, std::numeric_limits<double>::infinity(), rng);
    if (!x2) x2 = x1;
    DistanceSeries& s = res.series[k];
    try {
      Trajectory a = integrate(net, kin, x1, res.times, opt.tol);
      Trajectory b = integrate(net, kin, *x2, res.times, opt.tol);
      for (std::size_t i = 0; i < res.times.size(); ++i) s.values.push_back(inf_norm(B * (a.states[i] - b.states[i])));
      finish_series(s, res.times);
      s.summary.max_growth = std::max(growth(a), growth(b));
      s.summary.tolerance = 1e-6 * (1 + s.summary.initial);
      s.summary.passed = s.summary.max_derivative <= s.summary.tolerance;
    } catch (const IntegrationError& e) {
      errors[k] = e.what();
      s.values.assign(1, 0.0);
      s.summary.passed = false;
    }
  });
  double worst_ratio = 0, max_growth = 1;
  for (std::size_t k = 0; k < opt.n; ++k) {
    const auto& s = res.series[k].summary;
    if (s.passed) ++res.passed;
    if (s.tolerance > 0) worst_ratio = std::max(worst_ratio, s.max_derivative / s.tolerance);
    max_growth = std::max(max_growth, s.max_growth);
    if (!errors[k].empty()) res.warnings.push_back("pair " + std::to_string(k) + ": " + errors[k]);
  }
  res.ok = res.passed == opt.n;
  res.metrics = {{"pairs", static_cast<double>(opt.n)},
                 {"passed", static_cast<double>(res.passed)},
                 {"worst_derivative_over_tolerance", worst_ratio},
                 {"max_growth", max_growth}};
  if (max_growth > 10)
    res.warnings.push_back("unbounded growth: some coordinate exceeds 10x its initial value (max ratio " +
                           std::to_string(max_growth) + ")");
  return res;
}

ExperimentResult extent_experiment(const ReactionNetwork& net, const GlfCertificate& cert, const Kinetics& kin,
                                   const Eigen::VectorXd& xbar, const ExperimentOptions& opt) {
  kin.validate(net);
  ExperimentResult res;
  res.kind = "extent";
  res.times = sample_grid(opt.t0, opt.t1, opt.dt);
  const Eigen::MatrixXd G = net.gamma().to_double();
  const Eigen::MatrixXd C = cert.C.to_double();
  const std::size_t nu = net.nu();
  IntegratorOptions io;
  io.tol = opt.tol;
  const double floor = -10 * opt.tol;
  io.admissible = [&](const Eigen::VectorXd& xi) { return (xbar + G * xi).minCoeff() >= floor; };
  OdeRhs rhs = [&](double t, const Eigen::VectorXd& xi, Eigen::VectorXd& d) {
    d = evaluate_rate(net, kin, xbar + G * xi, t);
  };
  res.series.resize(opt.n);
  std::vector<double> corr(opt.n, 0.0), lyap(opt.n, 0.0);
  std::vector<std::string> errors(opt.n);
  parallel_for(opt.n, opt.jobs, [&](std::size_t k) {
    auto rng = item_rng(opt.seed, k);
    Eigen::VectorXd xi1 = Eigen::VectorXd::Zero(nu), xi2 = Eigen::VectorXd::Zero(nu);
    double scale = opt.eta_scale;
    bool found = false;
    for (int round = 0; round < 8 && !found; ++round, scale /= 2) {
      std::normal_distribution<double> nd(0.0, scale);
      for (int tries = 0; tries < 200 && !found; ++tries) {
        for (std::size_t j = 0; j < nu; ++j) {
          xi1(j) = nd(rng);
          xi2(j) = xi1(j) + nd(rng);
        }
        found = (xbar + G * xi1).minCoeff() >= 0 && (xbar + G * xi2).minCoeff() >= 0;
      }
    }
    if (!found) xi1 = xi2 = Eigen::VectorXd::Zero(nu);
    DistanceSeries& s = res.series[k];
    try {
      Trajectory a = integrate_ode(rhs, xi1, res.times, io);
      Trajectory b = integrate_ode(rhs, xi2, res.times, io);
      for (std::size_t i = 0; i < res.times.size(); ++i) s.values.push_back(inf_norm(C * (a.states[i] - b.states[i])));
      finish_series(s, res.times);
      s.summary.tolerance = 1e-6 * (1 + s.summary.initial);
      s.summary.passed = s.summary.max_derivative <= s.summary.tolerance;
      Trajectory x = integrate(net, kin, xbar + G * xi1, res.times, opt.tol);
      double v0 = 0, vprev = 0;
      for (std::size_t i = 0; i < res.times.size(); ++i) {
        Eigen::VectorXd via = xbar + G * a.states[i];
        corr[k] = std::max(corr[k], inf_norm(x.states[i] - via) / (1 + inf_norm(x.states[i])));
        double v = inf_norm(C * evaluate_rate(net, kin, x.states[i], res.times[i]));
        if (i == 0) v0 = v;
        else lyap[k] = std::max(lyap[k], (v - vprev) / (1 + v0));
        vprev = v;
      }
    } catch (const IntegrationError& e) {
      errors[k] = e.what();
      s.values.assign(1, 0.0);
      s.summary.passed = false;
    }
  });
  double worst_corr = 0, worst_lyap = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < opt.n; ++k) {
    if (res.series[k].summary.passed) ++res.passed;
    worst_corr = std::max(worst_corr, corr[k]);
    worst_lyap = std::max(worst_lyap, lyap[k]);
    if (!errors[k].empty()) res.warnings.push_back("pair " + std::to_string(k) + ": " + errors[k]);
  }
  if (opt.n == 0) worst_lyap = 0;
  res.ok = res.passed == opt.n && worst_corr <= 1e-5 && worst_lyap <= 1e-6;
  res.metrics = {{"pairs", static_cast<double>(opt.n)},
                 {"passed", static_cast<double>(res.passed)},
                 {"max_correspondence_error", worst_corr},
                 {"max_lyapunov_increase", worst_lyap}};
  return res;
}

ExperimentResult contraction_rate_experiment(const ReactionNetwork& net, const GlfCertificate& cert,
                                             const ContractorMatrix& p, const Kinetics& kin,
                                             const ExperimentOptions& opt) {
  kin.validate(net);
  ExperimentResult res;
  res.kind = "rate";
  res.times = sample_grid(opt.t0, opt.t1, opt.dt);
  const Eigen::MatrixXd G = net.gamma().to_double();
  const Eigen::MatrixXd PB = p.diagonal(opt.theta).asDiagonal() * cert.B.to_double();
  res.series.resize(opt.n);
  std::vector<std::string> errors(opt.n);
  parallel_for(opt.n, opt.jobs, [&](std::size_t k) {
    auto rng = item_rng(opt.seed, k);
    Eigen::VectorXd x1 = uniform_state(net.n(), opt.box_lo, opt.box_hi, rng);
    auto x2 = class_partner(G, x1, opt.eta_scale, opt.box_lo, opt.box_hi, rng);
    DistanceSeries& s = res.series[k];
    if (!x2) {
      errors[k] = "no same-class partner inside the box";
      s.values.assign(1, 0.0);
      s.summary.passed = false;
      return;
    }
    try {
      Trajectory a = integrate(net, kin, x1, res.times, opt.tol);
      Trajectory b = integrate(net, kin, *x2, res.times, opt.tol);
      for (std::size_t i = 0; i < res.times.size(); ++i)
        s.values.push_back(inf_norm(PB * (a.states[i] - b.states[i])));
      finish_series(s, res.times);
      s.summary.fitted_rate = log_slope(res.times, s.values);
      s.summary.passed = std::isnan(s.summary.fitted_rate) ? s.summary.initial == 0 : s.summary.fitted_rate < 0;
    } catch (const IntegrationError& e) {
      errors[k] = e.what();
      s.values.assign(1, 0.0);
      s.summary.passed = false;
    }
  });
  double worst = -std::numeric_limits<double>::infinity(), best = 0;
  std::size_t fitted = 0;
  for (std::size_t k = 0; k < opt.n; ++k) {
    const auto& s = res.series[k].summary;
    if (s.passed) ++res.passed;
    if (!std::isnan(s.fitted_rate)) {
      worst = std::max(worst, s.fitted_rate);
      best = std::min(best, s.fitted_rate);
      ++fitted;
    }
    if (!errors[k].empty()) res.warnings.push_back("pair " + std::to_string(k) + ": " + errors[k]);
  }
  ThetaBarOptions to;
  to.jobs = opt.jobs;
  to.seed = opt.seed;
  const RhoBox rbox = rho_box_for_states(net, kin, opt.box_lo, opt.box_hi);
  ThetaBarResult tb = theta_bar_and_rate(cert.lambdas, p, rbox, to);
  to.theta_eval = opt.theta;
  ThetaBarResult at = theta_bar_and_rate(cert.lambdas, p, rbox, to);
  const double margin = 1e-4;
  res.ok = res.passed == opt.n && fitted > 0 && worst <= -margin;
  res.metrics = {{"pairs", static_cast<double>(opt.n)},
                 {"passed", static_cast<double>(res.passed)},
                 {"theta", opt.theta},
                 {"worst_fitted_rate", fitted ? worst : std::numeric_limits<double>::quiet_NaN()},
                 {"best_fitted_rate", fitted ? best : std::numeric_limits<double>::quiet_NaN()},
                 {"rate_margin", margin},
                 {"sampled_c", tb.rate_c},
                 {"sampled_c_theta", tb.theta_used},
                 {"c_at_theta", at.rate_c},
                 {"theta_bar", tb.unbounded ? std::numeric_limits<double>::infinity() : tb.theta_bar.get_d()},
                 {"rho_samples", static_cast<double>(tb.samples)}};
  if (!(tb.rate_c < 0)) res.warnings.push_back("sampled c over the rho box is not negative");
  if (!(at.rate_c < 0))
    res.warnings.push_back("theta = " + std::to_string(opt.theta) + " is not below the theta_bar estimate " +
                           tb.theta_bar.get_str() + "; sampled mu there is " + std::to_string(at.rate_c));
  return res;
}

ExperimentResult entrainment_experiment(const ReactionNetwork& net, const GlfCertificate& cert, const Kinetics& kin,
                                        const ExperimentOptions& opt) {
  kin.validate(net);
  auto T = kin.common_period();
  if (!T) throw std::invalid_argument("entrainment needs an active periodic modulation");
  ExperimentResult res;
  res.kind = "entrainment";
  for (std::size_t m = 0; m <= opt.periods; ++m) res.times.push_back(opt.t0 + static_cast<double>(m) * *T);
  const Eigen::MatrixXd G = net.gamma().to_double();
  const Eigen::MatrixXd B = cert.B.to_double();
  Eigen::VectorXd anchor =
      opt.anchor ? *opt.anchor : Eigen::VectorXd::Constant(net.n(), (opt.box_lo + opt.box_hi) / 2);
  const double tol = std::min(opt.tol, 1e-10);
  std::vector<Eigen::VectorXd> finals(opt.n);
  std::vector<std::size_t> first_below(opt.n, 0);
  std::vector<std::string> errors(opt.n);
  res.series.resize(opt.n);
  parallel_for(opt.n, opt.jobs, [&](std::size_t k) {
    auto rng = item_rng(opt.seed, k);
    auto x0 = class_partner(G, anchor, opt.eta_scale, 0.0, std::numeric_limits<double>::infinity(), rng);
    if (!x0) x0 = anchor;
    DistanceSeries& s = res.series[k];
    try {
      Trajectory tr = integrate(net, kin, *x0, res.times, tol);
      for (std::size_t m = 0; m + 1 < tr.states.size(); ++m)
        s.values.push_back(inf_norm(B * (tr.states[m + 1] - tr.states[m])));
      finals[k] = tr.states.back();
      std::vector<double> idx(s.values.size());
      for (std::size_t m = 0; m < idx.size(); ++m) idx[m] = static_cast<double>(m);
      if (s.values.empty()) s.values.push_back(0);
      finish_series(s, idx.size() > 1 ? idx : std::vector<double>{0, 1});
      s.summary.passed = s.summary.initial == 0;
      for (std::size_t m = 0; m < s.values.size() && !s.summary.passed; ++m)
        if (s.values[m] < 1e-3 * s.summary.initial) {
          s.summary.passed = true;
          first_below[k] = m;
        }
    } catch (const IntegrationError& e) {
      errors[k] = e.what();
      s.values.assign(1, 0.0);
      s.summary.passed = false;
    }
  });
  double pairwise = 0, worst_ratio = 0;
  std::size_t latest = 0;
  for (std::size_t a = 0; a < opt.n; ++a) {
    const auto& s = res.series[a];
    if (s.summary.passed) ++res.passed;
    if (s.summary.initial > 0)
      worst_ratio = std::max(worst_ratio, *std::min_element(s.values.begin(), s.values.end()) / s.summary.initial);
    latest = std::max(latest, first_below[a]);
    if (!errors[a].empty()) {
      res.warnings.push_back("initial " + std::to_string(a) + ": " + errors[a]);
      continue;
    }
    for (std::size_t b = a + 1; b < opt.n; ++b)
      if (errors[b].empty()) pairwise = std::max(pairwise, inf_norm(B * (finals[a] - finals[b])));
  }
  res.ok = res.passed == opt.n && pairwise < 1e-6;
  res.metrics = {{"initials", static_cast<double>(opt.n)},
                 {"passed", static_cast<double>(res.passed)},
                 {"period", *T},
                 {"periods", static_cast<double>(opt.periods)},
                 {"worst_min_gap_ratio", worst_ratio},
                 {"latest_period_below_threshold", static_cast<double>(latest)},
                 {"pairwise_final_gap", pairwise}};
  return res;
}

LognormEstimate restricted_lognorm_sample(const Eigen::MatrixXd& B, const Eigen::MatrixXd& gamma,
                                          const Eigen::MatrixXd& J, std::size_t n_samples, std::uint64_t seed) {
  LognormEstimate est;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double h = 1e-6;
  for (std::size_t k = 0; k < n_samples; ++k) {
    Eigen::VectorXd eta(gamma.cols());
    for (Eigen::Index j = 0; j < eta.size(); ++j) eta(j) = nd(rng);
    Eigen::VectorXd z = gamma * eta;
    Eigen::VectorXd w = B * z;
    double nw = inf_norm(w);
    if (nw < 1e-12) continue;
    z /= nw;
    w /= nw;
    Eigen::VectorXd v = B * (J * z);
    double d = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (std::abs(w(i)) >= 1 - 1e-12) d = std::max(d, (w(i) > 0 ? 1.0 : -1.0) * v(i));
    est.estimate = std::max(est.estimate, d);
    est.finite_difference = std::max(est.finite_difference, (inf_norm(w + h * v) - 1) / h);
    ++est.samples;
  }
  return est;
}

LognormEstimate restricted_lognorm_estimate(const ReactionNetwork& net, const GlfCertificate& cert,
                                            const Kinetics& kin, const Eigen::VectorXd& x, std::size_t n_samples,
                                            std::uint64_t seed) {
  if (x.minCoeff() <= 0) throw std::invalid_argument("state must be positive");
  const Eigen::MatrixXd G = net.gamma().to_double();
  Eigen::MatrixXd J = G * rate_jacobian(net, kin, x);
  LognormEstimate est = restricted_lognorm_sample(cert.B.to_double(), G, J, n_samples, seed);
  std::vector<Eigen::MatrixXd> lf;
  for (const auto& l : cert.lambdas) lf.push_back(l.to_double());
  est.bound = mu_inf(lambda_bar(lf, pair_rhos(net, kin, x)));
  return est;
}

}  // namespace crnc
