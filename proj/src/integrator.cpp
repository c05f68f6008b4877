#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "crnc/dynamics.hpp"

namespace crnc {

namespace {

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

}  // namespace

Trajectory integrate_ode(const OdeRhs& f, const Eigen::VectorXd& y0, const std::vector<double>& samples,
                         const IntegratorOptions& opt) {
  if (samples.empty()) throw std::invalid_argument("no sample times");
  if (!(opt.tol >= 1e-13 && opt.tol <= 1e-3)) throw std::invalid_argument("tolerance outside [1e-13, 1e-3]");
  for (std::size_t k = 1; k < samples.size(); ++k)
    if (!(samples[k] >= samples[k - 1])) throw std::invalid_argument("sample times must be nondecreasing");

  Trajectory tr;
  const std::size_t n = static_cast<std::size_t>(y0.size());
  double t = samples.front();
  const double tend = samples.back();
  Eigen::VectorXd y = y0;
  tr.times.push_back(t);
  tr.states.push_back(y);
  std::size_t next = 1;
  while (next < samples.size() && samples[next] <= t) {
    tr.times.push_back(samples[next]);
    tr.states.push_back(y);
    ++next;
  }
  if (next == samples.size()) return tr;

  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  f(t, y, k1);
  ++tr.stats.rhs_evals;
  const double rtol = opt.tol, atol = opt.tol;
  auto wnorm = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& ref) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = atol + rtol * std::abs(ref(i));
      s += (v(i) / w) * (v(i) / w);
    }
    return n ? std::sqrt(s / static_cast<double>(n)) : 0.0;
  };

  // initial step (Hairer & Wanner, II.4)
  double h;
  {
    double d0 = wnorm(y, y), dd1 = wnorm(k1, y);
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, tend - t);
    ytmp = y + h0 * k1;
    f(t + h0, ytmp, k2);
    ++tr.stats.rhs_evals;
    double dd2 = wnorm(k2 - k1, y) / h0;
    double m = std::max(dd1, dd2);
    double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 1.0 / 5);
    h = std::min(100 * h0, h1);
  }

  double err_prev = 1e-4;
  std::size_t steps = 0;
  while (t < tend) {
    if (++steps > opt.max_steps) throw IntegrationError(t, "step budget exhausted at t = " + std::to_string(t));
    if (h < opt.h_min * std::max(1.0, std::abs(t)))
      throw IntegrationError(t, "step size underflow at t = " + std::to_string(t));
    bool last = false;
    if (t + h >= tend) {
      h = tend - t;
      last = true;
    }
    ytmp = y + h * a21 * k1;
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, ynew, k7);
    tr.stats.rhs_evals += 6;
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    Eigen::VectorXd ref = y.cwiseAbs().cwiseMax(ynew.cwiseAbs());
    double en = wnorm(err, ref);

    if (en > 1.0 || !std::isfinite(en)) {
      ++tr.stats.rejected;
      double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      h *= std::min(1.0, fac);
      continue;
    }
    if (opt.admissible && !opt.admissible(ynew)) {
      ++tr.stats.guard_rejections;
      h *= 0.5;
      continue;
    }
    // dense output on [t, t + h]
    Eigen::VectorXd r2 = ynew - y;
    Eigen::VectorXd r3 = h * k1 - r2;
    Eigen::VectorXd r4 = r2 - h * k7 - r3;
    Eigen::VectorXd r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    double tnew = last ? tend : t + h;
    while (next < samples.size() && samples[next] <= tnew) {
      double s = (samples[next] - t) / h;
      if (samples[next] == tnew) {
        tr.states.push_back(ynew);
      } else {
        double s1 = 1 - s;
        tr.states.push_back(y + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5))));
      }
      tr.times.push_back(samples[next]);
      ++next;
    }
    ++tr.stats.accepted;
    t = tnew;
    y = ynew;
    k1 = k7;
    // PI step control
    double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
    fac = std::clamp(fac, 0.2, 5.0);
    err_prev = std::max(en, 1e-4);
    h *= fac;
  }
  return tr;
}

Trajectory integrate(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x0,
                     const std::vector<double>& sample_times, double tol) {
  if (x0.size() != static_cast<Eigen::Index>(net.n())) throw std::invalid_argument("initial state length");
  if (x0.minCoeff() < 0) throw std::invalid_argument("initial state must be nonnegative");
  const Eigen::MatrixXd G = net.gamma().to_double();
  IntegratorOptions opt;
  opt.tol = tol;
  const double floor = -10 * tol;
  opt.admissible = [floor](const Eigen::VectorXd& y) { return y.minCoeff() >= floor; };
  Trajectory tr = integrate_ode(
      [&](double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = G * evaluate_rate(net, kin, x, t); }, x0,
      sample_times, opt);
  for (auto& s : tr.states) s = s.cwiseMax(0.0);
  return tr;
}

std::vector<double> sample_grid(double t0, double t1, double dt) {
  if (!(t1 >= t0) || !(dt > 0)) throw std::invalid_argument("bad sample grid");
  std::size_t n = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
  std::vector<double> out;
  for (std::size_t k = 0; k <= n; ++k) out.push_back(t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(n, 1)));
  if (n == 0) out.resize(1);
  return out;
}

void write_csv(const ReactionNetwork& net, const Trajectory& tr, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t";
  for (const auto& s : net.species()) out << ',' << s.name;
  out << '\n' << std::setprecision(12);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    out << tr.times[k];
    for (Eigen::Index i = 0; i < tr.states[k].size(); ++i) out << ',' << tr.states[k](i);
    out << '\n';
  }
}

}  // namespace crnc
