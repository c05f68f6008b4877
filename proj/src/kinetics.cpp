#include <cmath>
#include <numbers>

#include "crnc/dynamics.hpp"

namespace crnc {

Kinetics Kinetics::uniform(const ReactionNetwork& net, double k) {
  Kinetics kin;
  kin.k.assign(net.nu(), k);
  kin.modulation.assign(net.nu(), std::nullopt);
  return kin;
}

double Kinetics::rate_constant(std::size_t j, double t) const {
  if (modulation.empty() || !modulation[j]) return k[j];
  const Modulation& m = *modulation[j];
  return k[j] * (1 + m.amplitude * std::sin(2 * std::numbers::pi * t / m.period + m.phase));
}

bool Kinetics::time_invariant() const {
  for (const auto& m : modulation)
    if (m && m->amplitude != 0) return false;
  return true;
}

std::optional<double> Kinetics::common_period() const {
  std::optional<double> T;
  for (const auto& m : modulation) {
    if (!m) continue;
    if (T && *T != m->period) throw std::invalid_argument("modulations use different periods");
    T = m->period;
  }
  return T;
}

void Kinetics::validate(const ReactionNetwork& net) const {
  if (k.size() != net.nu()) throw std::invalid_argument("need one rate constant per reaction");
  if (!modulation.empty() && modulation.size() != net.nu())
    throw std::invalid_argument("need one modulation slot per reaction");
  for (double v : k)
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("rate constants must be positive");
  for (const auto& m : modulation)
    if (m && (!(m->amplitude >= 0 && m->amplitude < 1) || !(m->period > 0)))
      throw std::invalid_argument("modulation needs amplitude in [0,1) and period > 0");
}

namespace {

double ipow(double x, int e) {
  double r = 1;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace

Eigen::VectorXd evaluate_rate(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x, double t) {
  Eigen::VectorXd r(net.nu());
  for (std::size_t j = 0; j < net.nu(); ++j) {
    double v = kin.rate_constant(j, t);
    for (const auto& term : net.reactions()[j].reactants) v *= ipow(std::max(x(term.species), 0.0), term.coefficient);
    r(j) = v;
  }
  return r;
}

Eigen::MatrixXd rate_jacobian(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x, double t) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(net.nu(), net.n());
  for (std::size_t j = 0; j < net.nu(); ++j) {
    const auto& rs = net.reactions()[j].reactants;
    double kj = kin.rate_constant(j, t);
    for (std::size_t a = 0; a < rs.size(); ++a) {
      double v = kj * rs[a].coefficient * ipow(std::max(x(rs[a].species), 0.0), rs[a].coefficient - 1);
      for (std::size_t b = 0; b < rs.size(); ++b)
        if (b != a) v *= ipow(std::max(x(rs[b].species), 0.0), rs[b].coefficient);
      jac(j, rs[a].species) = v;
    }
  }
  return jac;
}

Eigen::VectorXd pair_rhos(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x, double t) {
  Eigen::MatrixXd jac = rate_jacobian(net, kin, x, t);
  Eigen::VectorXd rho(net.s());
  for (std::size_t l = 0; l < net.s(); ++l) {
    const auto& p = net.reactant_pairs()[l];
    rho(l) = jac(p.reaction, p.species);
  }
  return rho;
}

RhoBox rho_box_for_states(const ReactionNetwork& net, const Kinetics& kin, double lo, double hi) {
  Eigen::VectorXd a = pair_rhos(net, kin, Eigen::VectorXd::Constant(net.n(), lo));
  Eigen::VectorXd b = pair_rhos(net, kin, Eigen::VectorXd::Constant(net.n(), hi));
  RhoBox box;
  box.lo.assign(a.data(), a.data() + a.size());
  box.hi.assign(b.data(), b.data() + b.size());
  return box;
}

double steady_state_residual(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x) {
  return (net.gamma().to_double() * evaluate_rate(net, kin, x)).cwiseAbs().maxCoeff();
}

std::optional<Eigen::VectorXd> find_steady_state(const ReactionNetwork& net, const Kinetics& kin,
                                                 const Eigen::VectorXd& anchor, const SteadyStateOptions& opt) {
  if (!kin.time_invariant()) throw std::invalid_argument("steady states need time-invariant kinetics");
  if (anchor.size() != static_cast<Eigen::Index>(net.n())) throw std::invalid_argument("anchor length");
  const Eigen::MatrixXd G = net.gamma().to_double();
  RationalMatrix Dq = left_kernel(net.gamma());
  Eigen::MatrixXd D = Dq.rows() ? Dq.to_double() : Eigen::MatrixXd(0, net.n());
  const Eigen::VectorXd totals = D * anchor;
  const double scale = 1 + anchor.cwiseAbs().maxCoeff();

  Eigen::VectorXd x = anchor;
  for (std::size_t c = 0; c < opt.chunks; ++c) {
    try {
      Trajectory tr = integrate(net, kin, x, {0.0, opt.horizon}, 1e-10);
      x = tr.states.back();
    } catch (const IntegrationError&) {
      return std::nullopt;
    }
    if (x.cwiseAbs().maxCoeff() > 1e6 * scale) return std::nullopt;
    if (steady_state_residual(net, kin, x) < 1e-8 * scale) break;
  }

  auto F = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd out(net.n() + D.rows());
    out.head(net.n()) = G * evaluate_rate(net, kin, y);
    out.tail(D.rows()) = D * y - totals;
    return out;
  };
  Eigen::VectorXd fx = F(x);
  for (std::size_t it = 0; it < opt.newton_iters && fx.cwiseAbs().maxCoeff() >= opt.tol; ++it) {
    Eigen::MatrixXd JF(net.n() + D.rows(), net.n());
    JF.topRows(net.n()) = G * rate_jacobian(net, kin, x);
    JF.bottomRows(D.rows()) = D;
    Eigen::VectorXd step = JF.completeOrthogonalDecomposition().solve(-fx);
    double lambda = 1;
    bool improved = false;
    for (int k = 0; k < 30; ++k, lambda /= 2) {
      Eigen::VectorXd y = x + lambda * step;
      if (y.minCoeff() < -1e-12 * scale) continue;
      Eigen::VectorXd fy = F(y);
      if (fy.cwiseAbs().maxCoeff() < fx.cwiseAbs().maxCoeff()) {
        x = y;
        fx = fy;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (fx.cwiseAbs().maxCoeff() >= opt.tol) return std::nullopt;
  return x.cwiseMax(0.0);
}

}  // namespace crnc
