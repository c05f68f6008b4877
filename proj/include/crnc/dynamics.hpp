#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crnc/certificates.hpp"
#include "crnc/contraction.hpp"
#include "crnc/model.hpp"

namespace crnc {

struct Modulation {
  double amplitude = 0;  // in [0, 1)
  double period = 1;
  double phase = 0;
};

struct Kinetics {
  std::vector<double> k;
  std::vector<std::optional<Modulation>> modulation;

  static Kinetics uniform(const ReactionNetwork& net, double k = 1.0);
  double rate_constant(std::size_t j, double t) const;
  bool time_invariant() const;
  // shared period of all active modulations; throws on mixed periods
  std::optional<double> common_period() const;
  void validate(const ReactionNetwork& net) const;
};

Eigen::VectorXd evaluate_rate(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x, double t = 0);
Eigen::MatrixXd rate_jacobian(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x, double t = 0);
// rho_l = dR_j / dx_i for the reactant pairs
Eigen::VectorXd pair_rhos(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x, double t = 0);

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;

struct IntegratorOptions {
  double tol = 1e-9;
  double h_min = 1e-13;
  std::size_t max_steps = 50'000'000;
  // false rejects the step
  std::function<bool(const Eigen::VectorXd&)> admissible;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t guard_rejections = 0;
  std::size_t rhs_evals = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  IntegratorStats stats;
};

class IntegrationError : public std::runtime_error {
public:
  IntegrationError(double t, const std::string& what) : std::runtime_error(what), time_(t) {}
  double time() const { return time_; }

private:
  double time_;
};

// Dormand-Prince 5(4) with dense output at the sample times (sorted, first is the start time)
Trajectory integrate_ode(const OdeRhs& f, const Eigen::VectorXd& y0, const std::vector<double>& sample_times,
                         const IntegratorOptions& opt);
// mass-action x' = Gamma R(x, t), rejecting steps with a coordinate below -10 tol
Trajectory integrate(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x0,
                     const std::vector<double>& sample_times, double tol = 1e-9);
std::vector<double> sample_grid(double t0, double t1, double dt);
void write_csv(const ReactionNetwork& net, const Trajectory& tr, const std::string& path);

struct SteadyStateOptions {
  double horizon = 200;
  std::size_t chunks = 5;
  double tol = 1e-10;
  std::size_t newton_iters = 100;
};

std::optional<Eigen::VectorXd> find_steady_state(const ReactionNetwork& net, const Kinetics& kin,
                                                 const Eigen::VectorXd& anchor, const SteadyStateOptions& opt = {});
double steady_state_residual(const ReactionNetwork& net, const Kinetics& kin, const Eigen::VectorXd& x);

struct SeriesSummary {
  double initial = 0;
  double final = 0;
  double max_derivative = 0;
  double tolerance = 0;
  double fitted_rate = std::numeric_limits<double>::quiet_NaN();  // NaN when not applicable
  double max_growth = 1;  // max_i x_i(t) / x_i(0)
  bool passed = true;
};

struct DistanceSeries {
  std::vector<double> values;
  std::vector<double> derivative;
  SeriesSummary summary;
};

struct ExperimentResult {
  std::string kind;
  std::vector<double> times;
  std::vector<DistanceSeries> series;
  std::size_t passed = 0;
  bool ok = false;
  std::vector<std::pair<std::string, double>> metrics;  // kind specific, fixed order
  std::vector<std::string> warnings;

  double metric(const std::string& name) const;
};

struct ExperimentOptions {
  std::size_t n = 100;  // pairs or initial conditions
  double t0 = 0;
  double t1 = 20;
  double dt = 0.05;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  double box_lo = 0.1;  // sampling box, box_lo is also the positivity floor
  double box_hi = 2.0;
  double eta_scale = 0.5;
  double theta = 0.05;
  std::size_t periods = 60;
  std::optional<Eigen::VectorXd> anchor;  // class anchor for extent and entrainment
  unsigned jobs = 1;
};

ExperimentResult nonexpansivity_experiment(const ReactionNetwork& net, const GlfCertificate& cert, const Kinetics& kin,
                                           const ExperimentOptions& opt);
ExperimentResult extent_experiment(const ReactionNetwork& net, const GlfCertificate& cert, const Kinetics& kin,
                                   const Eigen::VectorXd& steady_state, const ExperimentOptions& opt);
ExperimentResult contraction_rate_experiment(const ReactionNetwork& net, const GlfCertificate& cert,
                                             const ContractorMatrix& p, const Kinetics& kin,
                                             const ExperimentOptions& opt);
ExperimentResult entrainment_experiment(const ReactionNetwork& net, const GlfCertificate& cert, const Kinetics& kin,
                                        const ExperimentOptions& opt);

// rho box covered by rho_l(x) for x in [lo, hi]^n (mass-action rhos are monotone in x)
RhoBox rho_box_for_states(const ReactionNetwork& net, const Kinetics& kin, double lo, double hi);

struct LognormEstimate {
  double estimate = -std::numeric_limits<double>::infinity();  // sup of one-sided derivatives
  double finite_difference = -std::numeric_limits<double>::infinity();  // same at h = 1e-6
  double bound = 0;  // mu_inf(sum rho_l Lambda_l)
  std::size_t samples = 0;
};

LognormEstimate restricted_lognorm_sample(const Eigen::MatrixXd& B, const Eigen::MatrixXd& gamma,
                                          const Eigen::MatrixXd& J, std::size_t n_samples, std::uint64_t seed);
LognormEstimate restricted_lognorm_estimate(const ReactionNetwork& net, const GlfCertificate& cert,
                                            const Kinetics& kin, const Eigen::VectorXd& x, std::size_t n_samples,
                                            std::uint64_t seed);

}  // namespace crnc
