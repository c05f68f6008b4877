#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crnc/corpus.hpp"
#include "crnc/dynamics.hpp"
#include "oracles.hpp"

using namespace crnc;

namespace {

struct Bundle {
  ReactionNetwork net;
  GlfCertificate cert;
};

Bundle bundle(const char* name) {
  const CorpusEntry* e = find_corpus(name);
  ReactionNetwork net = corpus_network(*e);
  GlfCertificate cert = *verify_glf(net, corpus_candidate(*e, net)).certificate;
  return {net, cert};
}

}  // namespace

TEST_CASE("mass action rates and Jacobian") {
  ReactionNetwork net = parse_network("2 A + B -> C\nC -> 0\n");
  Kinetics kin = Kinetics::uniform(net, 2.0);
  Eigen::Vector3d x(0.5, 3.0, 1.5);
  Eigen::VectorXd r = evaluate_rate(net, kin, x);
  CHECK(r(0) == doctest::Approx(2.0 * 0.25 * 3.0));
  CHECK(r(1) == doctest::Approx(3.0));
  CHECK((rate_jacobian(net, kin, x) - oracle::fd_rate_jacobian(net, kin, x)).cwiseAbs().maxCoeff() < 1e-6);
  Eigen::VectorXd rho = pair_rhos(net, kin, x);
  REQUIRE(rho.size() == 3);
  CHECK(rho(0) == doctest::Approx(2.0 * 2 * 0.5 * 3.0));
}

TEST_CASE("periodic modulation") {
  ReactionNetwork net = parse_network("A -> B\nB -> A\n");
  Kinetics kin = Kinetics::uniform(net);
  kin.modulation[0] = Modulation{0.5, 4.0, 0.0};
  CHECK(kin.rate_constant(0, 1.0) == doctest::Approx(1.5));
  CHECK(kin.rate_constant(1, 1.0) == doctest::Approx(1.0));
  CHECK(kin.common_period() == 4.0);
  CHECK_FALSE(kin.time_invariant());
  kin.modulation[1] = Modulation{0.1, 3.0, 0.0};
  CHECK_THROWS_AS(kin.common_period(), std::invalid_argument);
  kin.modulation[1] = Modulation{1.5, 4.0, 0.0};
  CHECK_THROWS_AS(kin.validate(net), std::invalid_argument);
}

TEST_CASE("integrator against closed forms") {
  ReactionNetwork net = parse_network("A <-> B\n");
  Kinetics kin = Kinetics::uniform(net);
  kin.k = {2.0, 1.0};
  auto times = sample_grid(0, 5, 0.5);
  CHECK(times.size() == 11);
  Trajectory tr = integrate(net, kin, Eigen::Vector2d(1.0, 0.0), times, 1e-11);
  for (std::size_t k = 0; k < times.size(); ++k) {
    double a = 1.0 / 3 + 2.0 / 3 * std::exp(-3 * times[k]);
    CHECK(tr.states[k](0) == doctest::Approx(a).epsilon(1e-8));
    CHECK(tr.states[k].sum() == doctest::Approx(1.0).epsilon(1e-10));
  }
  // nonautonomous scalar: y' = cos t
  OdeRhs f = [](double t, const Eigen::VectorXd&, Eigen::VectorXd& dy) { dy.resize(1); dy(0) = std::cos(t); };
  IntegratorOptions opt;
  opt.tol = 1e-10;
  Trajectory s = integrate_ode(f, Eigen::VectorXd::Zero(1), sample_grid(0, 10, 0.25), opt);
  for (std::size_t k = 0; k < s.times.size(); ++k) CHECK(s.states[k](0) == doctest::Approx(std::sin(s.times[k])).epsilon(1e-7));
  CHECK(s.stats.accepted > 0);
}

TEST_CASE("integrator guards") {
  ReactionNetwork net = parse_network("A -> B\n");
  Kinetics kin = Kinetics::uniform(net);
  auto times = sample_grid(0, 1, 0.1);
  CHECK_THROWS_AS(integrate(net, kin, Eigen::Vector2d(1, 0), times, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(integrate(net, kin, Eigen::Vector2d(-1, 0), times), std::invalid_argument);
  CHECK_THROWS_AS(integrate(net, kin, Eigen::Vector3d(1, 0, 0), times), std::invalid_argument);
  // blow-up in finite time exhausts the step size
  OdeRhs f = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = y.array().square(); };
  IntegratorOptions opt;
  CHECK_THROWS_AS(integrate_ode(f, Eigen::VectorXd::Ones(1), {0.0, 2.0}, opt), IntegrationError);
  // fast consumption stays nonnegative
  ReactionNetwork fast = parse_network("A + B -> C\n");
  Kinetics kf = Kinetics::uniform(fast, 50.0);
  Trajectory tr = integrate(fast, kf, Eigen::Vector3d(1.0, 1.0, 0.0), sample_grid(0, 20, 1));
  for (const auto& x : tr.states) CHECK(x.minCoeff() > -1e-8);
}

TEST_CASE("steady state in a class") {
  Bundle b = bundle("ptm_full");
  Kinetics kin = Kinetics::uniform(b.net);
  Eigen::VectorXd anchor = Eigen::VectorXd::Constant(6, 0.5);
  auto xs = find_steady_state(b.net, kin, anchor);
  REQUIRE(xs);
  CHECK(steady_state_residual(b.net, kin, *xs) < 1e-9);
  auto D = conservation_analysis(b.net).left_kernel_basis.to_double();
  CHECK((D * (*xs - anchor)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("experiments on small budgets") {
  Bundle b = bundle("ptm_simplified");
  Kinetics kin = Kinetics::uniform(b.net);
  ExperimentOptions opt;
  opt.n = 8;
  opt.t1 = 10;
  ExperimentResult ne = nonexpansivity_experiment(b.net, b.cert, kin, opt);
  CHECK(ne.ok);
  CHECK(ne.passed == 8);
  CHECK(ne.metric("pairs") == 8);
  CHECK_THROWS_AS(ne.metric("missing"), std::out_of_range);

  opt.anchor = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(b.net.n()), 0.5);
  auto xs = find_steady_state(b.net, kin, *opt.anchor);
  REQUIRE(xs);
  ExperimentResult ex = extent_experiment(b.net, b.cert, kin, *xs, opt);
  CHECK(ex.ok);
  CHECK(ex.metric("max_correspondence_error") <= 1e-5);

  CHECK_THROWS_AS(entrainment_experiment(b.net, b.cert, kin, opt), std::invalid_argument);
  kin.modulation[0] = Modulation{0.5, 5.0, 0.0};
  opt.n = 3;
  opt.periods = 30;
  ExperimentResult en = entrainment_experiment(b.net, b.cert, kin, opt);
  CHECK(en.ok);
  CHECK(en.metric("pairwise_final_gap") < 1e-6);
}

TEST_CASE("experiments are reproducible from the seed and independent of jobs") {
  Bundle b = bundle("ptm_full");
  Kinetics kin = Kinetics::uniform(b.net);
  ContractorMatrix p = contractor(classify_at_one(b.cert));
  ExperimentOptions opt;
  opt.n = 6;
  opt.box_lo = 0.2;
  opt.theta = 0.025;
  ExperimentResult a = contraction_rate_experiment(b.net, b.cert, p, kin, opt);
  opt.jobs = 3;
  ExperimentResult c = contraction_rate_experiment(b.net, b.cert, p, kin, opt);
  REQUIRE(a.series.size() == c.series.size());
  for (std::size_t k = 0; k < a.series.size(); ++k) CHECK(a.series[k].values == c.series[k].values);
  CHECK(a.ok);
  CHECK(a.metric("sampled_c") < 0);
  CHECK(a.metric("worst_fitted_rate") < 0);
}

TEST_CASE("rho box from a state box") {
  ReactionNetwork net = parse_network("A + B -> C\nC -> A\n");
  Kinetics kin = Kinetics::uniform(net, 2.0);
  RhoBox box = rho_box_for_states(net, kin, 0.5, 3.0);
  REQUIRE(box.lo.size() == net.s());
  CHECK(box.lo[0] == doctest::Approx(1.0));
  CHECK(box.hi[0] == doctest::Approx(6.0));
  CHECK(box.lo[2] == doctest::Approx(2.0));
  CHECK(box.hi[2] == doctest::Approx(2.0));
}

TEST_CASE("restricted lognorm never exceeds the Lambda bound") {
  std::mt19937_64 rng(12);
  for (const char* name : {"ptm_simplified", "three_body", "unstable_abc"}) {
    Bundle b = bundle(name);
    Kinetics kin = Kinetics::uniform(b.net);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int t = 0; t < 5; ++t) {
      Eigen::VectorXd x(b.net.n());
      for (auto& v : x) v = u(rng);
      LognormEstimate est = restricted_lognorm_estimate(b.net, b.cert, kin, x, 200, 5 + t);
      CHECK(est.estimate <= est.bound + 1e-8);
      CHECK(est.finite_difference <= est.bound + 1e-4);
      CHECK(est.samples == 200);
    }
  }
}
