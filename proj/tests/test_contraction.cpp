#include <doctest.h>

#include <random>

#include "crnc/contraction.hpp"
#include "crnc/corpus.hpp"
#include "oracles.hpp"

using namespace crnc;

namespace {

const RationalMatrix kChain{{-1, 1, 0, 0, 0}, {0, -1, 1, 0, 0}, {0, 0, -1, 1, 0}, {0, 0, 1, -2, 0}, {0, 0, 0, 1, -1}};

std::vector<std::size_t> idx(std::initializer_list<std::size_t> one_based) {
  std::vector<std::size_t> v;
  for (auto i : one_based) v.push_back(i - 1);
  return v;
}

// largest theta on the dyadic grid with mu < 0, by plain bisection on one matrix
double bisect_theta(const Eigen::MatrixXd& a, const ContractorMatrix& p, unsigned bits = 20) {
  auto ok = [&](double t) { return oracle::mu_rows(scale(a, p, t)) + 1e-12 * (1 + a.cwiseAbs().maxCoeff()) < 0; };
  const double step = std::ldexp(1.0, -static_cast<int>(bits));
  if (!ok(step)) return 0;
  std::uint64_t lo = 1, hi = 1;
  while (ok(static_cast<double>(hi) * step)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::uint64_t mid = (lo + hi) / 2;
    (ok(static_cast<double>(mid) * step) ? lo : hi) = mid;
  }
  return static_cast<double>(lo) * step;
}

}  // namespace

TEST_CASE("five by five chain: depth classes, contractor and rate") {
  WeakContractivityReport r = classify(kChain);
  CHECK(r.S_minus == idx({4}));
  CHECK(r.S_zero == idx({1, 2, 3, 5}));
  REQUIRE(r.depth_classes.size() == 3);
  CHECK(r.depth_classes[0] == idx({3, 5}));
  CHECK(r.depth_classes[1] == idx({2}));
  CHECK(r.depth_classes[2] == idx({1}));
  CHECK(r.weakly_contractive);
  ContractorMatrix p = contractor(r);
  CHECK(p.exponents == std::vector<unsigned>{0, 1, 2, 3, 2});
  RationalMatrix P = p.at(Rational(1, 10));
  CHECK(P(3, 3) == Rational(1331, 1000));
  CHECK(scaled_lognorm({kChain}, p, Rational(1, 10), {1}) == Rational(-1, 11));
  // rho scales the single matrix
  CHECK(scaled_lognorm({kChain}, p, Rational(1, 10), {3}) == Rational(-3, 11));
}

TEST_CASE("classification edge cases") {
  CHECK_FALSE(classify(RationalMatrix{{0, 0}, {0, -1}}).weakly_contractive);
  CHECK_THROWS_AS(contractor(classify(RationalMatrix{{0, 0}, {0, -1}})), std::invalid_argument);
  CHECK_THROWS_AS(classify(RationalMatrix{{1, 0}, {0, -1}}), std::invalid_argument);
  WeakContractivityReport all = classify(RationalMatrix{{-2, 1}, {1, -3}});
  CHECK(all.S_zero.empty());
  CHECK(all.max_depth == 0);
  ContractorMatrix id = contractor(all);
  CHECK(id.trivial());
  CHECK(scaled_lognorm({RationalMatrix{{-2, 1}, {1, -3}}}, id, Rational(7), {1}) == -1);
  CHECK_THROWS(scaled_lognorm({kChain}, contractor(classify(kChain)), Rational(0), {1}));
}

TEST_CASE("theta bar on a collapsed box matches bisection") {
  ContractorMatrix p = contractor(classify(kChain));
  RhoBox box{{1.0}, {1.0}};
  ThetaBarResult tb = theta_bar_and_rate({kChain}, p, box);
  CHECK_FALSE(tb.unbounded);
  CHECK(tb.contractive);
  CHECK(tb.theta_bar.get_d() == bisect_theta(kChain.to_double(), p));
  CHECK(tb.rate_c < 0);
  // mu reaches 0 at theta = 1, so the dyadic estimate sits one step below
  CHECK(tb.theta_bar == 1 - oracle::q(1, 1 << 20));
}

TEST_CASE("constructive weakly contractive matrices contract below theta bar") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(3, 7), w(1, 4);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = static_cast<std::size_t>(size(rng));
    // random depth per index; couplings go one level up or sideways, never deeper
    std::vector<int> depth(m);
    std::uniform_int_distribution<int> dd(0, 3);
    for (auto& d : depth) d = dd(rng);
    depth[0] = 0;
    std::sort(depth.begin(), depth.end());
    for (std::size_t i = 1; i < m; ++i) depth[i] = std::min(depth[i], depth[i - 1] + 1);
    RationalMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      Rational off = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        bool link = depth[j] == depth[i] - 1 || (depth[j] == depth[i] && w(rng) == 1);
        if (!link) continue;
        a(i, j) = (w(rng) % 2 ? 1 : -1) * w(rng);
        off += abs(a(i, j));
      }
      a(i, i) = -off - (depth[i] == 0 ? Rational(w(rng)) : Rational(0));
    }
    WeakContractivityReport r = classify(a);
    REQUIRE(r.weakly_contractive);
    ContractorMatrix p = contractor(r);
    ThetaBarResult tb = theta_bar_and_rate({a}, p, RhoBox{{1.0}, {1.0}});
    REQUIRE(tb.contractive);
    double bar = tb.unbounded ? 8.0 : tb.theta_bar.get_d();
    for (int k = 1; k <= 10; ++k) {
      double th = bar * k / 11.0;
      CHECK(oracle::mu_rows(scale(a.to_double(), p, th)) < 0);
    }
  }
}

TEST_CASE("a uniform theta cannot absorb heavier coupling to a deeper class") {
  // depth-1 row 2 leans on depth-2 row 3 as much as on row 1
  RationalMatrix a{{-1, 0, 0}, {1, -2, 1}, {0, 1, -1}};
  WeakContractivityReport r = classify(a);
  REQUIRE(r.weakly_contractive);
  CHECK(r.max_depth == 2);
  ContractorMatrix p = contractor(r);
  ThetaBarResult tb = theta_bar_and_rate({a}, p, RhoBox{{1.0}, {1.0}});
  CHECK_FALSE(tb.contractive);
  CHECK(tb.theta_bar == 0);
  CHECK(scaled_lognorm({a}, p, oracle::q(1, 100), {1}) > 0);
}

TEST_CASE("theta bar over a box") {
  const CorpusEntry* e = find_corpus("proofreading_n2");
  ReactionNetwork net = corpus_network(*e);
  auto lambdas = corpus_lambdas(*e, net);
  ContractorMatrix p = contractor(classify(lambda_bar(lambdas, RationalVector(lambdas.size(), 1))));
  RhoBox box{std::vector<double>(net.s(), 1.0), std::vector<double>(net.s(), 2.0)};
  ThetaBarResult tb = theta_bar_and_rate(lambdas, p, box);
  CHECK(tb.theta_bar.get_d() == doctest::Approx(1.0 / 3).epsilon(1e-5));
  CHECK(tb.theta_bar.get_d() <= 1.0 / 3);
  CHECK(tb.rate_c < 0);

  // identity contractor: unbounded flag and c is the worst vertex mu
  const CorpusEntry* tbody = find_corpus("three_body");
  ReactionNetwork tn = corpus_network(*tbody);
  auto tl = corpus_lambdas(*tbody, tn);
  ContractorMatrix tp = contractor(classify(lambda_bar(tl, RationalVector(tl.size(), 1))));
  RhoBox tbox{std::vector<double>(tn.s(), 0.5), std::vector<double>(tn.s(), 1.5)};
  ThetaBarResult tr = theta_bar_and_rate(tl, tp, tbox);
  CHECK(tr.unbounded);
  double worst = -INFINITY;
  for (std::size_t v = 0; v < (1u << tn.s()); ++v) {
    RationalVector rho(tn.s());
    for (std::size_t k = 0; k < tn.s(); ++k) rho[k] = (v >> k & 1u) ? Rational(3, 2) : Rational(1, 2);
    worst = std::max(worst, mu_inf(lambda_bar(tl, rho)).get_d());
  }
  CHECK(tr.rate_c == doctest::Approx(worst));
  CHECK(tr.rate_c < 0);
}

TEST_CASE("classification does not depend on rho") {
  for (const char* name : {"ptm_simplified", "ptm_full", "proofreading_n2", "phosphorelay_n2"}) {
    const CorpusEntry* e = find_corpus(name);
    ReactionNetwork net = corpus_network(*e);
    CrossCheckResult c = random_rho_crosscheck(corpus_lambdas(*e, net), 200, 4);
    CHECK_MESSAGE(c.discrepancies == 0, name);
  }
}

TEST_CASE("diagonal strict check") {
  const CorpusEntry* e = find_corpus("three_body");
  ReactionNetwork net = corpus_network(*e);
  GlfVerification v = verify_glf(net, corpus_candidate(*e, net));
  REQUIRE(v.certificate);
  CHECK(diagonal_factor(net, v.certificate->C).has_value());
  CHECK(diagonal_strict_check(net, *v.certificate) == StrictCheck::Holds);

  const CorpusEntry* ptm = find_corpus("ptm_full");
  ReactionNetwork pn = corpus_network(*ptm);
  GlfVerification pv = verify_glf(pn, corpus_candidate(*ptm, pn));
  REQUIRE(pv.certificate);
  CHECK(diagonal_strict_check(pn, *pv.certificate) == StrictCheck::NotApplicable);
}
