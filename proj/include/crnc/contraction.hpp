#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crnc/certificates.hpp"

namespace crnc {

struct WeakContractivityReport {
  RationalVector sigma;                            // sigma_i of the classified matrix
  std::vector<std::size_t> S_minus, S_zero;        // 0-based
  std::vector<std::vector<std::size_t>> depth_classes;  // S_01, S_02, ...
  std::vector<long> depth;                         // 0 on S_minus, -1 when unreachable
  std::size_t max_depth = 0;
  bool weakly_contractive = false;
};

// edges i -> i0 for nonzero off-diagonal entries, BFS from S_minus through S_zero
WeakContractivityReport classify(const RationalMatrix& lambda_bar);
WeakContractivityReport classify_at_one(const GlfCertificate& cert);

struct ContractorMatrix {
  std::vector<unsigned> exponents;  // p_ii = (1 + theta)^e_i
  RationalMatrix at(const Rational& theta) const;
  Eigen::VectorXd diagonal(double theta) const;
  bool trivial() const;
};

ContractorMatrix contractor(const WeakContractivityReport& report);

// P A P^-1 with P = diag((1+theta)^e)
RationalMatrix scale(const RationalMatrix& a, const ContractorMatrix& p, const Rational& theta);
Eigen::MatrixXd scale(const Eigen::MatrixXd& a, const ContractorMatrix& p, double theta);

Rational scaled_lognorm(const std::vector<RationalMatrix>& lambdas, const ContractorMatrix& p, const Rational& theta,
                        const RationalVector& rho);

struct RhoBox {
  std::vector<double> lo, hi;
};

struct ThetaBarOptions {
  std::size_t max_grid = 1 << 14;  // 3-level grid when it fits, else vertices
  std::size_t random_samples = 256;
  std::uint64_t seed = 1;
  unsigned resolution_bits = 20;  // dyadic step 2^-bits
  double theta_max = 1024;
  std::optional<double> theta_eval;  // default theta_bar / 2
  unsigned jobs = 1;
};

struct ThetaBarResult {
  bool unbounded = false;
  bool contractive = false;  // some theta on the grid worked
  Rational theta_bar;        // dyadic
  double theta_used = 0;
  double rate_c = 0;         // max sampled mu at theta_used
  std::size_t samples = 0;
  bool sampled = true;
};

ThetaBarResult theta_bar_and_rate(const std::vector<RationalMatrix>& lambdas, const ContractorMatrix& p,
                                  const RhoBox& box, const ThetaBarOptions& opt = {});

struct CrossCheckResult {
  std::size_t trials = 0;
  std::size_t discrepancies = 0;
  std::vector<std::string> examples;  // first few
};

// classification at random positive rational rho against rho = 1
CrossCheckResult random_rho_crosscheck(const std::vector<RationalMatrix>& lambdas, std::size_t trials,
                                       std::uint64_t seed);

enum class StrictCheck { Holds, Fails, NotApplicable };
const char* to_string(StrictCheck s);

// C = Theta Gamma with Theta >= 0 diagonal; theta empty when C has another shape
std::optional<RationalVector> diagonal_factor(const ReactionNetwork& net, const RationalMatrix& C);
StrictCheck diagonal_strict_check(const ReactionNetwork& net, const GlfCertificate& cert);

}  // namespace crnc
