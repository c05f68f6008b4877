#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crnc/linalg.hpp"
#include "crnc/model.hpp"

namespace crnc {

struct RankOneFamily {
  std::vector<RationalMatrix> Q;  // nu x nu, Q_l = e_j gamma_i^T
  std::vector<RationalMatrix> J;  // n x n, J_l = Gamma_j e_i^T
};

RankOneFamily rank_one_factors(const ReactionNetwork& net);

enum class CandidateKind { MaxMin, Identity, User };
const char* to_string(CandidateKind k);
std::optional<CandidateKind> parse_candidate_kind(const std::string& s);

struct GlfCandidate {
  CandidateKind kind = CandidateKind::MaxMin;
  RationalMatrix C;
};

// maxmin works on net rates: a reaction and its exact reverse share one coordinate r_j - r_j'
GlfCandidate candidate_C(const ReactionNetwork& net, CandidateKind kind, const RationalMatrix* user = nullptr);

struct SolverStats {
  std::size_t lps = 0;
  std::size_t pivots = 0;
  std::size_t trivial_rows = 0;
};

struct GlfCertificate {
  CandidateKind kind = CandidateKind::MaxMin;
  RationalMatrix C;
  RationalMatrix B;
  std::vector<RationalMatrix> lambdas;
  SolverStats stats;
};

struct GlfOptions {
  bool minimize_sigma = true;  // most negative row measure first
  bool sparsify = true;        // then smallest off-diagonal mass
  unsigned jobs = 1;
};

struct GlfVerification {
  std::optional<GlfCertificate> certificate;
  std::string failure;
  std::optional<std::size_t> failed_pair;
  std::optional<std::size_t> failed_row;
  SolverStats stats;
};

GlfVerification verify_glf(const ReactionNetwork& net, const GlfCandidate& cand, const GlfOptions& opt = {});

// exact re-check of every certificate condition; empty when valid
std::vector<std::string> check_certificate(const ReactionNetwork& net, const GlfCertificate& cert);

// appendix construction; lambda must have mu_inf <= 0
RationalMatrix to_metzler(const RationalMatrix& lambda);
// requires Metzler, zero row sums and [[A, B], [B, A]] blocks
RationalMatrix from_metzler(const RationalMatrix& lambda_tilde);
RationalMatrix metzler_C(const RationalMatrix& c);  // [C; -C]
bool is_metzler(const RationalMatrix& a);

Rational glf_value(const GlfCertificate& cert, const RationalVector& r);
double glf_value(const GlfCertificate& cert, const Eigen::VectorXd& r);
Rational dual_value(const GlfCertificate& cert, const RationalVector& z);
double dual_value(const GlfCertificate& cert, const Eigen::VectorXd& z);

// Y_l with B J_l - Lambda_l B = Y_l D, D a left-kernel basis of Gamma
std::optional<std::vector<RationalMatrix>> residual_factors(const ReactionNetwork& net, const GlfCertificate& cert,
                                                            const RationalMatrix& D);

// sum_l rho_l Lambda_l
RationalMatrix lambda_bar(const std::vector<RationalMatrix>& lambdas, const RationalVector& rho);
Eigen::MatrixXd lambda_bar(const std::vector<Eigen::MatrixXd>& lambdas, const Eigen::VectorXd& rho);

}  // namespace crnc
