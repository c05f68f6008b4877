#pragma once

#include <json.hpp>
#include <string>

#include "crnc/certificates.hpp"
#include "crnc/contraction.hpp"
#include "crnc/dynamics.hpp"
#include "crnc/model.hpp"
#include "crnc/siphons.hpp"

namespace crnc {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);  // "p/q"
Json to_json(const RationalVector& v);
Json to_json(const RationalMatrix& m);
Json to_json(const Eigen::VectorXd& v);
Json index_set(const std::vector<std::size_t>& v);  // 1-based

Json network_json(const ReactionNetwork& net);
Json conservation_json(const ConservationAnalysis& ca);
Json siphon_json(const ReactionNetwork& net, const SiphonReport& rep);
Json certificate_json(const ReactionNetwork& net, const GlfCertificate& cert);
Json verification_failure_json(const GlfVerification& v);
Json contraction_json(const WeakContractivityReport& rep, const ContractorMatrix* p, const ThetaBarResult* tb);
Json experiment_json(const ExperimentResult& res, bool series);

// pretty JSON with a trailing newline
std::string dump(const Json& j);

}  // namespace crnc
