#include "crnc/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crnc/corpus.hpp"
#include "crnc/parallel.hpp"
#include "crnc/report.hpp"
#include "crnc/svg.hpp"

namespace crnc {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  ReactionNetwork net;
  const CorpusEntry* entry;
  std::string source;
};

// a readable file wins; otherwise the stem may name a bundled network
Loaded load(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) {
    ReactionNetwork net = load_network(arg);
    return {net, match_corpus(net), arg};
  }
  std::string stem = std::filesystem::path(arg).stem().string();
  if (const CorpusEntry* e = find_corpus(stem)) return {corpus_network(*e), e, "corpus:" + e->name};
  throw UsageError("no such file or bundled network: " + arg);
}

GlfCandidate make_candidate(const Loaded& in, const std::string& spec) {
  if (spec.empty()) {
    if (in.entry) return corpus_candidate(*in.entry, in.net);
    return candidate_C(in.net, CandidateKind::MaxMin);
  }
  if (spec.rfind("user:", 0) == 0) {
    RationalMatrix c = load_matrix_file(spec.substr(5));
    if (c.cols() != in.net.nu())
      throw UsageError("user C has " + std::to_string(c.cols()) + " columns, network has " +
                       std::to_string(in.net.nu()) + " reactions");
    return candidate_C(in.net, CandidateKind::User, &c);
  }
  auto k = parse_candidate_kind(spec);
  if (!k || *k == CandidateKind::User) throw UsageError("--candidate must be maxmin, identity or user:<file>");
  if (in.entry) return align_to_printed(*in.entry, candidate_C(in.net, *k));
  return candidate_C(in.net, *k);
}

std::vector<double> number_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ',');) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw UsageError("not a number list: " + s);
    }
  }
  return v;
}

struct KineticsFlags {
  std::string rates;
  double amplitude = 0;
  double period = 5;
  double phase = 0;
  std::size_t modulate = 1;
};

Kinetics make_kinetics(const ReactionNetwork& net, const KineticsFlags& f) {
  Kinetics kin = Kinetics::uniform(net, 1.0);
  if (!f.rates.empty()) {
    auto v = number_list(f.rates);
    if (v.size() == 1) v.assign(net.nu(), v[0]);
    if (v.size() != net.nu()) throw UsageError("--rates needs 1 or " + std::to_string(net.nu()) + " values");
    kin.k = v;
  }
  if (f.amplitude != 0) {
    if (f.modulate < 1 || f.modulate > net.nu()) throw UsageError("--modulate out of range");
    kin.modulation[f.modulate - 1] = Modulation{f.amplitude, f.period, f.phase};
  }
  try {
    kin.validate(net);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return kin;
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << dump(j);
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << dump(j);
}

struct Box {
  double lo, hi;
};

Box state_box(const Loaded& in, const std::string& flag) {
  Box b{0.1, 2.0};
  if (in.entry) b = {in.entry->defaults.box_lo, in.entry->defaults.box_hi};
  if (!flag.empty()) {
    auto v = number_list(flag);
    if (v.size() != 2 || !(v[0] > 0) || !(v[1] >= v[0])) throw UsageError("--box needs lo,hi with 0 < lo <= hi");
    b = {v[0], v[1]};
  }
  return b;
}

Eigen::VectorXd anchor_for(const Loaded& in, const Box& b, const std::string& flag) {
  if (!flag.empty()) {
    auto v = number_list(flag);
    if (v.size() != in.net.n()) throw UsageError("--anchor needs " + std::to_string(in.net.n()) + " values");
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  if (in.entry && !in.entry->defaults.anchor.empty()) {
    const auto& a = in.entry->defaults.anchor;
    return Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
  }
  return Eigen::VectorXd::Constant(in.net.n(), (b.lo + b.hi) / 2);
}

Json source_json(const Loaded& in) {
  return {{"source", in.source}, {"bundled", in.entry ? Json(in.entry->name) : Json(nullptr)}};
}

struct CertOutcome {
  GlfVerification v;
  Json json;
};

CertOutcome certify(const Loaded& in, const GlfCandidate& cand, unsigned jobs) {
  GlfOptions go;
  go.jobs = jobs;
  CertOutcome o{verify_glf(in.net, cand, go), {}};
  if (o.v.certificate) {
    o.json = certificate_json(in.net, *o.v.certificate);
  } else {
    o.json = verification_failure_json(o.v);
    o.json["kind"] = to_string(cand.kind);
    o.json["C"] = to_json(cand.C);
  }
  return o;
}

// classification section; also returns the contractor when weakly contractive
Json contraction_section(const Loaded& in, const GlfCertificate& cert, const Kinetics& kin, const Box& box,
                         unsigned jobs, std::optional<ContractorMatrix>& p_out, bool& weak) {
  WeakContractivityReport rep;
  try {
    rep = classify_at_one(cert);
  } catch (const std::invalid_argument& e) {
    weak = false;
    return {{"skipped", std::string("classification needs all sigma <= 0: ") + e.what()}};
  }
  weak = rep.weakly_contractive;
  if (!rep.weakly_contractive) return contraction_json(rep, nullptr, nullptr);
  ContractorMatrix p = contractor(rep);
  ThetaBarOptions to;
  to.jobs = jobs;
  RhoBox rb = rho_box_for_states(in.net, kin, box.lo, box.hi);
  ThetaBarResult tb = theta_bar_and_rate(cert.lambdas, p, rb, to);
  Json j = contraction_json(rep, &p, &tb);
  j["rho_box_from_states"] = {box.lo, box.hi};
  auto cc = random_rho_crosscheck(cert.lambdas, 1000, 1);
  j["rho_crosscheck"] = {{"trials", cc.trials}, {"discrepancies", cc.discrepancies}, {"examples", cc.examples}};
  if (!tb.contractive)
    j["note"] = "weakly contractive, but no dyadic theta makes the scaled log-norm negative at every rho sample";
  p_out = p;
  return j;
}

Json strict_section(const ReactionNetwork& net, const GlfCertificate& cert) {
  StrictCheck sc = diagonal_strict_check(net, cert);
  bool identity = cert.B == RationalMatrix::identity(net.n());
  return {{"diagonal_check", to_string(sc)},
          {"identity_norm", sc == StrictCheck::Holds && identity},
          {"note", identity ? "B = I: the norm is the plain max norm" : "B differs from I"}};
}

void plot(const ExperimentResult& res, const std::string& path, const std::string& ylabel) {
  std::vector<std::vector<double>> ys;
  for (const auto& s : res.series) ys.push_back(s.values);
  PlotSpec spec;
  spec.title = res.kind + " experiment";
  spec.ylabel = ylabel;
  spec.log_y = res.kind == "rate" || res.kind == "entrainment";
  std::vector<double> x = res.times;
  if (res.kind == "entrainment") {
    spec.xlabel = "period";
    x.clear();
    for (std::size_t m = 0; m + 1 < res.times.size(); ++m) x.push_back(static_cast<double>(m));
  }
  write_svg(path, svg_lines(x, ys, spec));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"crnc: contraction certificates and simulation for reaction networks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<unsigned> jobs_flag;
  app.add_option("--jobs,-j", jobs_flag, "worker threads (default CRNC_JOBS, else all cores)")->check(CLI::PositiveNumber);

  std::string file, candidate, output, box_flag, anchor_flag, plot_path, csv_path, x0_flag;
  KineticsFlags kf;
  bool series = false;

  auto* parse_cmd = app.add_subcommand("parse", "parse a network and report its structure");
  parse_cmd->add_option("file", file, "network file or bundled name")->required();
  parse_cmd->add_option("-o,--output", output, "JSON output path");

  auto add_candidate = [&](CLI::App* c) {
    c->add_option("--candidate", candidate, "maxmin | identity | user:<file>");
  };
  auto add_kinetics = [&](CLI::App* c) {
    c->add_option("--rates", kf.rates, "rate constants, one value or one per reaction");
    c->add_option("--amplitude", kf.amplitude, "sinusoidal modulation amplitude in [0,1)");
    c->add_option("--period", kf.period, "modulation period");
    c->add_option("--phase", kf.phase, "modulation phase");
    c->add_option("--modulate", kf.modulate, "1-based reaction carrying the modulation");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "full structural analysis");
  analyze_cmd->add_option("file", file)->required();
  add_candidate(analyze_cmd);
  analyze_cmd->add_option("--box", box_flag, "state box lo,hi for the rho box");
  add_kinetics(analyze_cmd);
  analyze_cmd->add_option("-o,--output", output);

  auto* certify_cmd = app.add_subcommand("certify", "synthesize and verify a GLF certificate");
  certify_cmd->add_option("file", file)->required();
  add_candidate(certify_cmd);
  certify_cmd->add_option("--box", box_flag);
  add_kinetics(certify_cmd);
  certify_cmd->add_option("-o,--output", output);

  ExperimentOptions eo;
  std::string experiment;
  auto* sim_cmd = app.add_subcommand("simulate", "numerical experiments");
  sim_cmd->add_option("file", file)->required();
  sim_cmd->add_option("--experiment", experiment)
      ->required()
      ->check(CLI::IsMember({"nonexpansivity", "extent", "rate", "entrainment"}));
  sim_cmd->add_option("--pairs", eo.n, "pairs or initial conditions")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", eo.seed);
  sim_cmd->add_option("--tspan", eo.t1, "final time")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--dt", eo.dt, "sample spacing")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--tol", eo.tol, "integrator tolerance");
  sim_cmd->add_option("--theta", eo.theta, "contractor parameter")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--periods", eo.periods, "periods for entrainment")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--eta", eo.eta_scale, "scale of same-class perturbations")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--box", box_flag, "sampling box lo,hi");
  sim_cmd->add_option("--anchor", anchor_flag, "class anchor state");
  add_candidate(sim_cmd);
  add_kinetics(sim_cmd);
  sim_cmd->add_flag("--series", series, "include full distance series in the report");
  sim_cmd->add_option("--plot", plot_path, "SVG plot of the distance series");
  sim_cmd->add_option("-o,--output", output);

  double tspan = 20, dt = 0.05, tol = 1e-9;
  auto* int_cmd = app.add_subcommand("integrate", "integrate one trajectory and write CSV");
  int_cmd->add_option("file", file)->required();
  int_cmd->add_option("--x0", x0_flag, "initial state")->required();
  int_cmd->add_option("--tspan", tspan)->check(CLI::PositiveNumber);
  int_cmd->add_option("--dt", dt)->check(CLI::PositiveNumber);
  int_cmd->add_option("--tol", tol);
  add_kinetics(int_cmd);
  int_cmd->add_option("--csv", csv_path, "CSV output path")->required();

  auto* fx_cmd = app.add_subcommand("fixtures", "bundled fixture checks");
  auto* fx_verify = fx_cmd->add_subcommand("verify", "check every bundled printed matrix");
  fx_cmd->require_subcommand(1);

  std::string export_dir;
  auto* corpus_cmd = app.add_subcommand("corpus", "list or export the bundled networks");
  corpus_cmd->add_option("--export", export_dir, "write .crn and .C.txt files into this directory");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kOk;
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kUsage;
  }

  try {
    const unsigned jobs = resolve_jobs(jobs_flag);

    if (parse_cmd->parsed()) {
      Loaded in = load(file);
      Json j = source_json(in);
      j["network"] = network_json(in.net);
      j["conservation"] = conservation_json(conservation_analysis(in.net));
      j["dsl"] = to_dsl(in.net);
      emit(j, output, out);
      return kOk;
    }

    if (analyze_cmd->parsed() || certify_cmd->parsed()) {
      const bool full = analyze_cmd->parsed();
      Loaded in = load(file);
      GlfCandidate cand = make_candidate(in, candidate);
      Kinetics kin = make_kinetics(in.net, kf);
      Box box = state_box(in, box_flag);
      Json j = source_json(in);
      if (full) {
        j["network"] = network_json(in.net);
        j["conservation"] = conservation_json(conservation_analysis(in.net));
        j["siphons"] = siphon_json(in.net, siphon_report(in.net, jobs));
      }
      CertOutcome co = certify(in, cand, jobs);
      j["certificate"] = co.json;
      bool ok = co.v.certificate.has_value();
      if (ok) {
        std::optional<ContractorMatrix> p;
        bool weak = false;
        j["weak_contractivity"] = contraction_section(in, *co.v.certificate, kin, box, jobs, p, weak);
        j["strict_contraction"] = strict_section(in.net, *co.v.certificate);
        if (full) {
          auto Y = residual_factors(in.net, *co.v.certificate, left_kernel(in.net.gamma()));
          j["residual_factors_solved"] = Y.has_value();
          ok = ok && Y.has_value();
        }
      } else {
        j["weak_contractivity"] = {{"skipped", "no verified certificate"}};
        j["strict_contraction"] = {{"skipped", "no verified certificate"}};
      }
      j["ok"] = ok;
      emit(j, output, out);
      if (!co.v.certificate) err << "certificate not verified: " << co.v.failure << "\n";
      return ok ? kOk : kCheckFailed;
    }

    if (sim_cmd->parsed()) {
      Loaded in = load(file);
      Kinetics kin = make_kinetics(in.net, kf);
      Box box = state_box(in, box_flag);
      eo.box_lo = box.lo;
      eo.box_hi = box.hi;
      eo.jobs = jobs;
      if (!(eo.tol >= 1e-12 && eo.tol <= 1e-3)) throw UsageError("--tol must lie in [1e-12, 1e-3]");
      if (experiment == "entrainment" && kin.time_invariant())
        throw UsageError("entrainment needs --amplitude > 0");
      if (experiment == "extent" && !kin.time_invariant()) throw UsageError("extent needs time-invariant kinetics");
      Eigen::VectorXd anchor = anchor_for(in, box, anchor_flag);
      eo.anchor = anchor;

      Json j = source_json(in);
      j["network_hash"] = network_hash(in.net);
      GlfCandidate cand = make_candidate(in, candidate);
      CertOutcome co = certify(in, cand, jobs);
      if (!co.v.certificate) {
        j["certificate"] = co.json;
        j["ok"] = false;
        emit(j, output, out);
        err << "certificate not verified: " << co.v.failure << "\n";
        return kCheckFailed;
      }
      const GlfCertificate& cert = *co.v.certificate;
      j["certificate_kind"] = to_string(cert.kind);
      j["settings"] = {{"pairs", eo.n},         {"seed", eo.seed},   {"t0", eo.t0},         {"t1", eo.t1},
                       {"dt", eo.dt},           {"tol", eo.tol},     {"box", {eo.box_lo, eo.box_hi}},
                       {"eta_scale", eo.eta_scale}, {"rates", kin.k}};
      ExperimentResult res;
      std::string ylabel = "|x1 - x2|_B";
      if (experiment == "nonexpansivity") {
        res = nonexpansivity_experiment(in.net, cert, kin, eo);
      } else if (experiment == "extent") {
        auto xbar = find_steady_state(in.net, kin, anchor);
        if (!xbar) {
          j["ok"] = false;
          j["steady_state"] = nullptr;
          emit(j, output, out);
          err << "no steady state found in the class of the anchor\n";
          return kCheckFailed;
        }
        j["steady_state"] = to_json(*xbar);
        j["steady_state_residual"] = steady_state_residual(in.net, kin, *xbar);
        res = extent_experiment(in.net, cert, kin, *xbar, eo);
        ylabel = "|xi1 - xi2|_C";
      } else if (experiment == "rate") {
        std::optional<ContractorMatrix> p;
        bool weak = false;
        Json cj = contraction_section(in, cert, kin, box, jobs, p, weak);
        if (!p) {
          j["weak_contractivity"] = cj;
          j["ok"] = false;
          emit(j, output, out);
          err << "rate experiment needs a weakly contractive certificate\n";
          return kCheckFailed;
        }
        j["settings"]["theta"] = eo.theta;
        j["contractor_exponents"] = p->exponents;
        res = contraction_rate_experiment(in.net, cert, *p, kin, eo);
        ylabel = "|x1 - x2|_PB";
      } else {
        j["settings"]["periods"] = eo.periods;
        j["settings"]["anchor"] = to_json(anchor);
        res = entrainment_experiment(in.net, cert, kin, eo);
        ylabel = "Poincare gap";
      }
      j["result"] = experiment_json(res, series);
      j["ok"] = res.ok;
      emit(j, output, out);
      if (!plot_path.empty()) plot(res, plot_path, ylabel);
      for (const auto& w : res.warnings) err << "warning: " << w << "\n";
      return res.ok ? kOk : kCheckFailed;
    }

    if (int_cmd->parsed()) {
      Loaded in = load(file);
      Kinetics kin = make_kinetics(in.net, kf);
      auto v = number_list(x0_flag);
      if (v.size() != in.net.n()) throw UsageError("--x0 needs " + std::to_string(in.net.n()) + " values");
      Eigen::VectorXd x0 = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
      if (x0.minCoeff() < 0) throw UsageError("--x0 must be nonnegative");
      if (!(tol >= 1e-12 && tol <= 1e-3)) throw UsageError("--tol must lie in [1e-12, 1e-3]");
      Trajectory tr = integrate(in.net, kin, x0, sample_grid(0, tspan, dt), tol);
      write_csv(in.net, tr, csv_path);
      return kOk;
    }

    if (fx_verify->parsed()) {
      auto checks = verify_fixtures(jobs);
      std::size_t failed = 0;
      for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.network << ": " << c.name;
        if (!c.detail.empty()) out << " (" << c.detail << ")";
        out << "\n";
        failed += !c.passed;
      }
      out << checks.size() - failed << "/" << checks.size() << " fixture checks passed\n";
      return failed ? kCheckFailed : kOk;
    }

    if (corpus_cmd->parsed()) {
      if (!export_dir.empty()) export_corpus(export_dir);
      for (const auto& e : corpus()) out << e.name << "\t" << e.title << "\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace crnc
