#include "ewit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>

#include <CLI11.hpp>

#include "ewit/fixtures.hpp"
#include "ewit/gme.hpp"
#include "ewit/improve.hpp"
#include "ewit/io.hpp"
#include "ewit/lvnm.hpp"
#include "ewit/rng.hpp"

namespace ewit::cli {

using nlohmann::json;
namespace fx = fixtures;

namespace {

/// Collects pass/fail lines for a report.
class Checks {
 public:
  void near(const std::string& name, double value, fx::Reference ref, bool hard = true) {
    add(name, value, ref.value, ref.tol, std::abs(value - ref.value) <= ref.tol, hard);
  }
  void within(const std::string& name, double value, double lo, double hi, bool hard) {
    json e{{"name", name}, {"value", value}, {"range", {lo, hi}}, {"hard", hard}};
    push(std::move(e), value >= lo && value <= hi, hard);
  }
  void at_most(const std::string& name, double value, double limit, bool hard = true) {
    json e{{"name", name}, {"value", value}, {"limit", limit}, {"hard", hard}};
    push(std::move(e), value <= limit, hard);
  }
  void truth(const std::string& name, bool value, bool hard = true) {
    json e{{"name", name}, {"value", value}, {"hard", hard}};
    push(std::move(e), value, hard);
  }
  void equal(const std::string& name, const json& value, const json& expected, bool hard = true) {
    json e{{"name", name}, {"value", value}, {"expected", expected}, {"hard", hard}};
    push(std::move(e), value == expected, hard);
  }

  bool hard_ok() const { return hard_ok_; }
  const json& list() const { return list_; }

 private:
  void add(const std::string& name, double value, double expected, double tol, bool pass, bool hard) {
    push(json{{"name", name}, {"value", value}, {"expected", expected}, {"tol", tol}, {"hard", hard}}, pass,
         hard);
  }
  void push(json e, bool pass, bool hard) {
    e["pass"] = pass;
    if (hard && !pass) hard_ok_ = false;
    list_.push_back(std::move(e));
  }

  json list_ = json::array();
  bool hard_ok_ = true;
};

json base_report(const std::string& command, json inputs, const Options& opts) {
  return json{{"command", command}, {"inputs", std::move(inputs)}, {"seed", opts.seed}, {"version", kVersion}};
}

json finish(json report, const Checks& c) {
  report["checks"] = c.list();
  report["pass"] = c.hard_ok();
  return report;
}

FloorOptions floor_options(const Options& opts) {
  return FloorOptions{opts.floor_restarts, opts.seed, opts.workers};
}

json bools(const std::vector<bool>& v) {
  json a = json::array();
  for (bool b : v) a.push_back(b);
  return a;
}

json validity_json(const ValidityReport& r) {
  return json{{"minuend_positive", bools(r.minuend_positive)},
              {"subtrahend_positive", bools(r.subtrahend_positive)},
              {"order_paper", bools(r.order_paper)},
              {"order_norm", bools(r.order_norm)},
              {"order_exact", bools(r.order_exact)},
              {"local_gap", r.local_gap},
              {"globally_psd", r.globally_psd},
              {"detection_impossible", r.detection_impossible()},
              {"min_eigenvalue", r.min_eigenvalue},
              {"product_floor", r.product_floor},
              {"verdict", to_string(r.verdict)}};
}

json cover_json(const SettingCover& c) {
  json s = json::array();
  for (const auto& st : c.settings) s.push_back(st.label());
  return json{{"size", c.settings.size()}, {"settings", s}, {"optimal", c.optimal}};
}

json terms_json(const std::vector<PauliTerm>& terms) {
  json a = json::array();
  for (const auto& t : terms) a.push_back(json{{"op", t.label()}, {"coeff", t.coeff}});
  return a;
}

MSWitness load(const std::filesystem::path& p, const Options& opts) {
  MSWitness w = load_witness_file(p).to_witness();
  return opts.norm_mode ? w.with_norm_mode(*opts.norm_mode) : w;
}

std::string pair_label(const SitePair& p) {
  return std::to_string(p.first + 1) + "," + std::to_string(p.second + 1);
}

/// Arbitrary qutrit minuend-subtrahend pair used to exercise the d = 3 paths.
MSWitness qutrit_probe_witness() {
  std::vector<BlochForm> m, s;
  for (int site = 0; site < 2; ++site) {
    BlochForm a = BlochForm::scaled_identity(3, 1.3 + 0.1 * site);
    BlochForm b = BlochForm::scaled_identity(3, 1.0);
    for (std::size_t k = 0; k < a.nu.size(); ++k) {
      a.nu[k] = 0.05 * static_cast<double>((k * 3 + site) % 5) - 0.1;
      b.nu[k] = 0.04 * static_cast<double>((k * 2 + 1 + site) % 4) - 0.06;
    }
    m.push_back(a);
    s.push_back(b);
  }
  return MSWitness::from_bloch(m, s);
}

Matrix random_matrix(std::size_t d, CounterRng& rng) {
  Matrix a(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = {rng.normal(), rng.normal()};
  return a;
}

/// Finer pair used by the improvement and Bell-diagonal cases: refinement in
/// trace_diff mode, evaluated with raw (unnormalized) operators.
struct FinerPair {
  MSWitness coarse;
  FinerResult result;
  MSWitness fine_raw;
};

FinerPair phi_plus_finer() {
  const MSWitness w = fx::phi_plus_witness().to_witness();
  FinerResult r = finer(w.with_norm_mode(NormMode::TraceDiff), {fx::kZeta, fx::kXi}, OrderingPredicate::Paper);
  MSWitness fine_raw = r.finer.with_norm_mode(NormMode::Raw);
  return FinerPair{w, std::move(r), std::move(fine_raw)};
}

// ------------------------------------------------------------ reproduce cases

json case_bell_phi_plus(const Options& opts, Checks& c) {
  const MSWitness w = fx::phi_plus_witness().to_witness();
  const auto phi = bell(BellState::PhiPlus);
  const auto psi = bell(BellState::PsiMinus);
  const double on_phi = expectation(w, phi);
  const double on_psi = expectation(w, psi);
  c.near("expectation_phi_plus", on_phi, fx::kPhiPlusOnPhiPlus);
  c.near("expectation_psi_minus", on_psi, fx::kPhiPlusOnPsiMinus);

  const auto nt = noise_tolerance(w, phi);
  c.truth("detects_phi_plus", nt.has_value());
  json out{{"expectation_phi_plus", on_phi}, {"expectation_psi_minus", on_psi}};
  if (nt) {
    const double fid = fidelity_at_tolerance(nt->epsilon, phi.dim());
    c.near("epsilon_star", nt->epsilon, fx::kEpsPhiPlus);
    c.at_most("epsilon_closed_vs_bisection", std::abs(nt->epsilon - nt->epsilon_bisection),
              fx::kClosedVsBisection);
    c.near("fidelity_threshold", fid, fx::kFidelityPhiPlus);
    out["epsilon_star"] = nt->epsilon;
    out["epsilon_bisection"] = nt->epsilon_bisection;
    out["fidelity_threshold"] = fid;
  }

  const ValidityReport a = audit(w, floor_options(opts));
  out["audit"] = validity_json(a);
  c.truth("order_paper_all_sites", std::all_of(a.order_paper.begin(), a.order_paper.end(), [](bool b) { return b; }));
  c.truth("order_exact_fails_all_sites",
          std::none_of(a.order_exact.begin(), a.order_exact.end(), [](bool b) { return b; }));
  c.near("local_gap_min_eigenvalue", a.local_gap.front(), fx::kLocalGapPhiPlus);
  c.near("product_state_floor", a.product_floor, fx::kFloorPhiPlus);
  c.equal("verdict", to_string(a.verdict), "paper_valid_only");

  const auto cover = min_cover(factor_terms(w));
  out["lvnm_cover"] = cover_json(cover);
  c.equal("lvnm_cover_size", cover.settings.size(), fx::kCoverPhiPlus);

  const HermitianMatrix proj = 0.5 * HermitianMatrix::identity(4) - phi.density();
  const auto pcover = min_cover(pauli_terms(proj, 2));
  out["projector_lvnm_cover"] = cover_json(pcover);
  c.equal("projector_lvnm_cover_size", pcover.settings.size(), fx::kCoverProjector);
  const auto pnt = noise_tolerance(proj, phi);
  c.truth("projector_detects_phi_plus", pnt.has_value());
  if (pnt) {
    c.near("projector_epsilon_star", pnt->epsilon, fx::kEpsProjectorPhiPlus);
    out["projector_epsilon_star"] = pnt->epsilon;
  }
  return out;
}

json case_bell_psi_minus(const Options& opts, Checks& c) {
  const MSWitness w = fx::psi_minus_witness().to_witness();
  const auto psi = bell(BellState::PsiMinus);
  const double on_psi = expectation(w, psi);
  const double on_phi = expectation(w, bell(BellState::PhiPlus));
  c.near("expectation_psi_minus", on_psi, fx::kPsiMinusOnPsiMinus);
  c.near("expectation_phi_plus", on_phi, fx::kPsiMinusOnPhiPlus);
  json out{{"expectation_psi_minus", on_psi}, {"expectation_phi_plus", on_phi}};

  const auto nt = noise_tolerance(w, psi);
  c.truth("detects_psi_minus", nt.has_value());
  if (nt) {
    c.near("epsilon_star", nt->epsilon, fx::kEpsPsiMinus);
    c.at_most("epsilon_closed_vs_bisection", std::abs(nt->epsilon - nt->epsilon_bisection),
              fx::kClosedVsBisection);
    out["epsilon_star"] = nt->epsilon;
    out["epsilon_bisection"] = nt->epsilon_bisection;
    out["fidelity_threshold"] = fidelity_at_tolerance(nt->epsilon, psi.dim());
  }
  const ValidityReport a = audit(w, floor_options(opts));
  out["audit"] = validity_json(a);
  c.equal("verdict", to_string(a.verdict), "paper_valid_only");
  out["lvnm_cover"] = cover_json(min_cover(factor_terms(w)));
  return out;
}

json case_w3(const Options& opts, Checks& c) {
  const MSWitness base = fx::w3_pair_witness().to_witness();
  const std::vector<std::size_t> dims{2, 2, 2};
  const auto pairs = same_witness_for_all_pairs(base, 3);
  const auto w3 = w_state(3);

  const GmeReport clean = pairwise_scan(pairs, w3.density(), dims);
  json values = json::object();
  for (const auto& [p, v] : clean.pair_values) {
    values[pair_label(p)] = v;
    c.near("pair_value_" + pair_label(p), v, fx::kW3PairValue);
  }
  json out{{"pair_values", values}, {"gme_verdict", to_string(clean.verdict)}};
  c.equal("gme_verdict_clean", to_string(clean.verdict), "genuine");

  const HermitianMatrix op01 = embed_pair(base, 0, 1, dims);
  const auto nt = noise_tolerance(op01, w3);
  c.truth("detects_w3", nt.has_value());
  if (nt) {
    c.near("epsilon_star", nt->epsilon, fx::kEpsW3);
    c.at_most("epsilon_closed_vs_bisection", std::abs(nt->epsilon - nt->epsilon_bisection),
              fx::kClosedVsBisection);
    out["epsilon_star"] = nt->epsilon;
    out["fidelity_threshold"] = fidelity_at_tolerance(nt->epsilon, w3.dim());
  }

  const GmeReport noisy = pairwise_scan(pairs, white_noise(w3, fx::kW3NoisyEps), dims);
  out["gme_verdict_noisy"] = to_string(noisy.verdict);
  out["noisy_epsilon"] = fx::kW3NoisyEps;
  c.equal("gme_verdict_noisy", to_string(noisy.verdict), "undecided");

  const HermitianMatrix proj = (2.0 / 3.0) * HermitianMatrix::identity(8) - w3.density();
  const auto pnt = noise_tolerance(proj, w3);
  c.truth("projector_detects_w3", pnt.has_value());
  if (pnt) {
    c.near("projector_epsilon_star", pnt->epsilon, fx::kEpsProjectorW3);
    out["projector_epsilon_star"] = pnt->epsilon;
  }

  std::vector<PauliTerm> joint, joint_factor;
  for (const auto& [p, w] : pairs) {
    const auto t = pauli_terms(embed_pair(w, p.first, p.second, dims), 3);
    joint.insert(joint.end(), t.begin(), t.end());
  }
  std::vector<Setting> listed;
  for (const char* s : fx::kW3Settings) listed.push_back(Setting::from_label(s));
  c.truth("listed_settings_cover", verify_cover(listed, joint));
  const auto cover = min_cover(joint);
  c.truth("exact_search", cover.optimal);
  c.equal("lvnm_min_cover_size", cover.settings.size(), fx::kCoverW3);
  out["lvnm_cover"] = cover_json(cover);
  out["lvnm_terms"] = joint.size();
  (void)opts;
  return out;
}

json case_improve(const Options& opts, Checks& c) {
  const FinerPair fp = phi_plus_finer();
  const FinerResult& r = fp.result;
  const HermitianMatrix wc = assemble(fp.coarse.with_norm_mode(NormMode::TraceDiff));
  const HermitianMatrix wf = assemble(r.finer);
  json out{{"zeta", fx::kZeta},
           {"xi", fx::kXi},
           {"epsilon", r.epsilon},
           {"n_coarse", r.n_coarse},
           {"n_fine", r.n_fine},
           {"reconstruction_error", r.reconstruction_error},
           {"p_min_eigenvalue", min_eigenvalue(r.P)}};
  c.near("epsilon", r.epsilon, fx::kFinerEpsilon);
  c.at_most("reconstruction_error", r.reconstruction_error, fx::kReconstructionTol);
  c.truth("P_psd", is_psd(r.P));

  // seeded states near Phi+ with some detected by the coarse witness
  CounterRng rng(opts.seed, 101);
  const auto phi = bell(BellState::PhiPlus).density();
  std::size_t found = 0, violations = 0, tried = 0;
  while (found < fx::kDominanceStates && tried < 200000) {
    ++tried;
    const double t = 0.3 * rng.uniform();
    const HermitianMatrix rho = (1.0 - t) * phi + t * random_density(4, rng);
    if (!(expectation(wc, rho) < 0.0)) continue;
    ++found;
    if (!(expectation(wf, rho) < 0.0)) ++violations;
  }
  out["dominance_states"] = found;
  out["dominance_violations"] = violations;
  c.equal("dominance_states", found, fx::kDominanceStates);
  c.equal("dominance_violations", violations, 0);
  return out;
}

json case_nonlinear(const Options& opts, Checks& c) {
  const FinerPair fp = phi_plus_finer();
  const MSWitness& w = fp.coarse;
  const MSWitness qutrit = qutrit_probe_witness();

  double choi_worst = 0.0;
  CounterRng rng(opts.seed, 202);
  for (std::size_t i = 0; i < fx::kChoiInputs; ++i) {
    const MSWitness& target = i % 2 ? qutrit : w;
    const Matrix in = random_matrix(target.dims()[0], rng);
    const Matrix a = choi_map_partial_trace(target, in);
    const Matrix b = choi_map_decomposed(target, in);
    choi_worst = std::max(choi_worst, max_abs_diff(a, b) / std::max(1.0, frobenius_norm(a)));
  }
  c.at_most("choi_dual_route", choi_worst, fx::kChoiTol);

  double x_worst = 0.0;
  for (const MSWitness* target : {&w, &qutrit}) {
    const int d = static_cast<int>(target->dims()[0]);
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        const Matrix x = build_X(*target, generalized_bell(d, m, n), max_entangled(d));
        x_worst = std::max(x_worst, max_abs_diff(x, heisenberg_weyl_X(*target, m, n)));
      }
  }
  c.at_most("build_X_vs_closed_form", x_worst, fx::kBuildXTol);

  const auto psi_plus = bell(BellState::PsiPlus);
  const auto phi_plus = max_entangled(2);
  const NonlinearFunctional f = make_functional(w, psi_plus, phi_plus);
  const NonlinearFunctional f_wf = make_functional(fp.fine_raw, psi_plus, phi_plus);
  const Matrix expected_x = matmul(kron(pauli::X().matrix(), Matrix::identity(2)), assemble(w).matrix());
  const double x_err = max_abs_diff(f.X, expected_x);
  c.at_most("X_equals_sigma_x_times_W", x_err, fx::kBuildXTol);

  const std::size_t samples = opts.samples.value_or(fx::kGainSamples);
  const GainReport g = bell_diagonal_gain(w, fp.fine_raw, f, f_wf, samples, opts.seed, opts.workers);
  json out{{"choi_dual_route_max", choi_worst},
           {"build_X_max", x_worst},
           {"X_error", x_err},
           {"schmidt_s", f.s},
           {"samples", g.samples},
           {"frac_w", g.frac_w},
           {"frac_wf", g.frac_wf},
           {"frac_f", g.frac_f},
           {"frac_f_wf", g.frac_f_wf},
           {"pointwise_dominance", g.pointwise_dominance},
           {"finer_violations", g.finer_violations},
           {"reference_rel_gain_w", fx::kRelGainW},
           {"reference_rel_gain_wf", fx::kRelGainWf}};
  if (g.rel_gain_w) {
    out["rel_gain_w"] = *g.rel_gain_w;
    c.within("rel_gain_w", *g.rel_gain_w, fx::kRelGainWLo, fx::kRelGainWHi, false);
  }
  if (g.rel_gain_wf) {
    out["rel_gain_wf"] = *g.rel_gain_wf;
    out["rel_gain_wf_single_functional"] = *g.rel_gain_wf_single_functional;
    c.within("rel_gain_wf", *g.rel_gain_wf, fx::kRelGainWfLo, fx::kRelGainWfHi, false);
  }
  c.truth("pointwise_dominance", g.pointwise_dominance);
  c.truth("frac_f_ge_frac_w", g.frac_f >= g.frac_w);
  c.truth("frac_f_wf_ge_frac_wf", g.frac_f_wf >= g.frac_wf);
  c.truth("frac_f_ge_frac_wf", g.frac_f >= g.frac_wf);
  c.equal("finer_violations", g.finer_violations, 0);
  return out;
}

using CaseFn = json (*)(const Options&, Checks&);
const std::vector<std::pair<std::string, CaseFn>>& cases() {
  static const std::vector<std::pair<std::string, CaseFn>> table{
      {"bell-phi+", case_bell_phi_plus}, {"bell-psi-", case_bell_psi_minus}, {"w3", case_w3},
      {"improve", case_improve},         {"nonlinear", case_nonlinear}};
  return table;
}

json run_case(const std::string& name, CaseFn fn, const Options& opts) {
  Checks c;
  json r = base_report("reproduce", json{{"case", name}}, opts);
  r["case"] = name;
  r["values"] = fn(opts, c);
  return finish(std::move(r), c);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

Result cmd_check(const std::filesystem::path& path, const std::optional<std::string>& state,
                 const Options& opts) {
  const WitnessFile file = load_witness_file(path);
  const MSWitness w = load(path, opts);
  json inputs{{"witness", path.string()},
              {"norm_mode", to_string(w.norm_mode())},
              {"floor_restarts", opts.floor_restarts},
              {"tol", opts.tol},
              {"witness_file", json::parse(serialize_witness_file(file))}};
  if (state) inputs["state"] = *state;
  json r = base_report("check", std::move(inputs), opts);
  r["dims"] = w.dims();
  r["normalization"] = w.normalization();
  r["audit"] = validity_json(audit(w, floor_options(opts)));
  if (state) {
    const ParsedState s = parse_state_spec(*state);
    if (total_dim(s.dims) != w.dim() || s.dims != w.dims())
      throw DimensionMismatch("check: state dims do not match the witness");
    const double v = expectation(w, s.rho);
    const auto [om, os] = coincidence_overlaps(w, s.rho);
    json e{{"expectation", v}, {"detected", v < -opts.tol}, {"overlap_minuend", om}, {"overlap_subtrahend", os}};
    if (s.pure) {
      if (const auto nt = noise_tolerance(w, *s.pure)) {
        e["epsilon_star"] = nt->epsilon;
        e["epsilon_bisection"] = nt->epsilon_bisection;
        e["fidelity_threshold"] = fidelity_at_tolerance(nt->epsilon, s.pure->dim());
      }
    }
    r["state"] = e;
  }
  return Result{std::move(r), {}, kOk};
}

Result cmd_reproduce(const std::string& which, const Options& opts) {
  if (which == "all") {
    json r = base_report("reproduce", json{{"case", "all"}}, opts);
    r["case"] = "all";
    json sub = json::array();
    bool ok = true;
    for (const auto& [name, fn] : cases()) {
      json one = run_case(name, fn, opts);
      ok = ok && one["pass"].get<bool>();
      sub.push_back(std::move(one));
    }
    r["cases"] = std::move(sub);
    r["pass"] = ok;
    return Result{std::move(r), {}, ok ? kOk : kHardFailure};
  }
  for (const auto& [name, fn] : cases())
    if (name == which) {
      json r = run_case(name, fn, opts);
      const bool ok = r["pass"].get<bool>();
      return Result{std::move(r), {}, ok ? kOk : kHardFailure};
    }
  throw ParseError("unknown reproduce case '" + which + "'");
}

Result cmd_lvnm(const std::vector<std::filesystem::path>& paths, const std::string& mode, const Options& opts) {
  if (mode != "factor" && mode != "pauli") throw ParseError("--terms must be factor or pauli");
  if (paths.empty()) throw ParseError("lvnm: no witness files");
  json inputs{{"witnesses", json::array()}, {"terms", mode}};
  json per = json::array();
  std::vector<PauliTerm> joint;
  for (const auto& p : paths) {
    inputs["witnesses"].push_back(p.string());
    const MSWitness w = load(p, opts);
    for (auto d : w.dims())
      if (d != 2) throw DimensionMismatch("lvnm: qubit witnesses only");
    const auto terms = mode == "factor" ? factor_terms(w) : pauli_terms(assemble(w), w.sites());
    if (!joint.empty() && joint.front().sites() != w.sites())
      throw DimensionMismatch("lvnm: witnesses act on different site counts");
    per.push_back(json{{"witness", p.string()}, {"terms", terms_json(terms)}, {"cover", cover_json(min_cover(terms))}});
    joint.insert(joint.end(), terms.begin(), terms.end());
  }
  json r = base_report("lvnm", std::move(inputs), opts);
  r["witnesses"] = std::move(per);
  r["joint_cover"] = cover_json(min_cover(joint));
  return Result{std::move(r), {}, kOk};
}

Result cmd_gme(const std::filesystem::path& dir, const std::string& state, const Options& opts) {
  if (!std::filesystem::is_directory(dir)) throw ParseError("gme: '" + dir.string() + "' is not a directory");
  const std::regex name_re(R"(pair_(\d+)_(\d+)\.json)");
  std::map<SitePair, MSWitness> pairs;
  std::size_t n = 0;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json listed = json::array();
  for (const auto& f : files) {
    std::smatch m;
    const std::string fname = f.filename().string();
    if (!std::regex_match(fname, m, name_re)) continue;
    const std::size_t k = std::stoul(m[1]), kp = std::stoul(m[2]);
    if (k < 1 || kp <= k) throw SiteOutOfRange("gme: bad pair file name '" + fname + "'");
    pairs.emplace(SitePair{k - 1, kp - 1}, load(f, opts));
    n = std::max(n, kp);
    listed.push_back(fname);
  }
  if (pairs.empty()) throw ParseError("gme: no pair_<k>_<k'>.json files in '" + dir.string() + "'");

  const ParsedState s = parse_state_spec(state);
  if (s.dims.size() != n) throw DimensionMismatch("gme: state site count does not match the pair files");
  const GmeReport g = pairwise_scan(pairs, s.rho, s.dims);

  json r = base_report("gme", json{{"dir", dir.string()}, {"state", state}, {"files", listed}}, opts);
  json values = json::object();
  for (const auto& [p, v] : g.pair_values) values[pair_label(p)] = v;
  r["sites"] = n;
  r["pair_values"] = values;
  r["all_negative"] = g.all_negative;
  r["verdict"] = to_string(g.verdict);
  r["evaluations"] = g.evaluations;
  return Result{std::move(r), {}, kOk};
}

Result cmd_scan(const Options& opts) {
  const FinerPair fp = phi_plus_finer();
  const NonlinearFunctional f = make_functional(fp.coarse, bell(BellState::PsiPlus), max_entangled(2));
  const auto rows = bell_diagonal_scan(fp.coarse, fp.fine_raw, f, opts.samples.value_or(1000), opts.seed);
  std::string csv = "p1,p2,p3,p4,val_w,val_wf,val_f\n";
  for (const auto& row : rows) {
    for (double p : row.p) csv += format_double(p) + ",";
    csv += format_double(row.val_w) + "," + format_double(row.val_wf) + "," + format_double(row.val_f) + "\n";
  }
  return Result{nullptr, std::move(csv), kOk};
}

int run(int argc, char** argv) {
  CLI::App app{"Minuend-subtrahend entanglement witness toolkit"};
  app.require_subcommand(1);
  Options opts;
  std::string out_path, norm_mode;
  std::size_t samples = 0;
  app.add_option("--seed", opts.seed, "RNG seed")->capture_default_str();
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--floor-restarts", opts.floor_restarts, "product-state floor restarts")->capture_default_str();
  app.add_option("--tol", opts.tol, "detection margin")->capture_default_str();
  app.add_option("--norm-mode", norm_mode, "override witness normalization")
      ->check(CLI::IsMember({"raw", "trace_diff"}));
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--workers", opts.workers, "worker threads (0 = hardware)");
  app.fallthrough();

  std::string witness, state, which, dir, terms = "factor";
  std::vector<std::string> witnesses;
  auto* check = app.add_subcommand("check", "audit a witness file, optionally evaluate a state");
  check->add_option("witness", witness)->required();
  check->add_option("--state", state, "state spec");
  auto* reproduce = app.add_subcommand("reproduce", "run a reference case");
  reproduce->add_option("case", which)
      ->required()
      ->check(CLI::IsMember({"bell-phi+", "bell-psi-", "w3", "improve", "nonlinear", "all"}));
  auto* lvnm = app.add_subcommand("lvnm", "minimal measurement-setting covers");
  lvnm->add_option("witnesses", witnesses)->required();
  lvnm->add_option("--terms", terms, "factor or pauli")->check(CLI::IsMember({"factor", "pauli"}));
  auto* gme = app.add_subcommand("gme", "pairwise genuine multipartite entanglement scan");
  gme->add_option("dir", dir)->required();
  gme->add_option("state", state)->required();
  auto* scan = app.add_subcommand("scan", "Bell-diagonal value scan as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }
  if (samples > 0) opts.samples = samples;
  if (!norm_mode.empty()) opts.norm_mode = parse_norm_mode(norm_mode);

  try {
    Result r;
    if (*check)
      r = cmd_check(witness, state.empty() ? std::nullopt : std::optional<std::string>(state), opts);
    else if (*reproduce)
      r = cmd_reproduce(which, opts);
    else if (*lvnm)
      r = cmd_lvnm({witnesses.begin(), witnesses.end()}, terms, opts);
    else if (*gme)
      r = cmd_gme(dir, state, opts);
    else if (*scan)
      r = cmd_scan(opts);

    const std::string body = r.report.is_null() ? r.text : r.report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw ParseError("cannot write '" + out_path + "'");
      out << body;
    }
    return r.exit_code;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const DimensionMismatch& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kDimension;
  } catch (const UnsupportedDimension& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kDimension;
  } catch (const SiteOutOfRange& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kDimension;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kHardFailure;
  }
}

}  // namespace ewit::cli
