// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ewit/bloch.hpp"
#include "ewit/fixtures.hpp"
#include "ewit/gme.hpp"
#include "ewit/improve.hpp"
#include "ewit/lvnm.hpp"
#include "ewit/states.hpp"
#include "ewit/witness.hpp"
#include "support.hpp"

using namespace ewit;
namespace fx = ewit::fixtures;

namespace {

/// Accumulates sub-checks of one criterion and a short detail line.
struct Criterion {
  bool ok = true;
  std::ostringstream detail;

  void near(const char* name, double v, double ref, double tol) {
    const bool pass = std::abs(v - ref) <= tol;
    ok = ok && pass;
    detail << name << "=" << v << (pass ? "" : "(!)") << " ";
  }
  void at_most(const char* name, double v, double limit) {
    const bool pass = v <= limit;
    ok = ok && pass;
    detail << name << "=" << v << (pass ? "" : "(!)") << " ";
  }
  void truth(const char* name, bool v) {
    ok = ok && v;
    detail << name << "=" << (v ? "yes" : "no(!)") << " ";
  }
};

MSWitness phi_plus() { return fx::phi_plus_witness().to_witness(); }
MSWitness psi_minus() { return fx::psi_minus_witness().to_witness(); }

void c1(Criterion& c) {
  const auto phi = bell(BellState::PhiPlus), psi = bell(BellState::PsiMinus);
  c.near("Wphi(phi+)", expectation(phi_plus(), phi), -0.012983, 1e-6);
  c.near("Wphi(psi-)", expectation(phi_plus(), psi), 0.109331, 1e-6);
  c.near("Wpsi(psi-)", expectation(psi_minus(), psi), -0.110104, 1e-6);
  c.near("Wpsi(phi+)", expectation(psi_minus(), phi), 0.921146, 1e-6);
}

void c2(Criterion& c) {
  const auto phi = bell(BellState::PhiPlus), psi = bell(BellState::PsiMinus);
  const auto a = noise_tolerance(phi_plus(), phi);
  const auto b = noise_tolerance(psi_minus(), psi);
  c.truth("detected", a.has_value() && b.has_value());
  if (!a || !b) return;
  c.near("eps_phi+", a->epsilon, 0.21229, 5e-4);
  c.near("eps_psi-", b->epsilon, 0.21354, 5e-4);
  c.near("fidelity", fidelity_at_tolerance(a->epsilon, 4), 0.84078, 5e-4);
  c.at_most("closed_vs_bisect", std::max(std::abs(a->epsilon - a->epsilon_bisection),
                                         std::abs(b->epsilon - b->epsilon_bisection)),
            1e-9);
}

void c3(Criterion& c) {
  const MSWitness base = fx::w3_pair_witness().to_witness();
  const std::vector<std::size_t> dims{2, 2, 2};
  const auto pairs = same_witness_for_all_pairs(base, 3);
  const auto w3 = w_state(3);
  const auto clean = pairwise_scan(pairs, w3.density(), dims);
  double worst = 0.0;
  for (const auto& [p, v] : clean.pair_values) worst = std::max(worst, std::abs(v - (-0.002617)));
  c.at_most("pair_dev", worst, 2e-5);
  const auto nt = noise_tolerance(embed_pair(base, 0, 1, dims), w3);
  c.truth("detected", nt.has_value());
  if (nt) c.near("eps", nt->epsilon, 0.21086, 1e-3);
  c.truth("genuine@0", clean.verdict == GmeVerdict::Genuine);
  c.truth("undecided@0.25",
          pairwise_scan(pairs, white_noise(w3, 0.25), dims).verdict == GmeVerdict::Undecided);
  const auto phi = bell(BellState::PhiPlus);
  const auto p2 = noise_tolerance(0.5 * HermitianMatrix::identity(4) - phi.density(), phi);
  const auto p3 = noise_tolerance((2.0 / 3.0) * HermitianMatrix::identity(8) - w3.density(), w3);
  c.truth("projectors_detect", p2.has_value() && p3.has_value());
  if (p2 && p3) {
    c.near("proj_phi+", p2->epsilon, 2.0 / 3.0, 1e-12);
    c.near("proj_w3", p3->epsilon, 8.0 / 21.0, 1e-12);
  }
}

void c4(Criterion& c) {
  c.truth("Wphi_cover=1", min_cover(factor_terms(phi_plus())).settings.size() == 1);
  const auto phi = bell(BellState::PhiPlus);
  c.truth("projector_cover=3",
          min_cover(pauli_terms(0.5 * HermitianMatrix::identity(4) - phi.density(), 2)).settings.size() == 3);

  const MSWitness base = fx::w3_pair_witness().to_witness();
  std::vector<Setting> listed;
  for (const char* s : fx::kW3Settings) listed.push_back(Setting::from_label(s));
  std::vector<PauliTerm> joint;
  bool each = true;
  for (auto [k, kp] : {SitePair{0, 1}, SitePair{0, 2}, SitePair{1, 2}}) {
    const auto t = pauli_terms(embed_pair(base, k, kp, 3), 3);
    each = each && verify_cover(listed, t);
    joint.insert(joint.end(), t.begin(), t.end());
  }
  c.truth("listed_covers_each", each);
  c.truth("listed_covers_joint", verify_cover(listed, joint));
  const auto best = min_cover(joint);
  c.truth("exact", best.optimal);
  c.truth("no_cover<=3", best.optimal && best.settings.size() == 4);
}

void c5(Criterion& c) {
  const auto& f = phi_plus();
  const auto& a = f.minuend().factors()[0].bloch;
  const auto& b = f.subtrahend().factors()[0].bloch;
  c.truth("order_paper", order_paper(a, b));
  c.truth("not_order_exact", !order_exact(a, b));
  c.near("local_min_eig", min_eigenvalue(to_matrix(a - b)), -0.00934, 1e-4);
  c.near("floor", product_state_floor(f), -0.0361, 1e-3);
  c.truth("paper_valid_only", audit(phi_plus()).verdict == Verdict::PaperValidOnly &&
                                  audit(psi_minus()).verdict == Verdict::PaperValidOnly);
}

void c6(Criterion& c) {
  CounterRng rng(fx::kDefaultSeed, 6);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    std::vector<LocalFactor> m, s;
    for (int site = 0; site < 2; ++site) {
      const HermitianMatrix lo = support::random_psd(d, rng);
      // strictly larger: add a full-rank positive increment
      const HermitianMatrix hi = lo + 0.3 * support::random_psd(d, rng) + 1e-3 * HermitianMatrix::identity(d);
      m.push_back(LocalFactor::from_matrix(hi));
      s.push_back(LocalFactor::from_matrix(lo));
    }
    worst = std::min(worst, min_eigenvalue(assemble(MSWitness{ProductObservable(m), ProductObservable(s)})));
  }
  c.truth("min_eig>=-1e-9", worst >= -1e-9);
  c.detail << "worst=" << worst << " ";
}

void c7(Criterion& c) {
  const MSWitness wc = phi_plus().with_norm_mode(NormMode::TraceDiff);
  const auto r = finer(wc, {fx::kZeta, fx::kXi}, OrderingPredicate::Paper);
  c.at_most("reconstruction", r.reconstruction_error, 1e-10);
  c.truth("P_psd", is_psd(r.P));
  c.near("epsilon", r.epsilon, 0.00468, 1e-4);
  const auto mc = assemble(wc), mf = assemble(r.finer);
  CounterRng rng(fx::kDefaultSeed, 7);
  const auto phi = bell(BellState::PhiPlus).density();
  int found = 0, bad = 0, tried = 0;
  while (found < 1000 && tried < 200000) {
    ++tried;
    const double t = 0.3 * rng.uniform();
    const auto rho = (1.0 - t) * phi + t * random_density(4, rng);
    if (!(expectation(mc, rho) < 0.0)) continue;
    ++found;
    bad += !(expectation(mf, rho) < 0.0);
  }
  c.truth("1000_detected_states", found == 1000);
  c.truth("finer_dominance", bad == 0);
}

void c8(Criterion& c) {
  const MSWitness w = phi_plus();
  CounterRng rng(fx::kDefaultSeed, 8);
  std::vector<MSWitness> ws{w};
  {
    std::vector<BlochForm> m, s;
    for (int site = 0; site < 2; ++site) {
      BlochForm a = BlochForm::scaled_identity(3, 1.4), b = BlochForm::scaled_identity(3, 1.0);
      for (std::size_t k = 0; k < 8; ++k) {
        a.nu[k] = 0.1 * rng.normal();
        b.nu[k] = 0.1 * rng.normal();
      }
      m.push_back(a);
      s.push_back(b);
    }
    ws.push_back(MSWitness::from_bloch(m, s));
  }
  double choi = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const MSWitness& t = ws[static_cast<std::size_t>(i % 2)];
    const std::size_t d = t.dims()[0];
    const Matrix in = support::random_matrix(d, d, rng);
    const Matrix a = choi_map_partial_trace(t, in);
    choi = std::max(choi, max_abs_diff(a, choi_map_decomposed(t, in)) / std::max(1.0, frobenius_norm(a)));
  }
  c.at_most("choi_dual", choi, 1e-10);
  double bx = 0.0;
  for (const auto& t : ws) {
    const int d = static_cast<int>(t.dims()[0]);
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        bx = std::max(bx, max_abs_diff(build_X(t, generalized_bell(d, m, n), max_entangled(d)),
                                       heisenberg_weyl_X(t, m, n)));
  }
  c.at_most("build_X", bx, 1e-10);
  const Matrix x = build_X(w, bell(BellState::PsiPlus), max_entangled(2));
  c.at_most("X_vs_sigmax_W",
            max_abs_diff(x, matmul(kron(pauli::X().matrix(), Matrix::identity(2)), assemble(w).matrix())), 1e-10);
}

void c9(Criterion& c) {
  const MSWitness w = phi_plus();
  const auto r = finer(w.with_norm_mode(NormMode::TraceDiff), {fx::kZeta, fx::kXi}, OrderingPredicate::Paper);
  const MSWitness wf = r.finer.with_norm_mode(NormMode::Raw);
  const auto f = make_functional(w, bell(BellState::PsiPlus), max_entangled(2));
  const auto f_wf = make_functional(wf, bell(BellState::PsiPlus), max_entangled(2));
  const auto g = bell_diagonal_gain(w, wf, f, f_wf, fx::kGainSamples, fx::kDefaultSeed);
  c.truth("gains_defined", g.rel_gain_w.has_value() && g.rel_gain_wf.has_value());
  if (!g.rel_gain_w || !g.rel_gain_wf) return;
  c.truth("rel_gain_w_in_band", *g.rel_gain_w >= 0.05 && *g.rel_gain_w <= 0.13);
  c.truth("rel_gain_wf_in_band", *g.rel_gain_wf >= 0.06 && *g.rel_gain_wf <= 0.14);
  c.detail << "rel_gain_w=" << *g.rel_gain_w << " rel_gain_wf=" << *g.rel_gain_wf << " ";
  c.truth("pointwise_dominance", g.pointwise_dominance);
  c.truth("frac_f>=frac_w", g.frac_f >= g.frac_w);
  c.truth("frac_f>=frac_wf", g.frac_f >= g.frac_wf);
  c.truth("frac_f_wf>=frac_wf", g.frac_f_wf >= g.frac_wf);
}

void c10(Criterion& c) {
  CounterRng rng(fx::kDefaultSeed, 10);
  double resid = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 7);
    const HermitianMatrix h = support::random_hermitian(d, rng);
    const auto e = eigh(h);
    Matrix lam(d, d);
    for (std::size_t k = 0; k < d; ++k) lam(k, k) = e.eigenvalues[k];
    const Matrix rec = matmul(matmul(e.eigenvectors, lam), conj_transpose(e.eigenvectors));
    resid = std::max(resid, frobenius_norm(rec - h.matrix()) / frobenius_norm(h.matrix()));
  }
  c.at_most("eigh_residual", resid, 1e-10);

  double gm = 0.0;
  for (int d = 2; d <= 8; ++d) {
    const auto& g = basis(d).elements;
    for (std::size_t k = 0; k < g.size(); ++k)
      for (std::size_t l = 0; l < g.size(); ++l)
        gm = std::max(gm, std::abs(trace_product(g[k].matrix(), g[l].matrix()) - (k == l ? 2.0 : 0.0)));
  }
  c.at_most("gell_mann", gm, 1e-12);

  bool states_ok = true;
  for (auto b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus})
    states_ok = states_ok && is_density_matrix(bell(b).density());
  for (int n = 2; n <= 5; ++n)
    states_ok = states_ok && is_density_matrix(ghz(n).density()) && is_density_matrix(w_state(n).density());
  for (int d = 2; d <= 4; ++d)
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) states_ok = states_ok && is_density_matrix(generalized_bell(d, m, n).density());
  const std::vector<std::size_t> dims{2, 2};
  bool peres = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 5);
    states_ok = states_ok && is_density_matrix(haar_pure(d, rng).density()) &&
                is_density_matrix(random_density(d, rng)) && is_density_matrix(random_product(dims, rng).density()) &&
                is_density_matrix(bell_diagonal(sample_bell_diagonal(rng))) &&
                is_density_matrix(white_noise(haar_pure(4, rng), rng.uniform()));
    const auto sep = sample_separable(dims, rng);
    states_ok = states_ok && is_density_matrix(sep);
    const auto pt = oracle::transpose_first(support::to_dense(sep), 2, 2);
    peres = peres && is_psd(HermitianMatrix(support::from_dense(pt)), 1e-12);
  }
  c.truth("factories_and_samplers", states_ok);
  c.truth("peres", peres);
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void(Criterion&)>>> all{
      {1, c1}, {2, c2}, {3, c3}, {4, c4}, {5, c5}, {6, c6}, {7, c7}, {8, c8}, {9, c9}, {10, c10}};
  int failed = 0;
  for (const auto& [n, fn] : all) {
    Criterion c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    std::printf("CRITERION %d %s: %s\n", n, c.ok ? "PASS" : "FAIL", c.detail.str().c_str());
    failed += !c.ok;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
