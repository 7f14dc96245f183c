#include "ewit/improve.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ewit/bloch.hpp"
#include "ewit/rng.hpp"

namespace ewit {

namespace {

void require_bipartite_equal(const MSWitness& w) {
  const auto d = w.dims();
  if (d.size() != 2 || d[0] != d[1]) throw DimensionMismatch("need a bipartite witness with equal site dims");
}

bool ordered(const BlochForm& a, const BlochForm& b, OrderingPredicate pred) {
  switch (pred) {
    case OrderingPredicate::Paper: return order_paper(a, b);
    case OrderingPredicate::Norm: return order_norm(a, b);
    case OrderingPredicate::Exact: return order_exact(a, b);
  }
  return false;
}

MSWitness scale_site(const MSWitness& w, std::size_t site, double minuend_scale, double subtrahend_scale) {
  auto scaled = [site](const ProductObservable& p, double s) {
    std::vector<LocalFactor> f = p.factors();
    f[site] = LocalFactor::from_bloch(s * f[site].bloch);
    return ProductObservable(std::move(f));
  };
  return MSWitness(scaled(w.minuend(), minuend_scale), scaled(w.subtrahend(), subtrahend_scale), w.norm_mode());
}

}  // namespace

// ----------------------------------------------------------------- finer

FinerResult finer(const MSWitness& w, const FinerParams& p, OrderingPredicate predicate, std::size_t site) {
  if (w.norm_mode() != NormMode::TraceDiff) throw Error("finer: witness must be in trace_diff mode");
  if (site >= w.sites()) throw DimensionMismatch("finer: site out of range");
  if (!(p.zeta >= 0.0 && p.zeta < 1.0) || !(p.xi >= 0.0)) throw Error("finer: need 0 <= zeta < 1 and xi >= 0");

  const double n_c = w.normalization();
  if (!(n_c > 0.0)) throw NonPositiveNormalization("finer: coarse normalization must be positive");

  const BlochForm m_site = (1.0 - p.zeta) * w.minuend().factors()[site].bloch;
  const BlochForm s_site = (1.0 + p.xi) * w.subtrahend().factors()[site].bloch;
  if (!ordered(m_site, s_site, predicate))
    throw OrderingViolated("finer: scaled factors at the chosen site are not ordered");

  MSWitness wf = scale_site(w, site, 1.0 - p.zeta, 1.0 + p.xi);
  const double n_f = wf.normalization();
  if (!(n_f > 0.0)) throw NonPositiveNormalization("finer: fine normalization must be positive");

  const HermitianMatrix M = w.minuend().assemble();
  const HermitianMatrix S = w.subtrahend().assemble();
  const double denom = p.zeta * w.minuend().trace() + p.xi * w.subtrahend().trace();

  FinerResult r{std::move(wf), 1.0 - n_f / n_c, HermitianMatrix::zero(M.dim()), false, n_c, n_f, 0.0};
  if (denom == 0.0) {
    r.p_degenerate = true;
  } else {
    r.P = (1.0 / denom) * (p.zeta * M + p.xi * S);
  }
  const HermitianMatrix rebuilt = (1.0 - r.epsilon) * assemble(r.finer) + r.epsilon * r.P;
  r.reconstruction_error = max_abs_diff(assemble(w).matrix(), rebuilt.matrix());
  return r;
}

// ------------------------------------------------------------- Choi map

Matrix choi_map_partial_trace(const MSWitness& w, const Matrix& rho_in) {
  require_bipartite_equal(w);
  const std::size_t d = w.dims()[0];
  if (rho_in.rows() != d || rho_in.cols() != d) throw DimensionMismatch("choi_map: input size mismatch");
  const Matrix prod = matmul(assemble(w).matrix(), kron(transpose(rho_in), Matrix::identity(d)));
  const std::vector<std::size_t> dims{d, d};
  const std::vector<std::size_t> keep{1};
  Matrix out = partial_trace(prod, dims, keep);
  out *= static_cast<double>(d);
  return out;
}

Matrix choi_map_decomposed(const MSWitness& w, const Matrix& rho_in) {
  require_bipartite_equal(w);
  const std::size_t d = w.dims()[0];
  if (rho_in.rows() != d || rho_in.cols() != d) throw DimensionMismatch("choi_map: input size mismatch");
  const Matrix rt = transpose(rho_in);
  const auto& mf = w.minuend().factors();
  const auto& sf = w.subtrahend().factors();
  const Cplx cm = trace_product(mf[0].matrix.matrix(), rt);
  const Cplx cs = trace_product(sf[0].matrix.matrix(), rt);
  Matrix out = cm * mf[1].matrix.matrix() - cs * sf[1].matrix.matrix();
  out *= static_cast<double>(d) / w.normalization();
  return out;
}

HermitianMatrix choi_map(const MSWitness& w, const HermitianMatrix& rho_in) {
  const Matrix a = choi_map_partial_trace(w, rho_in.matrix());
  const Matrix b = choi_map_decomposed(w, rho_in.matrix());
  if (max_abs_diff(a, b) > 1e-10 * std::max(1.0, frobenius_norm(a)))
    throw FormMismatch("choi_map: partial-trace and decomposed routes disagree");
  return symmetrize(a);
}

Matrix build_X(const MSWitness& w, const StateVector& psi, const StateVector& phi) {
  require_bipartite_equal(w);
  const std::size_t d = w.dims()[0];
  if (psi.dims() != std::vector<std::size_t>{d, d} || phi.dims() != psi.dims())
    throw DimensionMismatch("build_X: states must live on the witness' space");

  const auto& g = basis(static_cast<int>(d));
  std::vector<HermitianMatrix> ops{HermitianMatrix::identity(d)};
  std::vector<double> norms{static_cast<double>(d)};
  for (const auto& e : g.elements) {
    ops.push_back(e);
    norms.push_back(2.0);
  }
  std::vector<HermitianMatrix> images;
  for (const auto& e : ops) images.push_back(choi_map(w, e));

  Matrix X(d * d, d * d);
  for (std::size_t a = 0; a < ops.size(); ++a)
    for (std::size_t b = 0; b < ops.size(); ++b) {
      // coefficient of E_a x E_b in |psi><phi|: <phi| E_a x E_b |psi> / (n_a n_b)
      const CVector v = matvec(kron(ops[a].matrix(), ops[b].matrix()), psi.amplitudes());
      Cplx c{};
      for (std::size_t k = 0; k < v.size(); ++k) c += std::conj(phi.amplitudes()[k]) * v[k];
      c /= norms[a] * norms[b];
      if (std::abs(c) < 1e-15) continue;
      X += c * kron(ops[a].matrix(), images[b].matrix());
    }
  return X;
}

Matrix heisenberg_weyl_X(const MSWitness& w, int m, int n) {
  require_bipartite_equal(w);
  const std::size_t d = w.dims()[0];
  const auto hw = heisenberg_weyl(static_cast<int>(d), m, n);
  return matmul(kron(transpose(hw.matrix), Matrix::identity(d)), assemble(w).matrix());
}

NonlinearFunctional make_functional(const MSWitness& w, const StateVector& psi, const StateVector& phi) {
  const double s = schmidt_squares(psi).front();
  return NonlinearFunctional{w, psi, phi, s, build_X(w, psi, phi), assemble(w)};
}

double nonlinear_value(const NonlinearFunctional& f, const HermitianMatrix& rho) {
  if (rho.dim() != f.W.dim()) throw DimensionMismatch("nonlinear_value: state size mismatch");
  if (!is_density_matrix(rho)) throw Error("nonlinear_value: expected a density matrix");
  const Cplx tx = trace_product(f.X, rho.matrix());
  return expectation(f.W, rho) - std::norm(tx) / f.s;
}

// --------------------------------------------------- Bell-diagonal Monte Carlo

namespace {

constexpr std::array kBellOrder{BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
                                BellState::PsiMinus};
constexpr std::size_t kBlock = 4096;

void require_two_qubit(const HermitianMatrix& m) {
  if (m.dim() != 4) throw DimensionMismatch("Bell-diagonal probes need two-qubit operators");
}

}  // namespace

BellDiagonalProbe BellDiagonalProbe::linear(const HermitianMatrix& w) {
  require_two_qubit(w);
  BellDiagonalProbe p;
  for (std::size_t i = 0; i < 4; ++i) p.w[i] = expectation(w, bell(kBellOrder[i]).amplitudes());
  return p;
}

BellDiagonalProbe BellDiagonalProbe::nonlinear(const NonlinearFunctional& f) {
  BellDiagonalProbe p = linear(f.W);
  for (std::size_t i = 0; i < 4; ++i) p.x[i] = trace_product(f.X, bell(kBellOrder[i]).density().matrix());
  p.inv_s = 1.0 / f.s;
  return p;
}

double BellDiagonalProbe::value(const std::array<double, 4>& p) const {
  double lin = 0.0;
  Cplx tx{};
  for (std::size_t i = 0; i < 4; ++i) {
    lin += p[i] * w[i];
    tx += p[i] * x[i];
  }
  return lin - inv_s * std::norm(tx);
}

GainReport bell_diagonal_gain(const MSWitness& w, const MSWitness& w_f, const NonlinearFunctional& f,
                              const NonlinearFunctional& f_wf, std::size_t samples, std::uint64_t seed,
                              unsigned workers) {
  if (samples < 100000) throw Error("bell_diagonal_gain: need at least 1e5 samples");
  const auto pw = BellDiagonalProbe::linear(assemble(w));
  const auto pwf = BellDiagonalProbe::linear(assemble(w_f));
  const auto pf = BellDiagonalProbe::nonlinear(f);
  const auto pfwf = BellDiagonalProbe::nonlinear(f_wf);

  struct Counts {
    std::size_t w = 0, wf = 0, f = 0, fwf = 0, finer_violations = 0;
    bool dominance = true;
  };
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<Counts> per_block(blocks);

  auto run_block = [&](std::size_t b) {
    CounterRng rng(seed, b);
    const std::size_t count = std::min(kBlock, samples - b * kBlock);
    Counts c;
    for (std::size_t i = 0; i < count; ++i) {
      const auto p = sample_bell_diagonal(rng).p;
      const double vw = pw.value(p), vwf = pwf.value(p), vf = pf.value(p), vfwf = pfwf.value(p);
      c.w += vw < 0.0;
      c.wf += vwf < 0.0;
      c.f += vf < 0.0;
      c.fwf += vfwf < 0.0;
      if (vw < 0.0 && !(vwf < 0.0)) ++c.finer_violations;
      if (vf > vw + 1e-15 || vfwf > vwf + 1e-15) c.dominance = false;
    }
    per_block[b] = c;
  };

  unsigned nw = workers != 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
  nw = static_cast<unsigned>(std::min<std::size_t>(nw, blocks));
  if (nw <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < nw; ++k)
      pool.emplace_back([&, k] {
        for (std::size_t b = k; b < blocks; b += nw) run_block(b);
      });
  }

  Counts total;
  for (const auto& c : per_block) {
    total.w += c.w;
    total.wf += c.wf;
    total.f += c.f;
    total.fwf += c.fwf;
    total.finer_violations += c.finer_violations;
    total.dominance = total.dominance && c.dominance;
  }

  GainReport r;
  r.samples = samples;
  r.seed = seed;
  const double n = static_cast<double>(samples);
  r.frac_w = total.w / n;
  r.frac_wf = total.wf / n;
  r.frac_f = total.f / n;
  r.frac_f_wf = total.fwf / n;
  if (total.w > 0) r.rel_gain_w = (r.frac_f - r.frac_w) / r.frac_w;
  if (total.wf > 0) {
    r.rel_gain_wf = (r.frac_f_wf - r.frac_wf) / r.frac_wf;
    r.rel_gain_wf_single_functional = (r.frac_f - r.frac_wf) / r.frac_wf;
  }
  r.pointwise_dominance = total.dominance;
  r.finer_violations = total.finer_violations;
  return r;
}

std::vector<ScanRow> bell_diagonal_scan(const MSWitness& w, const MSWitness& w_f,
                                        const NonlinearFunctional& f, std::size_t samples,
                                        std::uint64_t seed) {
  const auto pw = BellDiagonalProbe::linear(assemble(w));
  const auto pwf = BellDiagonalProbe::linear(assemble(w_f));
  const auto pf = BellDiagonalProbe::nonlinear(f);
  std::vector<ScanRow> rows;
  rows.reserve(samples);
  for (std::size_t b = 0; b * kBlock < samples; ++b) {
    CounterRng rng(seed, b);
    const std::size_t count = std::min(kBlock, samples - b * kBlock);
    for (std::size_t i = 0; i < count; ++i) {
      ScanRow row;
      row.p = sample_bell_diagonal(rng).p;
      row.val_w = pw.value(row.p);
      row.val_wf = pwf.value(row.p);
      row.val_f = pf.value(row.p);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace ewit
