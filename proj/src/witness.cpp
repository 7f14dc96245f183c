#include "ewit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "ewit/rng.hpp"

namespace ewit {

namespace {

constexpr std::size_t kMaxTotalDim = 64;

void require_density(const HermitianMatrix& rho, std::size_t dim) {
  if (rho.dim() != dim) throw DimensionMismatch("state dimension does not match the witness");
  if (!is_density_matrix(rho)) throw Error("expected a density matrix (unit trace, PSD)");
}

}  // namespace

// ---------------------------------------------------------- construction

LocalFactor LocalFactor::from_bloch(BlochForm b) {
  HermitianMatrix m = to_matrix(b);
  return LocalFactor{std::move(b), std::move(m)};
}

LocalFactor LocalFactor::from_matrix(const HermitianMatrix& m) {
  return LocalFactor{ewit::from_matrix(m), m};
}

ProductObservable::ProductObservable(std::vector<LocalFactor> factors) : factors_(std::move(factors)) {
  if (factors_.size() < 2) throw DimensionMismatch("product observable needs at least two sites");
  std::size_t d = 1;
  for (const auto& f : factors_) d *= f.dim();
  if (d > kMaxTotalDim) throw DimensionMismatch("product observable exceeds total dimension 64");
}

std::vector<std::size_t> ProductObservable::dims() const {
  std::vector<std::size_t> d;
  for (const auto& f : factors_) d.push_back(f.dim());
  return d;
}

HermitianMatrix ProductObservable::assemble() const {
  HermitianMatrix out = factors_[0].matrix;
  for (std::size_t k = 1; k < factors_.size(); ++k) out = kron(out, factors_[k].matrix);
  return out;
}

double ProductObservable::trace() const {
  double t = 1.0;
  for (const auto& f : factors_) t *= real_trace(f.matrix);
  return t;
}

MSWitness::MSWitness(ProductObservable minuend, ProductObservable subtrahend, NormMode mode)
    : minuend_(std::move(minuend)), subtrahend_(std::move(subtrahend)), mode_(mode) {
  if (minuend_.dims() != subtrahend_.dims())
    throw DimensionMismatch("minuend and subtrahend site dimensions differ");
}

MSWitness MSWitness::from_bloch(const std::vector<BlochForm>& minuend,
                                const std::vector<BlochForm>& subtrahend, NormMode mode) {
  std::vector<LocalFactor> m, s;
  for (const auto& b : minuend) m.push_back(LocalFactor::from_bloch(b));
  for (const auto& b : subtrahend) s.push_back(LocalFactor::from_bloch(b));
  return MSWitness(ProductObservable(std::move(m)), ProductObservable(std::move(s)), mode);
}

std::size_t MSWitness::dim() const { return total_dim(dims()); }

double MSWitness::normalization() const {
  if (mode_ == NormMode::Raw) return 1.0;
  return minuend_.trace() - subtrahend_.trace();
}

MSWitness MSWitness::with_norm_mode(NormMode mode) const {
  MSWitness copy = *this;
  copy.mode_ = mode;
  return copy;
}

HermitianMatrix assemble(const MSWitness& w) {
  const double n = w.normalization();
  if (n == 0.0) throw Error("witness normalization constant is zero");
  return (1.0 / n) * (w.minuend().assemble() - w.subtrahend().assemble());
}

double expectation(const MSWitness& w, const HermitianMatrix& rho) {
  require_density(rho, w.dim());
  return expectation(assemble(w), rho);
}

double expectation(const MSWitness& w, const StateVector& psi) {
  if (psi.dim() != w.dim()) throw DimensionMismatch("state dimension does not match the witness");
  return expectation(assemble(w), psi.amplitudes());
}

std::pair<double, double> coincidence_overlaps(const MSWitness& w, const HermitianMatrix& rho) {
  require_density(rho, w.dim());
  const double tm = w.minuend().trace();
  const double ts = w.subtrahend().trace();
  if (!(tm > 0.0) || !(ts > 0.0)) throw Error("coincidence_overlaps: product traces must be positive");
  return {expectation(w.minuend().assemble(), rho) / tm, expectation(w.subtrahend().assemble(), rho) / ts};
}

// -------------------------------------------------------- product floor

namespace {

/// <phi_others (x) a| op |phi_others (x) b> for site `site`.
HermitianMatrix effective_operator(const HermitianMatrix& op, std::span<const std::size_t> dims,
                                   const std::vector<CVector>& states, std::size_t site) {
  const std::size_t d = dims[site];
  std::vector<CVector> lifted;
  lifted.reserve(d);
  for (std::size_t b = 0; b < d; ++b) {
    CVector full{1.0};
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (s == site) {
        CVector e(d);
        e[b] = 1.0;
        full = kron(full, e);
      } else {
        full = kron(full, states[s]);
      }
    }
    lifted.push_back(std::move(full));
  }
  std::vector<CVector> images;
  images.reserve(d);
  for (const auto& v : lifted) images.push_back(matvec(op.matrix(), v));
  Matrix m(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      Cplx s{};
      for (std::size_t k = 0; k < lifted[a].size(); ++k) s += std::conj(lifted[a][k]) * images[b][k];
      m(a, b) = s;
    }
  return symmetrize(m);
}

double product_value(const HermitianMatrix& op, const std::vector<CVector>& states) {
  CVector full{1.0};
  for (const auto& s : states) full = kron(full, s);
  return expectation(op, full);
}

double alternating_minimum(const HermitianMatrix& op, std::span<const std::size_t> dims,
                           std::uint64_t seed) {
  constexpr int kMaxSweeps = 1000;
  constexpr double kStall = 1e-12;
  CounterRng rng(seed);
  std::vector<CVector> states;
  for (auto d : dims) states.push_back(haar_pure(d, rng).amplitudes());

  double value = product_value(op, states);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (std::size_t s = 0; s < dims.size(); ++s) {
      const auto ed = eigh(effective_operator(op, dims, states, s));
      CVector v(dims[s]);
      for (std::size_t r = 0; r < dims[s]; ++r) v[r] = ed.eigenvectors(r, 0);
      states[s] = std::move(v);
    }
    const double next = product_value(op, states);
    const bool stalled = value - next < kStall;
    value = std::min(value, next);
    if (stalled) break;
  }
  return value;
}

CVector bloch_sphere_state(double theta, double phi) {
  return {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)};
}

double two_qubit_grid_minimum(const HermitianMatrix& op) {
  constexpr int kPolar = 10;
  constexpr int kAzimuth = 10;
  std::vector<CVector> dirs;
  for (int i = 0; i < kPolar; ++i)
    for (int j = 0; j < kAzimuth; ++j)
      dirs.push_back(bloch_sphere_state(std::numbers::pi * (i + 0.5) / kPolar,
                                        2.0 * std::numbers::pi * j / kAzimuth));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : dirs)
    for (const auto& b : dirs) best = std::min(best, expectation(op, kron(a, b)));
  return best;
}

}  // namespace

double product_state_floor(const HermitianMatrix& op, std::span<const std::size_t> dims,
                           const FloorOptions& opts) {
  if (opts.restarts < 1) throw Error("product_state_floor: need at least one restart");
  if (total_dim(dims) != op.dim()) throw DimensionMismatch("product_state_floor: dims do not match operator");

  const auto restarts = static_cast<std::size_t>(opts.restarts);
  unsigned workers = opts.workers != 0 ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, restarts));

  std::vector<double> results(restarts, std::numeric_limits<double>::infinity());
  const std::vector<std::size_t> dim_copy(dims.begin(), dims.end());
  auto run = [&](unsigned worker) {
    for (std::size_t r = worker; r < restarts; r += workers)
      results[r] = alternating_minimum(op, dim_copy, opts.seed + r);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(run, k);
  }

  double best = *std::min_element(results.begin(), results.end());
  if (dims.size() == 2 && dims[0] == 2 && dims[1] == 2) best = std::min(best, two_qubit_grid_minimum(op));
  return best;
}

double product_state_floor(const MSWitness& w, const FloorOptions& opts) {
  const auto dims = w.dims();
  return product_state_floor(assemble(w), dims, opts);
}

// ------------------------------------------------------------------ audit

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::StrictValid: return "strict_valid";
    case Verdict::PaperValidOnly: return "paper_valid_only";
    case Verdict::Invalid: return "invalid";
  }
  return "invalid";
}

bool ValidityReport::local_positivity() const {
  return std::all_of(minuend_positive.begin(), minuend_positive.end(), [](bool b) { return b; }) &&
         std::all_of(subtrahend_positive.begin(), subtrahend_positive.end(), [](bool b) { return b; });
}

ValidityReport audit(const MSWitness& w, const FloorOptions& opts) {
  ValidityReport r;
  const auto& mf = w.minuend().factors();
  const auto& sf = w.subtrahend().factors();
  for (std::size_t j = 0; j < w.sites(); ++j) {
    r.minuend_positive.push_back(is_psd(mf[j].matrix));
    r.subtrahend_positive.push_back(is_psd(sf[j].matrix));
    r.order_paper.push_back(order_paper(mf[j].bloch, sf[j].bloch));
    r.order_norm.push_back(order_norm(mf[j].bloch, sf[j].bloch));
    r.order_exact.push_back(order_exact(mf[j].bloch, sf[j].bloch));
    r.local_gap.push_back(min_eigenvalue(mf[j].matrix - sf[j].matrix));
  }
  const HermitianMatrix op = assemble(w);
  r.min_eigenvalue = min_eigenvalue(op);
  r.globally_psd = r.min_eigenvalue >= -1e-9;
  r.product_floor = product_state_floor(op, w.dims(), opts);

  auto all = [](const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
  if (!r.local_positivity() || r.globally_psd) {
    r.verdict = Verdict::Invalid;
  } else if (all(r.order_exact) && r.product_floor >= -1e-6) {
    r.verdict = Verdict::StrictValid;
  } else if (all(r.order_paper)) {
    r.verdict = Verdict::PaperValidOnly;
  } else {
    r.verdict = Verdict::Invalid;
  }
  return r;
}

bool bell_detection_inequality(const MSWitness& w, BellState target) {
  if (w.dims() != std::vector<std::size_t>{2, 2})
    throw DimensionMismatch("bell_detection_inequality: two-qubit witnesses only");
  if (target != BellState::PhiPlus && target != BellState::PsiMinus)
    throw Error("bell_detection_inequality: target must be PhiPlus or PsiMinus");
  auto side = [target](const ProductObservable& p) {
    const auto& a = p.factors()[0].bloch;
    const auto& b = p.factors()[1].bloch;
    const double dot = a.nu[0] * b.nu[0] + a.nu[1] * b.nu[1] + a.nu[2] * b.nu[2];
    if (target == BellState::PhiPlus) return a.nu0 * b.nu0 + dot - 2.0 * a.nu[1] * b.nu[1];
    return a.nu0 * b.nu0 - dot;
  };
  return side(w.minuend()) < side(w.subtrahend());
}

// ----------------------------------------------------------------- search

namespace {

struct SiteLayout {
  int d;
  std::size_t components;  // d^2 - 1
  std::size_t offset;      // into the parameter vector: u, log delta, w
};

struct Candidate {
  std::vector<BlochForm> minuend;
  std::vector<BlochForm> subtrahend;
};

double tanh_scale(double x) { return std::tanh(x); }

std::optional<Candidate> decode(const std::vector<double>& p, const std::vector<SiteLayout>& sites,
                                SearchMode mode) {
  Candidate c;
  for (const auto& s : sites) {
    const double scale = std::sqrt(s.d / (2.0 * (s.d - 1)));
    const double* u = &p[s.offset];
    const double log_delta = std::clamp(p[s.offset + s.components], -12.0, 3.0);
    const double* w = &p[s.offset + s.components + 1];

    double un = 0.0, wn = 0.0;
    for (std::size_t k = 0; k < s.components; ++k) {
      un += u[k] * u[k];
      wn += w[k] * w[k];
    }
    un = std::sqrt(un);
    wn = std::sqrt(wn);

    BlochForm sub = BlochForm::scaled_identity(s.d, 1.0);
    // inside the inscribed ball |nu~| <= nu0~ sqrt(d/(2(d-1))) every operator is PSD
    const double radial = un > 0.0 ? scale * tanh_scale(un) / un : 0.0;
    for (std::size_t k = 0; k < s.components; ++k) sub.nu[k] = radial * u[k];

    const double delta = std::exp(log_delta);
    BlochForm min = sub;
    min.nu0 += delta;
    for (std::size_t k = 0; k < s.components; ++k) {
      const double step = mode == SearchMode::Paper
                              ? delta * scale * tanh_scale(w[k])
                              : (wn > 0.0 ? delta * scale * tanh_scale(wn) * w[k] / wn : 0.0);
      min.nu[k] += step;
    }
    if (!is_positive(min, 0.0)) return std::nullopt;
    if (mode == SearchMode::Paper ? !order_paper(min, sub) : !order_exact(min, sub, 1e-12))
      return std::nullopt;
    c.minuend.push_back(std::move(min));
    c.subtrahend.push_back(std::move(sub));
  }
  return c;
}

}  // namespace

SearchResult construct_search(const HermitianMatrix& target, std::span<const std::size_t> dims,
                              SearchMode mode, std::uint64_t seed, std::size_t iters) {
  if (dims.size() < 2) throw DimensionMismatch("construct_search: need at least two sites");
  if (target.dim() != total_dim(dims)) throw DimensionMismatch("construct_search: target size mismatch");
  if (!is_density_matrix(target)) throw Error("construct_search: target is not a density matrix");

  constexpr double kDetect = -1e-6;
  std::vector<SiteLayout> sites;
  std::size_t nparams = 0;
  for (auto d : dims) {
    const int di = static_cast<int>(d);
    const std::size_t k = d * d - 1;
    sites.push_back({di, k, nparams});
    nparams += 2 * k + 1;
  }

  SearchResult out;
  out.best_value = std::numeric_limits<double>::infinity();
  CounterRng rng(seed);
  std::ostringstream log;
  int restart = 0;

  auto evaluate = [&](const std::vector<double>& p) -> std::optional<std::pair<double, Candidate>> {
    ++out.evaluations;
    auto c = decode(p, sites, mode);
    if (!c) return std::nullopt;
    const auto w = MSWitness::from_bloch(c->minuend, c->subtrahend);
    return std::make_pair(expectation(assemble(w), target), std::move(*c));
  };

  while (out.evaluations < iters) {
    ++restart;
    std::vector<double> p(nparams);
    for (const auto& s : sites) {
      for (std::size_t k = 0; k < s.components; ++k) {
        p[s.offset + k] = 0.5 * rng.normal();
        p[s.offset + s.components + 1 + k] = 0.5 * rng.normal();
      }
      p[s.offset + s.components] = std::log(0.1);
    }
    auto current = evaluate(p);
    if (!current) continue;
    double step = 0.3;
    while (out.evaluations < iters && step > 1e-4) {
      std::vector<double> q = p;
      for (auto& x : q) x += step * rng.normal();
      auto next = evaluate(q);
      if (next && next->first < current->first) {
        p = std::move(q);
        current = std::move(next);
        step = std::min(2.0, step * 1.5);
      } else {
        step *= 0.97;
      }
      out.best_value = std::min(out.best_value, current->first);
      if (current->first < kDetect) {
        auto w = MSWitness::from_bloch(current->second.minuend, current->second.subtrahend);
        if (mode == SearchMode::Paper) {
          log << "restart " << restart << ": detected with value " << current->first << " after "
              << out.evaluations << " evaluations";
          out.witness = std::move(w);
          out.log = log.str();
          return out;
        }
        const auto report = audit(w);
        if (report.verdict == Verdict::StrictValid) {
          log << "restart " << restart << ": strict_valid witness with value " << current->first;
          out.witness = std::move(w);
          out.log = log.str();
          return out;
        }
        log << "restart " << restart << ": negative candidate rejected by audit ("
            << to_string(report.verdict) << "); ";
        break;
      }
    }
  }

  log << "not found after " << out.evaluations << " evaluations (" << restart
      << " restarts), best value " << out.best_value;
  if (mode == SearchMode::Strict)
    log << "; Loewner-ordered PSD factors give W_j = W~_j + D_j with D_j PSD, so the"
           " tensor products are Loewner-ordered and the assembled operator is PSD";
  out.log = log.str();
  return out;
}

// ------------------------------------------------------------------ noise

std::optional<NoiseTolerance> noise_tolerance(const HermitianMatrix& w, const StateVector& psi) {
  if (w.dim() != psi.dim()) throw DimensionMismatch("noise_tolerance: dimension mismatch");
  const double target = expectation(w, psi.amplitudes());
  if (!(target < 0.0)) return std::nullopt;
  const double mixed = real_trace(w) / static_cast<double>(psi.dim());

  NoiseTolerance r;
  r.target_value = target;
  r.epsilon = mixed <= 0.0 ? 1.0 : target / (target - mixed);

  // Independent route: bisect the sign of Tr(W rho(eps)) on explicit states.
  auto value = [&](double eps) { return expectation(w, white_noise(psi, eps)); };
  if (value(1.0) < 0.0) {
    r.epsilon_bisection = 1.0;
  } else {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (value(mid) < 0.0 ? lo : hi) = mid;
    }
    r.epsilon_bisection = 0.5 * (lo + hi);
  }
  return r;
}

std::optional<NoiseTolerance> noise_tolerance(const MSWitness& w, const StateVector& psi) {
  return noise_tolerance(assemble(w), psi);
}

double fidelity_at_tolerance(double epsilon, std::size_t dim) {
  return 1.0 - (1.0 - 1.0 / static_cast<double>(dim)) * epsilon;
}

std::optional<double> fidelity_threshold(const MSWitness& w, const StateVector& psi) {
  const auto t = noise_tolerance(w, psi);
  if (!t) return std::nullopt;
  return fidelity_at_tolerance(t->epsilon, psi.dim());
}

}  // namespace ewit
