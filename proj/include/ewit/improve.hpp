// improve.hpp - linear refinement to finer witnesses and the nonlinear
// functional F(rho) = Tr(W rho) - |Tr(X rho)|^2 / s built from the
// Choi-Jamiolkowski map of the witness.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ewit/witness.hpp"

namespace ewit {

class OrderingViolated : public Error {
 public:
  using Error::Error;
};

class NonPositiveNormalization : public Error {
 public:
  using Error::Error;
};

class FormMismatch : public Error {
 public:
  using Error::Error;
};

struct FinerParams {
  double zeta = 0.0;  ///< in [0, 1)
  double xi = 0.0;    ///< >= 0
};

enum class OrderingPredicate { Paper, Norm, Exact };

struct FinerResult {
  MSWitness finer;
  double epsilon = 0.0;  ///< 1 - n_f / n_c
  HermitianMatrix P;     ///< zero with p_degenerate when zeta = xi = 0
  bool p_degenerate = false;
  double n_coarse = 0.0;
  double n_fine = 0.0;
  /// max |assemble(w) - (1 - eps) assemble(finer) - eps P|
  double reconstruction_error = 0.0;
};

/// Scales the minuend by (1 - zeta) and the subtrahend by (1 + xi), realized
/// on the factors at `site` (site 0 by default). Requires trace_diff mode and
/// (1 - zeta) W_site >= (1 + xi) W~_site under the chosen predicate. Apply
/// again with another site to iterate.
FinerResult finer(const MSWitness& w, const FinerParams& p, OrderingPredicate predicate,
                  std::size_t site = 0);

/// d Tr_1(W (rho^T x I)).
Matrix choi_map_partial_trace(const MSWitness& w, const Matrix& rho_in);
/// (d / n_W) [Tr(W_1 rho^T) W_2 - Tr(W~_1 rho^T) W~_2].
Matrix choi_map_decomposed(const MSWitness& w, const Matrix& rho_in);
/// Both routes; throws FormMismatch if they differ by more than
/// 1e-10 * max(1, ||value||_F).
HermitianMatrix choi_map(const MSWitness& w, const HermitianMatrix& rho_in);

/// (I x Lambda)(|psi><phi|) by expansion of |psi><phi| in the product basis
/// {I, G_k} x {I, G_l}.
Matrix build_X(const MSWitness& w, const StateVector& psi, const StateVector& phi);
/// Closed form for psi = |Phi_{m,n}>, phi = |Phi_d^+>: (Omega_{m,n}^T x I) W.
Matrix heisenberg_weyl_X(const MSWitness& w, int m, int n);

struct NonlinearFunctional {
  MSWitness witness;
  StateVector psi;
  StateVector phi;
  double s = 1.0;  ///< largest squared Schmidt coefficient of psi
  Matrix X;
  HermitianMatrix W;  ///< assemble(witness)
};

NonlinearFunctional make_functional(const MSWitness& w, const StateVector& psi, const StateVector& phi);

/// Tr(W rho) - (1/s) |Tr(X rho)|^2 for a density matrix rho.
double nonlinear_value(const NonlinearFunctional& f, const HermitianMatrix& rho);

/// Values on Bell-diagonal states reduced to their four Bell-basis weights.
struct BellDiagonalProbe {
  std::array<double, 4> w{};   ///< Tr(W B_i)
  std::array<Cplx, 4> x{};     ///< Tr(X B_i), zero for linear probes
  double inv_s = 0.0;          ///< 0 for linear probes

  static BellDiagonalProbe linear(const HermitianMatrix& w);
  static BellDiagonalProbe nonlinear(const NonlinearFunctional& f);
  double value(const std::array<double, 4>& p) const;
};

struct GainReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double frac_w = 0.0;
  double frac_wf = 0.0;
  double frac_f = 0.0;     ///< functional built on w
  double frac_f_wf = 0.0;  ///< functional built on w_f
  std::optional<double> rel_gain_w;   ///< (frac_f - frac_w) / frac_w
  std::optional<double> rel_gain_wf;  ///< (frac_f_wf - frac_wf) / frac_wf
  /// (frac_f - frac_wf) / frac_wf, the functional on w against w_f
  std::optional<double> rel_gain_wf_single_functional;
  bool pointwise_dominance = true;  ///< F <= Tr(W rho) on every sample, for both functionals
  std::size_t finer_violations = 0;  ///< samples with Tr(W rho) < 0 <= Tr(W_f rho)
};

/// Monte Carlo over flat-simplex Bell-diagonal states. Samples are drawn in
/// blocks of 4096; block b uses CounterRng(seed, b), so results do not depend
/// on the worker count.
GainReport bell_diagonal_gain(const MSWitness& w, const MSWitness& w_f, const NonlinearFunctional& f,
                              const NonlinearFunctional& f_wf, std::size_t samples, std::uint64_t seed,
                              unsigned workers = 0);

struct ScanRow {
  std::array<double, 4> p{};
  double val_w = 0.0;
  double val_wf = 0.0;
  double val_f = 0.0;
};

/// Per-sample values in the same sampling order as bell_diagonal_gain.
std::vector<ScanRow> bell_diagonal_scan(const MSWitness& w, const MSWitness& w_f,
                                        const NonlinearFunctional& f, std::size_t samples,
                                        std::uint64_t seed);

}  // namespace ewit
