// witness.hpp - minuend-subtrahend witnesses W = (x_j W_j - x_j W~_j) / n_W,
// their evaluation, validity audit and noise robustness.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ewit/bloch.hpp"
#include "ewit/matcore.hpp"
#include "ewit/states.hpp"

namespace ewit {

/// One local operator of a product observable, kept both as Bloch data and
/// as its reconstructed matrix.
struct LocalFactor {
  BlochForm bloch;
  HermitianMatrix matrix;

  static LocalFactor from_bloch(BlochForm b);
  static LocalFactor from_matrix(const HermitianMatrix& m);
  std::size_t dim() const { return matrix.dim(); }
};

/// Ordered tensor product of at least two local factors, total dim <= 64.
class ProductObservable {
 public:
  explicit ProductObservable(std::vector<LocalFactor> factors);

  const std::vector<LocalFactor>& factors() const { return factors_; }
  std::size_t sites() const { return factors_.size(); }
  std::vector<std::size_t> dims() const;
  HermitianMatrix assemble() const;
  /// Product of the factor traces.
  double trace() const;

 private:
  std::vector<LocalFactor> factors_;
};

enum class NormMode { Raw, TraceDiff };

class MSWitness {
 public:
  /// Throws DimensionMismatch unless both products share the same site dims.
  MSWitness(ProductObservable minuend, ProductObservable subtrahend, NormMode mode = NormMode::Raw);

  /// Convenience: per-site Bloch forms.
  static MSWitness from_bloch(const std::vector<BlochForm>& minuend,
                              const std::vector<BlochForm>& subtrahend,
                              NormMode mode = NormMode::Raw);

  const ProductObservable& minuend() const { return minuend_; }
  const ProductObservable& subtrahend() const { return subtrahend_; }
  NormMode norm_mode() const { return mode_; }
  std::size_t sites() const { return minuend_.sites(); }
  std::vector<std::size_t> dims() const { return minuend_.dims(); }
  std::size_t dim() const;

  /// 1 in raw mode; Tr(x W_j) - Tr(x W~_j) in trace_diff mode.
  double normalization() const;

  MSWitness with_norm_mode(NormMode mode) const;

 private:
  ProductObservable minuend_;
  ProductObservable subtrahend_;
  NormMode mode_;
};

HermitianMatrix assemble(const MSWitness& w);

/// Tr(W rho). Requires rho to be a density matrix of matching dimension.
double expectation(const MSWitness& w, const HermitianMatrix& rho);
double expectation(const MSWitness& w, const StateVector& psi);

/// Overlaps of rho with the normalized minuend and subtrahend products.
std::pair<double, double> coincidence_overlaps(const MSWitness& w, const HermitianMatrix& rho);

struct FloorOptions {
  int restarts = 32;
  std::uint64_t seed = 7;
  unsigned workers = 0;  ///< 0 = hardware concurrency
};

/// Lowest Tr(W rho_1 x ... x rho_N) over pure product states found by
/// alternating single-site eigen-minimization with seeded multi-starts. Each
/// restart r uses seed + r, so the result does not depend on the worker count.
/// For two qubits a 10^4-point angular grid is also evaluated.
double product_state_floor(const HermitianMatrix& op, std::span<const std::size_t> dims,
                           const FloorOptions& opts = {});
double product_state_floor(const MSWitness& w, const FloorOptions& opts = {});

enum class Verdict { StrictValid, PaperValidOnly, Invalid };
const char* to_string(Verdict v);

struct ValidityReport {
  std::vector<bool> minuend_positive;
  std::vector<bool> subtrahend_positive;
  std::vector<bool> order_paper;
  std::vector<bool> order_norm;
  std::vector<bool> order_exact;
  std::vector<double> local_gap;  ///< min eigenvalue of W_j - W~_j per site
  bool globally_psd = false;
  double min_eigenvalue = 0.0;
  double product_floor = 0.0;
  Verdict verdict = Verdict::Invalid;

  bool local_positivity() const;
  /// A globally PSD operator can never take a negative value.
  bool detection_impossible() const { return globally_psd; }
};

ValidityReport audit(const MSWitness& w, const FloorOptions& opts = {});

/// Bloch-data detection condition for two-qubit witnesses. PhiPlus:
/// nu10 nu20 + nu1.nu2 - 2 nu1y nu2y below its subtrahend counterpart;
/// PsiMinus: nu10 nu20 - nu1.nu2 below its counterpart.
bool bell_detection_inequality(const MSWitness& w, BellState target);

enum class SearchMode { Paper, Strict };

struct SearchResult {
  std::optional<MSWitness> witness;
  double best_value = 0.0;
  std::size_t evaluations = 0;
  std::string log;
};

/// Randomized hill-climb over per-site (nu0, nu, nu0~, nu~) with local
/// positivity and the mode's ordering predicate. Paper mode orders with
/// order_paper; strict mode with order_exact and additionally requires a
/// StrictValid audit. `iters` bounds the number of candidate evaluations.
SearchResult construct_search(const HermitianMatrix& target, std::span<const std::size_t> dims,
                              SearchMode mode, std::uint64_t seed, std::size_t iters);

struct NoiseTolerance {
  double target_value = 0.0;   ///< Tr(W |psi><psi|)
  double epsilon = 0.0;        ///< closed form
  double epsilon_bisection = 0.0;
};

/// Largest white-noise weight at which Tr(W rho(eps)) stays negative.
/// nullopt when psi is not detected at eps = 0.
std::optional<NoiseTolerance> noise_tolerance(const HermitianMatrix& w, const StateVector& psi);
std::optional<NoiseTolerance> noise_tolerance(const MSWitness& w, const StateVector& psi);

/// Fidelity with psi of the noisy state at the tolerance: 1 - (1 - 1/D) eps.
std::optional<double> fidelity_threshold(const MSWitness& w, const StateVector& psi);
double fidelity_at_tolerance(double epsilon, std::size_t dim);

}  // namespace ewit
