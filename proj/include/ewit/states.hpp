// states.hpp - state factories, noise models and seeded samplers.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ewit/matcore.hpp"
#include "ewit/rng.hpp"

namespace ewit {

/// Normalized pure state on a composite space.
class StateVector {
 public:
  /// Throws DimensionMismatch when the amplitude count does not match the
  /// dimension product, Error when the norm deviates from 1 by more than 1e-12.
  StateVector(std::vector<std::size_t> dims, CVector amplitudes);

  /// Normalizes first; throws Error on a zero vector.
  static StateVector normalized(std::vector<std::size_t> dims, CVector amplitudes);

  const std::vector<std::size_t>& dims() const { return dims_; }
  const CVector& amplitudes() const { return amps_; }
  std::size_t dim() const { return amps_.size(); }

  HermitianMatrix density() const { return HermitianMatrix::projector(amps_); }

 private:
  std::vector<std::size_t> dims_;
  CVector amps_;
};

/// Serialization order is fixed: PhiPlus, PhiMinus, PsiPlus, PsiMinus.
enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

StateVector bell(BellState which);
StateVector ghz(int n);
StateVector w_state(int n);
StateVector product_state(std::span<const StateVector> sites);
/// |Phi_d^+> = d^{-1/2} sum_k |k>|k>.
StateVector max_entangled(int d);

/// Omega_{m,n} = sum_k exp(2 pi i k n / d) |k><(k+m) mod d|.
struct HeisenbergWeyl {
  int d = 0;
  int m = 0;
  int n = 0;
  Matrix matrix;
};

HeisenbergWeyl heisenberg_weyl(int d, int m, int n);
/// (I x Omega_{m,n}) |Phi_d^+>.
StateVector generalized_bell(int d, int m, int n);

/// (1 - eps) |psi><psi| + eps I / D.
HermitianMatrix white_noise(const StateVector& psi, double eps);

/// Fidelity <psi| rho |psi>.
double fidelity(const StateVector& psi, const HermitianMatrix& rho);

struct BellDiagonal {
  std::array<double, 4> p{};  ///< weights on PhiPlus, PhiMinus, PsiPlus, PsiMinus
};

HermitianMatrix bell_diagonal(const BellDiagonal& w);
/// Flat Dirichlet (uniform on the 3-simplex) via normalized exponentials.
BellDiagonal sample_bell_diagonal(CounterRng& rng);

/// Haar-random pure state of dimension d (normalized complex Gaussian).
StateVector haar_pure(std::size_t d, CounterRng& rng);
/// Pure product state with Haar-random factors.
StateVector random_product(std::span<const std::size_t> dims, CounterRng& rng);
/// Random full-rank density matrix G G^dagger / Tr(G G^dagger) (Ginibre).
HermitianMatrix random_density(std::size_t d, CounterRng& rng);
/// Mixture of 1..4 Haar-random pure product states with flat Dirichlet weights.
HermitianMatrix sample_separable(std::span<const std::size_t> dims, CounterRng& rng);

/// Squared Schmidt coefficients of a bipartite state with equal site dims,
/// descending, summing to one.
std::vector<double> schmidt_squares(const StateVector& psi);

/// Unit trace within 1e-12 and PSD within tol.
bool is_density_matrix(const HermitianMatrix& rho, double tol = 1e-9);

}  // namespace ewit
