// bloch.hpp - generalized Gell-Mann basis, Bloch-form operators and the three
// local ordering predicates.

#pragma once

#include <vector>

#include "ewit/matcore.hpp"

namespace ewit {

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// The d^2 - 1 traceless generators with Tr(G_k G_k') = 2 delta_kk'.
/// Ordering: symmetric pair operators (j<k, lexicographic), then the
/// antisymmetric ones in the same pair order, then the diagonal operators.
/// For d = 2 this is (sigma_x, sigma_y, sigma_z).
struct GellMannBasis {
  int d = 0;
  std::vector<HermitianMatrix> elements;
};

/// Precomputed, shared, read-only. 2 <= d <= 8.
const GellMannBasis& basis(int d);

/// nu0 * I + sum_k nu[k] * G_k.
struct BlochForm {
  int d = 2;
  double nu0 = 0.0;
  std::vector<double> nu;

  static BlochForm zero(int d);
  static BlochForm scaled_identity(int d, double nu0);
};

HermitianMatrix to_matrix(const BlochForm& b);
/// nu0 = Tr(m)/d, nu_k = Tr(m G_k)/2.
BlochForm from_matrix(const HermitianMatrix& m, int d);
BlochForm from_matrix(const HermitianMatrix& m);

BlochForm operator-(const BlochForm& a, const BlochForm& b);
BlochForm operator*(double s, const BlochForm& a);

bool is_positive(const BlochForm& b, double tol = 1e-9);

/// sqrt(2(d-1)/d), the largest Euclidean norm of a pure-state Bloch vector.
double bloch_radius(int d);

/// nu0 > nu0~ and |nu_k - nu~_k| <= (nu0 - nu0~) sqrt(d / (2(d-1))) for every
/// k, saturation within 1e-12 accepted.
bool order_paper(const BlochForm& minuend, const BlochForm& subtrahend);

/// l2 variant: ||nu - nu~||_2 <= (nu0 - nu0~) sqrt(d / (2(d-1))). Sufficient
/// for the Loewner order at every d, and equivalent to it at d = 2.
bool order_norm(const BlochForm& minuend, const BlochForm& subtrahend);

/// Loewner order: to_matrix(minuend) - to_matrix(subtrahend) is PSD within tol.
bool order_exact(const BlochForm& minuend, const BlochForm& subtrahend, double tol = 1e-9);

/// Slack of the per-component bound: (nu0 - nu0~) c - max_k |nu_k - nu~_k|.
double order_paper_margin(const BlochForm& minuend, const BlochForm& subtrahend);

/// State parameterization rho = I/d + (1/2) tau . G.
struct StateBloch {
  int d = 2;
  std::vector<double> tau;
};

StateBloch state_bloch(const HermitianMatrix& rho, int d);
HermitianMatrix to_matrix(const StateBloch& s);
double squared_norm(const StateBloch& s);

}  // namespace ewit
