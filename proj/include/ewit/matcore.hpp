// matcore.hpp - dense complex matrices, Kronecker/partial-trace algebra and a
// cyclic Jacobi eigensolver for small Hermitian operators (dim <= 64).
//
// Index convention: site 0 is the leftmost Kronecker factor, i.e. the slowest
// varying digit of a composite row/column index.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ewit {

using Cplx = std::complex<double>;
using CVector = std::vector<Cplx>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

/// Dense row-major complex matrix. Square or rectangular.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t n) { return Matrix(n, n); }
  /// |a><b|
  static Matrix outer(std::span<const Cplx> a, std::span<const Cplx> b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Cplx> data() const { return data_; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(Cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Cplx> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Cplx s, Matrix a);
Matrix matmul(const Matrix& a, const Matrix& b);
CVector matvec(const Matrix& a, std::span<const Cplx> v);
Matrix conj_transpose(const Matrix& a);
Matrix transpose(const Matrix& a);
Cplx trace(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Tr(a b) without forming the product.
Cplx trace_product(const Matrix& a, const Matrix& b);

/// Square matrix with Hermiticity enforced at construction. Entries are
/// stored exactly symmetrized, so (i,j) == conj((j,i)) bitwise.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Throws NotHermitian if |m_ij - conj(m_ji)| > tol anywhere, NonFinite on
  /// NaN/Inf entries, DimensionMismatch if m is not square or empty.
  explicit HermitianMatrix(const Matrix& m, double tol = 1e-12);

  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix zero(std::size_t n);
  static HermitianMatrix diagonal(std::span<const double> d);
  /// |v><v|
  static HermitianMatrix projector(std::span<const Cplx> v);

  std::size_t dim() const { return m_.rows(); }
  const Cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }
  operator const Matrix&() const { return m_; }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

 private:
  struct Trusted {};
  HermitianMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  friend HermitianMatrix kron(const HermitianMatrix&, const HermitianMatrix&);
  friend HermitianMatrix symmetrize(Matrix m);

  Matrix m_;
};

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, HermitianMatrix a);
HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix kron_all(std::span<const HermitianMatrix> factors);

/// Unchecked (m + m^dagger)/2. For results that are Hermitian by algebra but
/// carry rounding noise.
HermitianMatrix symmetrize(Matrix m);

/// Real part of Tr(a); throws NotHermitian if |Im| > 1e-12 * max(1, |Re|).
double real_trace(const HermitianMatrix& a);

/// Real part of Tr(a b) for Hermitian a, b.
double expectation(const HermitianMatrix& a, const HermitianMatrix& b);

/// <v|a|v>, real for Hermitian a.
double expectation(const HermitianMatrix& a, std::span<const Cplx> v);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  ///< ascending
  Matrix eigenvectors;              ///< column k pairs with eigenvalues[k]
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Converged when the off-diagonal Frobenius mass is
/// at most 1e-13 * ||a||_F; throws NonConvergence after 100 sweeps.
EigenDecomposition eigh(const HermitianMatrix& a);

double min_eigenvalue(const HermitianMatrix& a);
bool is_psd(const HermitianMatrix& a, double tol = 1e-9);

/// Product of the site dimensions; throws DimensionMismatch on empty input or
/// any zero dimension.
std::size_t total_dim(std::span<const std::size_t> dims);

/// Trace out every site not listed in `keep`. Kept sites retain their
/// original relative order.
Matrix partial_trace(const Matrix& a, std::span<const std::size_t> dims,
                     std::span<const std::size_t> keep);
HermitianMatrix partial_trace(const HermitianMatrix& a, std::span<const std::size_t> dims,
                              std::span<const std::size_t> keep);

/// Transpose on the indices of site 0 of a two-site operator.
Matrix partial_transpose_site1(const Matrix& a, std::span<const std::size_t> dims);
HermitianMatrix partial_transpose_site1(const HermitianMatrix& a,
                                        std::span<const std::size_t> dims);

/// Reorders tensor factors: site s of the input becomes site perm[s] of the
/// output. For a product operator A_0 x A_1 x ... the output has A_s placed
/// at position perm[s].
Matrix permute_sites(const Matrix& a, std::span<const std::size_t> dims,
                     std::span<const std::size_t> perm);
HermitianMatrix permute_sites(const HermitianMatrix& a, std::span<const std::size_t> dims,
                              std::span<const std::size_t> perm);

/// Same site permutation applied to a state vector.
CVector permute_sites(std::span<const Cplx> v, std::span<const std::size_t> dims,
                      std::span<const std::size_t> perm);

CVector kron(std::span<const Cplx> a, std::span<const Cplx> b);

namespace pauli {
HermitianMatrix I();
HermitianMatrix X();
HermitianMatrix Y();
HermitianMatrix Z();
}  // namespace pauli

}  // namespace ewit
