#include "ewit/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace ewit {

namespace {

double norm2(const CVector& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

StateVector::StateVector(std::vector<std::size_t> dims, CVector amplitudes)
    : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  if (total_dim(dims_) != amps_.size())
    throw DimensionMismatch("StateVector: amplitude count does not match dims");
  if (std::abs(norm2(amps_) - 1.0) > 1e-12) throw Error("StateVector: amplitudes not normalized");
}

StateVector StateVector::normalized(std::vector<std::size_t> dims, CVector amplitudes) {
  const double n = norm2(amplitudes);
  if (n == 0.0) throw Error("StateVector: zero vector");
  for (auto& x : amplitudes) x /= n;
  return StateVector(std::move(dims), std::move(amplitudes));
}

StateVector bell(BellState which) {
  CVector a(4);
  switch (which) {
    case BellState::PhiPlus: a[0] = kInvSqrt2; a[3] = kInvSqrt2; break;
    case BellState::PhiMinus: a[0] = kInvSqrt2; a[3] = -kInvSqrt2; break;
    case BellState::PsiPlus: a[1] = kInvSqrt2; a[2] = kInvSqrt2; break;
    case BellState::PsiMinus: a[1] = kInvSqrt2; a[2] = -kInvSqrt2; break;
  }
  return StateVector::normalized({2, 2}, std::move(a));
}

StateVector ghz(int n) {
  if (n < 2) throw Error("ghz: need at least two qubits");
  std::vector<std::size_t> dims(static_cast<std::size_t>(n), 2);
  CVector a(std::size_t{1} << n);
  a.front() = kInvSqrt2;
  a.back() = kInvSqrt2;
  return StateVector::normalized(std::move(dims), std::move(a));
}

StateVector w_state(int n) {
  if (n < 2) throw Error("w_state: need at least two qubits");
  std::vector<std::size_t> dims(static_cast<std::size_t>(n), 2);
  CVector a(std::size_t{1} << n);
  for (int k = 0; k < n; ++k) a[std::size_t{1} << k] = 1.0;
  return StateVector::normalized(std::move(dims), std::move(a));
}

StateVector product_state(std::span<const StateVector> sites) {
  if (sites.empty()) throw Error("product_state: no sites");
  std::vector<std::size_t> dims;
  CVector amps{1.0};
  for (const auto& s : sites) {
    dims.insert(dims.end(), s.dims().begin(), s.dims().end());
    amps = kron(amps, s.amplitudes());
  }
  return StateVector::normalized(std::move(dims), std::move(amps));
}

StateVector max_entangled(int d) {
  if (d < 2) throw Error("max_entangled: d must be >= 2");
  const auto n = static_cast<std::size_t>(d);
  CVector a(n * n);
  for (std::size_t k = 0; k < n; ++k) a[k * n + k] = 1.0;
  return StateVector::normalized({n, n}, std::move(a));
}

HeisenbergWeyl heisenberg_weyl(int d, int m, int n) {
  if (d < 2 || m < 0 || m >= d || n < 0 || n >= d)
    throw Error("heisenberg_weyl: need d >= 2 and 0 <= m, n < d");
  const auto dd = static_cast<std::size_t>(d);
  Matrix om(dd, dd);
  for (int k = 0; k < d; ++k) {
    const double angle = 2.0 * std::numbers::pi * k * n / d;
    om(static_cast<std::size_t>(k), static_cast<std::size_t>((k + m) % d)) = std::polar(1.0, angle);
  }
  return HeisenbergWeyl{d, m, n, std::move(om)};
}

StateVector generalized_bell(int d, int m, int n) {
  const auto hw = heisenberg_weyl(d, m, n);
  const auto phi = max_entangled(d);
  const auto dd = static_cast<std::size_t>(d);
  const Matrix op = kron(Matrix::identity(dd), hw.matrix);
  return StateVector::normalized({dd, dd}, matvec(op, phi.amplitudes()));
}

HermitianMatrix white_noise(const StateVector& psi, double eps) {
  if (eps < 0.0 || eps > 1.0) throw Error("white_noise: eps outside [0, 1]");
  const double D = static_cast<double>(psi.dim());
  return (1.0 - eps) * psi.density() + (eps / D) * HermitianMatrix::identity(psi.dim());
}

double fidelity(const StateVector& psi, const HermitianMatrix& rho) {
  return expectation(rho, psi.amplitudes());
}

HermitianMatrix bell_diagonal(const BellDiagonal& w) {
  double sum = 0.0;
  for (double p : w.p) {
    if (p < -1e-12) throw Error("bell_diagonal: negative weight");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error("bell_diagonal: weights do not sum to one");
  HermitianMatrix rho = HermitianMatrix::zero(4);
  constexpr std::array kOrder{BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
                              BellState::PsiMinus};
  for (std::size_t i = 0; i < 4; ++i) rho += w.p[i] * bell(kOrder[i]).density();
  return rho;
}

BellDiagonal sample_bell_diagonal(CounterRng& rng) {
  BellDiagonal w;
  double sum = 0.0;
  for (auto& p : w.p) {
    p = rng.exponential();
    sum += p;
  }
  for (auto& p : w.p) p /= sum;
  return w;
}

StateVector haar_pure(std::size_t d, CounterRng& rng) {
  CVector a(d);
  for (auto& x : a) x = Cplx{rng.normal(), rng.normal()};
  return StateVector::normalized({d}, std::move(a));
}

StateVector random_product(std::span<const std::size_t> dims, CounterRng& rng) {
  std::vector<StateVector> sites;
  for (auto d : dims) sites.push_back(haar_pure(d, rng));
  return product_state(sites);
}

HermitianMatrix random_density(std::size_t d, CounterRng& rng) {
  Matrix g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = Cplx{rng.normal(), rng.normal()};
  HermitianMatrix rho = symmetrize(matmul(g, conj_transpose(g)));
  return (1.0 / real_trace(rho)) * rho;
}

HermitianMatrix sample_separable(std::span<const std::size_t> dims, CounterRng& rng) {
  const std::size_t terms = 1 + static_cast<std::size_t>(rng.uniform() * 4.0);
  std::vector<double> w(terms);
  double sum = 0.0;
  for (auto& x : w) {
    x = rng.exponential();
    sum += x;
  }
  HermitianMatrix rho = HermitianMatrix::zero(total_dim(dims));
  for (std::size_t t = 0; t < terms; ++t) rho += (w[t] / sum) * random_product(dims, rng).density();
  return rho;
}

std::vector<double> schmidt_squares(const StateVector& psi) {
  const auto& dims = psi.dims();
  if (dims.size() != 2 || dims[0] != dims[1])
    throw DimensionMismatch("schmidt_squares: need a bipartite state with equal site dims");
  const std::size_t d = dims[0];
  Matrix amp(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) amp(i, j) = psi.amplitudes()[i * d + j];
  // squared singular values = eigenvalues of the Gram matrix A A^dagger
  const auto ed = eigh(symmetrize(matmul(amp, conj_transpose(amp))));
  std::vector<double> out(ed.eigenvalues.rbegin(), ed.eigenvalues.rend());
  for (auto& x : out) x = std::max(0.0, x);
  return out;
}

bool is_density_matrix(const HermitianMatrix& rho, double tol) {
  return std::abs(real_trace(rho) - 1.0) <= 1e-12 && is_psd(rho, tol);
}

}  // namespace ewit
