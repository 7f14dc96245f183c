#include "ewit/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

namespace ewit {

namespace {

constexpr int kMinDim = 2;
constexpr int kMaxDim = 8;
constexpr double kSaturation = 1e-12;

GellMannBasis build_basis(int d) {
  GellMannBasis b;
  b.d = d;
  const auto n = static_cast<std::size_t>(d);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      Matrix m(n, n);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      b.elements.emplace_back(m);
    }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      Matrix m(n, n);
      m(j, k) = Cplx{0.0, -1.0};
      m(k, j) = Cplx{0.0, 1.0};
      b.elements.emplace_back(m);
    }
  for (std::size_t l = 1; l < n; ++l) {
    Matrix m(n, n);
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (std::size_t j = 0; j < l; ++j) m(j, j) = scale;
    m(l, l) = -scale * static_cast<double>(l);
    b.elements.emplace_back(m);
  }
  return b;
}

void require_dim(int d) {
  if (d < kMinDim || d > kMaxDim)
    throw UnsupportedDimension("Gell-Mann basis supports 2 <= d <= 8, got " + std::to_string(d));
}

void require_same(const BlochForm& a, const BlochForm& b) {
  if (a.d != b.d || a.nu.size() != b.nu.size())
    throw DimensionMismatch("Bloch forms of different dimension");
}

double ordering_scale(int d) { return std::sqrt(d / (2.0 * (d - 1))); }

}  // namespace

const GellMannBasis& basis(int d) {
  require_dim(d);
  static std::array<std::unique_ptr<GellMannBasis>, kMaxDim + 1> cache;
  static std::array<std::once_flag, kMaxDim + 1> flags;
  std::call_once(flags[d], [d] { cache[d] = std::make_unique<GellMannBasis>(build_basis(d)); });
  return *cache[d];
}

BlochForm BlochForm::zero(int d) {
  require_dim(d);
  return BlochForm{d, 0.0, std::vector<double>(static_cast<std::size_t>(d * d - 1), 0.0)};
}

BlochForm BlochForm::scaled_identity(int d, double nu0) {
  auto b = zero(d);
  b.nu0 = nu0;
  return b;
}

HermitianMatrix to_matrix(const BlochForm& b) {
  const auto& g = basis(b.d);
  if (b.nu.size() != g.elements.size()) throw DimensionMismatch("BlochForm: nu has wrong length");
  HermitianMatrix m = b.nu0 * HermitianMatrix::identity(static_cast<std::size_t>(b.d));
  for (std::size_t k = 0; k < b.nu.size(); ++k)
    if (b.nu[k] != 0.0) m += b.nu[k] * g.elements[k];
  return m;
}

BlochForm from_matrix(const HermitianMatrix& m, int d) {
  const auto& g = basis(d);
  if (m.dim() != static_cast<std::size_t>(d)) throw DimensionMismatch("from_matrix: size mismatch");
  BlochForm b = BlochForm::zero(d);
  b.nu0 = real_trace(m) / d;
  for (std::size_t k = 0; k < g.elements.size(); ++k) b.nu[k] = expectation(m, g.elements[k]) / 2.0;
  return b;
}

BlochForm from_matrix(const HermitianMatrix& m) { return from_matrix(m, static_cast<int>(m.dim())); }

BlochForm operator-(const BlochForm& a, const BlochForm& b) {
  require_same(a, b);
  BlochForm out = a;
  out.nu0 -= b.nu0;
  for (std::size_t k = 0; k < out.nu.size(); ++k) out.nu[k] -= b.nu[k];
  return out;
}

BlochForm operator*(double s, const BlochForm& a) {
  BlochForm out = a;
  out.nu0 *= s;
  for (auto& x : out.nu) x *= s;
  return out;
}

bool is_positive(const BlochForm& b, double tol) { return is_psd(to_matrix(b), tol); }

double bloch_radius(int d) {
  if (d < kMinDim) throw UnsupportedDimension("bloch_radius: d must be >= 2");
  return std::sqrt(2.0 * (d - 1) / d);
}

double order_paper_margin(const BlochForm& minuend, const BlochForm& subtrahend) {
  require_same(minuend, subtrahend);
  double worst = 0.0;
  for (std::size_t k = 0; k < minuend.nu.size(); ++k)
    worst = std::max(worst, std::abs(minuend.nu[k] - subtrahend.nu[k]));
  return (minuend.nu0 - subtrahend.nu0) * ordering_scale(minuend.d) - worst;
}

bool order_paper(const BlochForm& minuend, const BlochForm& subtrahend) {
  require_same(minuend, subtrahend);
  if (!(minuend.nu0 > subtrahend.nu0)) return false;
  return order_paper_margin(minuend, subtrahend) >= -kSaturation;
}

bool order_norm(const BlochForm& minuend, const BlochForm& subtrahend) {
  require_same(minuend, subtrahend);
  if (!(minuend.nu0 > subtrahend.nu0)) return false;
  double sq = 0.0;
  for (std::size_t k = 0; k < minuend.nu.size(); ++k) {
    const double diff = minuend.nu[k] - subtrahend.nu[k];
    sq += diff * diff;
  }
  return std::sqrt(sq) <= (minuend.nu0 - subtrahend.nu0) * ordering_scale(minuend.d) + kSaturation;
}

bool order_exact(const BlochForm& minuend, const BlochForm& subtrahend, double tol) {
  require_same(minuend, subtrahend);
  return is_psd(to_matrix(minuend) - to_matrix(subtrahend), tol);
}

StateBloch state_bloch(const HermitianMatrix& rho, int d) {
  const auto& g = basis(d);
  if (rho.dim() != static_cast<std::size_t>(d)) throw DimensionMismatch("state_bloch: size mismatch");
  StateBloch s{d, std::vector<double>(g.elements.size())};
  for (std::size_t k = 0; k < g.elements.size(); ++k) s.tau[k] = expectation(rho, g.elements[k]);
  return s;
}

HermitianMatrix to_matrix(const StateBloch& s) {
  BlochForm b = BlochForm::scaled_identity(s.d, 1.0 / s.d);
  if (s.tau.size() != b.nu.size()) throw DimensionMismatch("StateBloch: tau has wrong length");
  for (std::size_t k = 0; k < s.tau.size(); ++k) b.nu[k] = 0.5 * s.tau[k];
  return to_matrix(b);
}

double squared_norm(const StateBloch& s) {
  double sq = 0.0;
  for (double t : s.tau) sq += t * t;
  return sq;
}

}  // namespace ewit
