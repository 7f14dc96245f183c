#include "ewit/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ewit {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": shape mismatch");
  }
}

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

std::vector<std::size_t> digits_of(std::size_t index, std::span<const std::size_t> dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Cplx{0.0, 0.0}) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::outer(std::span<const Cplx> a, std::span<const Cplx> b) {
  Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(Cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Cplx s, Matrix a) { return a *= s; }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Cplx aik = a(i, k);
      if (aik == Cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CVector matvec(const Matrix& a, std::span<const Cplx> v) {
  if (a.cols() != v.size()) throw DimensionMismatch("matvec: size mismatch");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Cplx s{};
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Matrix conj_transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Cplx trace(const Matrix& a) {
  if (!a.square()) throw DimensionMismatch("trace: matrix not square");
  Cplx s{};
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

Cplx trace_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw DimensionMismatch("trace_product: shapes incompatible");
  Cplx s{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  return s;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (const auto& x : a.data()) s += std::norm(x);
  return std::sqrt(s);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

CVector kron(std::span<const Cplx> a, std::span<const Cplx> b) {
  CVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i * b.size() + k] = a[i] * b[k];
  return out;
}

// ------------------------------------------------------- HermitianMatrix

HermitianMatrix::HermitianMatrix(const Matrix& m, double tol) {
  if (!m.square() || m.rows() == 0) throw DimensionMismatch("HermitianMatrix: need a non-empty square matrix");
  const std::size_t n = m.rows();
  for (const auto& x : m.data())
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw NonFinite("HermitianMatrix: non-finite entry");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol)
        throw NotHermitian("HermitianMatrix: entry (" + std::to_string(i) + "," +
                           std::to_string(j) + ") breaks Hermitian symmetry");
  *this = symmetrize(m);
}

HermitianMatrix symmetrize(Matrix m) {
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = Cplx{m(i, i).real(), 0.0};
    for (std::size_t j = i + 1; j < n; ++j) {
      const Cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  return HermitianMatrix(std::move(m), HermitianMatrix::Trusted{});
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) { return symmetrize(Matrix::identity(n)); }
HermitianMatrix HermitianMatrix::zero(std::size_t n) { return symmetrize(Matrix::zero(n)); }

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::projector(std::span<const Cplx> v) {
  return symmetrize(Matrix::outer(v, v));
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  // Kronecker products of Hermitian matrices are Hermitian entrywise exactly
  // (conj distributes over the scalar product), no symmetrization needed.
  return HermitianMatrix(kron(a.matrix(), b.matrix()), HermitianMatrix::Trusted{});
}

HermitianMatrix kron_all(std::span<const HermitianMatrix> factors) {
  if (factors.empty()) throw DimensionMismatch("kron_all: no factors");
  HermitianMatrix out = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

double real_trace(const HermitianMatrix& a) {
  const Cplx t = trace(a.matrix());
  if (std::abs(t.imag()) > 1e-12 * std::max(1.0, std::abs(t.real())))
    throw NotHermitian("real_trace: imaginary residue");
  return t.real();
}

double expectation(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("expectation: dimension mismatch");
  return trace_product(a.matrix(), b.matrix()).real();
}

double expectation(const HermitianMatrix& a, std::span<const Cplx> v) {
  if (a.dim() != v.size()) throw DimensionMismatch("expectation: vector length mismatch");
  Cplx s{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    Cplx row{};
    for (std::size_t j = 0; j < v.size(); ++j) row += a(i, j) * v[j];
    s += std::conj(v[i]) * row;
  }
  return s.real();
}

// ------------------------------------------------------------- Jacobi

EigenDecomposition eigh(const HermitianMatrix& input) {
  constexpr double kRelTol = 1e-13;
  constexpr int kMaxSweeps = 100;

  const std::size_t n = input.dim();
  Matrix a = input.matrix();
  Matrix v = Matrix::identity(n);

  const double norm = frobenius_norm(a);
  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_mass() > kRelTol * norm) {
    if (sweep == kMaxSweeps)
      throw NonConvergence("eigh: off-diagonal mass above tolerance after 100 sweeps");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Cplx g = a(p, q);
        const double mag = std::abs(g);
        if (mag == 0.0) continue;
        // Phase-rotate column q so the pivot is real, then apply a real
        // Jacobi rotation: U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
        const Cplx phase = g / mag;
        const Cplx phase_c = std::conj(phase);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const Cplx akp = a(k, p);
          const Cplx akq = a(k, q);
          a(k, p) = c * akp - s * phase_c * akq;
          a(k, q) = s * akp + c * phase_c * akq;
          const Cplx vkp = v(k, p);
          const Cplx vkq = v(k, q);
          v(k, p) = c * vkp - s * phase_c * vkq;
          v(k, q) = s * vkp + c * phase_c * vkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Cplx apk = a(p, k);
          const Cplx aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

double min_eigenvalue(const HermitianMatrix& a) { return eigh(a).eigenvalues.front(); }

bool is_psd(const HermitianMatrix& a, double tol) {
  if (tol < 0.0) throw std::invalid_argument("is_psd: negative tolerance");
  return min_eigenvalue(a) >= -tol;
}

// -------------------------------------------------- multi-site algebra

std::size_t total_dim(std::span<const std::size_t> dims) {
  if (dims.empty()) throw DimensionMismatch("no site dimensions given");
  std::size_t d = 1;
  for (auto x : dims) {
    if (x == 0) throw DimensionMismatch("zero site dimension");
    d *= x;
  }
  return d;
}

Matrix partial_trace(const Matrix& a, std::span<const std::size_t> dims,
                     std::span<const std::size_t> keep) {
  const std::size_t full = total_dim(dims);
  if (!a.square() || a.rows() != full)
    throw DimensionMismatch("partial_trace: matrix size does not match site dimensions");
  if (keep.empty()) throw DimensionMismatch("partial_trace: keep set is empty");

  std::vector<bool> kept(dims.size(), false);
  for (auto s : keep) {
    if (s >= dims.size() || kept[s]) throw DimensionMismatch("partial_trace: bad keep index");
    kept[s] = true;
  }
  std::vector<std::size_t> kdims;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (kept[s]) kdims.push_back(dims[s]);
  const std::size_t kd = std::accumulate(kdims.begin(), kdims.end(), std::size_t{1},
                                         std::multiplies<>());

  // split every full index into (kept index, traced index)
  std::vector<std::size_t> kidx(full), tidx(full);
  for (std::size_t r = 0; r < full; ++r) {
    const auto dg = digits_of(r, dims);
    std::size_t ki = 0, ti = 0;
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (kept[s]) ki = ki * dims[s] + dg[s];
      else ti = ti * dims[s] + dg[s];
    }
    kidx[r] = ki;
    tidx[r] = ti;
  }

  Matrix out(kd, kd);
  for (std::size_t r = 0; r < full; ++r)
    for (std::size_t c = 0; c < full; ++c)
      if (tidx[r] == tidx[c]) out(kidx[r], kidx[c]) += a(r, c);
  return out;
}

HermitianMatrix partial_trace(const HermitianMatrix& a, std::span<const std::size_t> dims,
                              std::span<const std::size_t> keep) {
  return symmetrize(partial_trace(a.matrix(), dims, keep));
}

Matrix partial_transpose_site1(const Matrix& a, std::span<const std::size_t> dims) {
  if (dims.size() != 2) throw DimensionMismatch("partial_transpose_site1: need two sites");
  const std::size_t d1 = dims[0], d2 = dims[1];
  if (!a.square() || a.rows() != d1 * d2)
    throw DimensionMismatch("partial_transpose_site1: matrix size mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t k = 0; k < d2; ++k)
      for (std::size_t j = 0; j < d1; ++j)
        for (std::size_t l = 0; l < d2; ++l) out(j * d2 + k, i * d2 + l) = a(i * d2 + k, j * d2 + l);
  return out;
}

HermitianMatrix partial_transpose_site1(const HermitianMatrix& a,
                                        std::span<const std::size_t> dims) {
  return symmetrize(partial_transpose_site1(a.matrix(), dims));
}

namespace {

std::vector<std::size_t> permutation_map(std::span<const std::size_t> dims,
                                         std::span<const std::size_t> perm) {
  const std::size_t n = dims.size();
  if (perm.size() != n) throw DimensionMismatch("permute_sites: permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) throw DimensionMismatch("permute_sites: not a permutation");
    seen[p] = true;
  }
  std::vector<std::size_t> out_dims(n);
  for (std::size_t s = 0; s < n; ++s) out_dims[perm[s]] = dims[s];
  const auto out_strides = strides_of(out_dims);
  const std::size_t full = total_dim(dims);
  std::vector<std::size_t> map(full);
  for (std::size_t r = 0; r < full; ++r) {
    const auto dg = digits_of(r, dims);
    std::size_t o = 0;
    for (std::size_t s = 0; s < n; ++s) o += dg[s] * out_strides[perm[s]];
    map[r] = o;
  }
  return map;
}

}  // namespace

Matrix permute_sites(const Matrix& a, std::span<const std::size_t> dims,
                     std::span<const std::size_t> perm) {
  const auto map = permutation_map(dims, perm);
  if (!a.square() || a.rows() != map.size())
    throw DimensionMismatch("permute_sites: matrix size mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < map.size(); ++r)
    for (std::size_t c = 0; c < map.size(); ++c) out(map[r], map[c]) = a(r, c);
  return out;
}

HermitianMatrix permute_sites(const HermitianMatrix& a, std::span<const std::size_t> dims,
                              std::span<const std::size_t> perm) {
  return symmetrize(permute_sites(a.matrix(), dims, perm));
}

CVector permute_sites(std::span<const Cplx> v, std::span<const std::size_t> dims,
                      std::span<const std::size_t> perm) {
  const auto map = permutation_map(dims, perm);
  if (v.size() != map.size()) throw DimensionMismatch("permute_sites: vector length mismatch");
  CVector out(v.size());
  for (std::size_t r = 0; r < map.size(); ++r) out[map[r]] = v[r];
  return out;
}

namespace pauli {

HermitianMatrix I() { return HermitianMatrix::identity(2); }

HermitianMatrix X() {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return HermitianMatrix(m);
}

HermitianMatrix Y() {
  Matrix m(2, 2);
  m(0, 1) = Cplx{0.0, -1.0};
  m(1, 0) = Cplx{0.0, 1.0};
  return HermitianMatrix(m);
}

HermitianMatrix Z() {
  Matrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return HermitianMatrix(m);
}

}  // namespace pauli

}  // namespace ewit
