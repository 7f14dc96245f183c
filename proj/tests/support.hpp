// Conversions between library matrices and oracle matrices, plus seeded
// random inputs for property tests.

#pragma once

#include "ewit/matcore.hpp"
#include "ewit/rng.hpp"
#include "oracles.hpp"

namespace support {

inline oracle::Dense to_dense(const ewit::Matrix& m) {
  oracle::Dense d(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d(i, j) = m(i, j);
  return d;
}

inline ewit::Matrix from_dense(const oracle::Dense& d) {
  ewit::Matrix m(d.n, d.n);
  for (std::size_t i = 0; i < d.n; ++i)
    for (std::size_t j = 0; j < d.n; ++j) m(i, j) = d(i, j);
  return m;
}

inline double max_diff(const oracle::Dense& a, const oracle::Dense& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
  return m;
}

inline ewit::Matrix random_matrix(std::size_t rows, std::size_t cols, ewit::CounterRng& rng) {
  ewit::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = {rng.normal(), rng.normal()};
  return m;
}

inline ewit::HermitianMatrix random_hermitian(std::size_t d, ewit::CounterRng& rng) {
  const ewit::Matrix a = random_matrix(d, d, rng);
  ewit::Matrix h = a + ewit::conj_transpose(a);
  h *= 0.5;
  return ewit::HermitianMatrix(h);
}

/// G G^dagger scaled to unit trace: positive semidefinite.
inline ewit::HermitianMatrix random_psd(std::size_t d, ewit::CounterRng& rng) {
  const ewit::Matrix g = random_matrix(d, d, rng);
  ewit::Matrix p = ewit::matmul(g, ewit::conj_transpose(g));
  p *= 1.0 / ewit::trace(p).real();
  return ewit::symmetrize(p);
}

}  // namespace support
