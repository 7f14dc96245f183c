#include <doctest.h>

#include <cmath>
#include <limits>

#include "ewit/matcore.hpp"
#include "support.hpp"

using namespace ewit;

TEST_CASE("kron matches the naive product") {
  CounterRng rng(1, 0);
  for (auto [da, db] : {std::pair<std::size_t, std::size_t>{2, 3}, {3, 2}, {2, 4}}) {
    const Matrix a = support::random_matrix(da, da, rng);
    const Matrix b = support::random_matrix(db, db, rng);
    CHECK(support::max_diff(support::to_dense(kron(a, b)),
                            oracle::kron(support::to_dense(a), support::to_dense(b))) < 1e-14);
  }
}

TEST_CASE("kron of rectangular operands keeps the shape") {
  const Matrix a(2, 1), b(1, 3);
  const Matrix k = kron(a, b);
  CHECK(k.rows() == 2);
  CHECK(k.cols() == 3);
}

TEST_CASE("matmul rejects mismatched shapes") {
  CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), DimensionMismatch);
  CHECK_THROWS_AS(Matrix(2, 2) += Matrix(3, 3), DimensionMismatch);
}

TEST_CASE("HermitianMatrix validates its input") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianMatrix{m}, NotHermitian);
  m(1, 0) = 1.0;
  CHECK_NOTHROW(HermitianMatrix{m});
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(HermitianMatrix{m}, NonFinite);
  CHECK_THROWS_AS(HermitianMatrix{Matrix(2, 3)}, DimensionMismatch);
}

TEST_CASE("2x2 eigenvalues match the closed form") {
  CounterRng rng(2, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const HermitianMatrix h = support::random_hermitian(2, rng);
    const auto ref = oracle::eig2(h(0, 0).real(), h(1, 1).real(), h(0, 1));
    const auto e = eigh(h);
    CHECK(e.eigenvalues[0] == doctest::Approx(ref[0]).epsilon(1e-12));
    CHECK(e.eigenvalues[1] == doctest::Approx(ref[1]).epsilon(1e-12));
  }
}

TEST_CASE("3x3 eigenvalues match Cardano") {
  CounterRng rng(3, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const HermitianMatrix h = support::random_hermitian(3, rng);
    const auto ref = oracle::eig3(support::to_dense(h));
    const auto e = eigh(h);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(e.eigenvalues[k] - ref[k]) < 1e-10);
  }
}

TEST_CASE("eigendecomposition reconstructs random Hermitian matrices") {
  CounterRng rng(4, 0);
  double worst = 0.0, worst_orth = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 7);
    const HermitianMatrix h = support::random_hermitian(d, rng);
    const auto e = eigh(h);
    Matrix lam(d, d);
    for (std::size_t k = 0; k < d; ++k) lam(k, k) = e.eigenvalues[k];
    const Matrix rec = matmul(matmul(e.eigenvectors, lam), conj_transpose(e.eigenvectors));
    worst = std::max(worst, frobenius_norm(rec - h.matrix()) / frobenius_norm(h.matrix()));
    worst_orth = std::max(worst_orth, max_abs_diff(matmul(conj_transpose(e.eigenvectors), e.eigenvectors),
                                                   Matrix::identity(d)));
    for (std::size_t k = 1; k < d; ++k) CHECK(e.eigenvalues[k - 1] <= e.eigenvalues[k]);
  }
  CHECK(worst <= 1e-10);
  CHECK(worst_orth <= 1e-10);
}

TEST_CASE("degenerate and diagonal spectra") {
  const std::vector<double> diag{3.0, -1.0, 3.0, 0.5};
  const auto e = eigh(HermitianMatrix::diagonal(diag));
  CHECK(e.eigenvalues == std::vector<double>{-1.0, 0.5, 3.0, 3.0});
  CHECK(eigh(HermitianMatrix::identity(8)).eigenvalues == std::vector<double>(8, 1.0));
  CHECK(min_eigenvalue(HermitianMatrix::zero(3)) == 0.0);
}

TEST_CASE("is_psd uses the tolerance") {
  const std::vector<double> d{1.0, -1e-10};
  CHECK(is_psd(HermitianMatrix::diagonal(d)));
  CHECK_FALSE(is_psd(HermitianMatrix::diagonal(d), 1e-12));
}

TEST_CASE("partial trace matches brute force") {
  CounterRng rng(5, 0);
  const std::vector<std::size_t> dims{2, 3};
  const Matrix a = support::random_matrix(6, 6, rng);
  const auto da = support::to_dense(a);
  const std::vector<std::size_t> keep0{0}, keep1{1};
  CHECK(support::max_diff(support::to_dense(partial_trace(a, dims, keep0)), oracle::trace_out_second(da, 2, 3)) <
        1e-13);
  CHECK(support::max_diff(support::to_dense(partial_trace(a, dims, keep1)), oracle::trace_out_first(da, 2, 3)) <
        1e-13);
}

TEST_CASE("partial trace over three sites") {
  // Tr_1 of A x B x C equals Tr(B) A x C
  CounterRng rng(6, 0);
  const Matrix a = support::random_matrix(2, 2, rng);
  const Matrix b = support::random_matrix(3, 3, rng);
  const Matrix c = support::random_matrix(2, 2, rng);
  const std::vector<std::size_t> dims{2, 3, 2}, keep{0, 2};
  Matrix expected = kron(a, c);
  expected *= trace(b);
  CHECK(max_abs_diff(partial_trace(kron(kron(a, b), c), dims, keep), expected) < 1e-12);
  // keep order is irrelevant; out-of-range and repeated sites are not
  const std::vector<std::size_t> swapped{2, 0}, out_of_range{3}, repeated{0, 0};
  CHECK(max_abs_diff(partial_trace(kron(kron(a, b), c), dims, swapped), expected) < 1e-12);
  CHECK_THROWS_AS(partial_trace(kron(kron(a, b), c), dims, out_of_range), DimensionMismatch);
  CHECK_THROWS_AS(partial_trace(kron(kron(a, b), c), dims, repeated), DimensionMismatch);
}

TEST_CASE("partial transpose matches brute force") {
  CounterRng rng(7, 0);
  const Matrix a = support::random_matrix(6, 6, rng);
  const std::vector<std::size_t> dims{3, 2};
  CHECK(support::max_diff(support::to_dense(partial_transpose_site1(a, dims)),
                          oracle::transpose_first(support::to_dense(a), 3, 2)) < 1e-15);
}

TEST_CASE("permute_sites routes product factors") {
  CounterRng rng(8, 0);
  const Matrix a = support::random_matrix(2, 2, rng);
  const Matrix b = support::random_matrix(3, 3, rng);
  const Matrix c = support::random_matrix(2, 2, rng);
  const std::vector<std::size_t> dims{2, 3, 2};
  // input site s goes to output position perm[s]
  const std::vector<std::size_t> perm{2, 0, 1};
  CHECK(max_abs_diff(permute_sites(kron(kron(a, b), c), dims, perm), kron(kron(b, c), a)) < 1e-13);

  const CVector va{1.0, 2.0}, vb{3.0, 4.0, 5.0}, vc{6.0, 7.0};
  const CVector full = kron(kron(va, vb), vc);
  CHECK(permute_sites(full, dims, perm) == kron(kron(vb, vc), va));

  const std::vector<std::size_t> not_perm{0, 0, 1};
  CHECK_THROWS_AS(permute_sites(full, dims, not_perm), DimensionMismatch);
}

TEST_CASE("trace_product and expectation") {
  CounterRng rng(9, 0);
  const Matrix a = support::random_matrix(4, 4, rng);
  const Matrix b = support::random_matrix(4, 4, rng);
  CHECK(std::abs(trace_product(a, b) - trace(matmul(a, b))) < 1e-12);

  const CVector v{Cplx(0.6, 0.0), Cplx(0.0, 0.8)};
  CHECK(expectation(pauli::Y(), v) == doctest::Approx(oracle::expect(oracle::sigma(2), {v[0], v[1]})));
  CHECK(expectation(pauli::Z(), HermitianMatrix::projector(v)) == doctest::Approx(0.36 - 0.64));
}

TEST_CASE("Pauli matrices") {
  for (int k = 0; k < 4; ++k) {
    const HermitianMatrix p = k == 0 ? pauli::I() : k == 1 ? pauli::X() : k == 2 ? pauli::Y() : pauli::Z();
    CHECK(support::max_diff(support::to_dense(p), oracle::sigma(k)) == 0.0);
  }
}
