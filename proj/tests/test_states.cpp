#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ewit/rng.hpp"
#include "ewit/states.hpp"
#include "support.hpp"

using namespace ewit;

namespace {

Cplx inner(const StateVector& a, const StateVector& b) {
  Cplx s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  return s;
}

bool ppt(const HermitianMatrix& rho, std::size_t da, std::size_t db) {
  const auto pt = oracle::transpose_first(support::to_dense(rho), da, db);
  return is_psd(HermitianMatrix(support::from_dense(pt)), 1e-12);
}

}  // namespace

TEST_CASE("counter RNG is deterministic and stream separated") {
  CounterRng a(7, 0), b(7, 0), c(7, 1), d(8, 0);
  const auto x = a.next_u64();
  CHECK(x == b.next_u64());
  CHECK(x != c.next_u64());
  CHECK(x != d.next_u64());
  CHECK(a.counter() == 1);
  double sum = 0, sum2 = 0;
  CounterRng g(1, 2);
  for (int i = 0; i < 100000; ++i) {
    const double z = g.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / 1e5) < 0.02);
  CHECK(std::abs(sum2 / 1e5 - 1.0) < 0.02);
  for (int i = 0; i < 1000; ++i) {
    const double u = g.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("state vectors must be normalized") {
  CHECK_THROWS(StateVector({2}, CVector{1.0, 1.0}));
  CHECK_THROWS_AS(StateVector({2, 2}, CVector{1.0, 0.0}), DimensionMismatch);
  const auto s = StateVector::normalized({2}, CVector{1.0, 1.0});
  CHECK(std::abs(s.amplitudes()[0] - Cplx(std::sqrt(0.5), 0)) < 1e-15);
}

TEST_CASE("Bell states are orthonormal with the usual amplitudes") {
  const std::array all{BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(inner(bell(all[i]), bell(all[j])) - (i == j ? 1.0 : 0.0)) < 1e-15);
  const double h = std::sqrt(0.5);
  CHECK(std::abs(bell(BellState::PsiMinus).amplitudes()[1] - h) < 1e-15);
  CHECK(std::abs(bell(BellState::PsiMinus).amplitudes()[2] + h) < 1e-15);
  CHECK(std::abs(bell(BellState::PhiMinus).amplitudes()[3] + h) < 1e-15);
}

TEST_CASE("GHZ and W states") {
  const auto g = ghz(3);
  CHECK(std::abs(g.amplitudes()[0] - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(g.amplitudes()[7] - std::sqrt(0.5)) < 1e-15);
  const auto w = w_state(3);
  for (std::size_t i : {1u, 2u, 4u}) CHECK(std::abs(w.amplitudes()[i] - 1.0 / std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(w.amplitudes()[3]) == 0.0);
  CHECK(w.dims() == std::vector<std::size_t>{2, 2, 2});
}

TEST_CASE("Heisenberg-Weyl operators and generalized Bell states") {
  for (int d : {2, 3, 4}) {
    std::vector<StateVector> states;
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        const auto hw = heisenberg_weyl(d, m, n);
        CHECK(max_abs_diff(matmul(hw.matrix, conj_transpose(hw.matrix)), Matrix::identity(d)) < 1e-14);
        states.push_back(generalized_bell(d, m, n));
      }
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = 0; j < states.size(); ++j)
        CHECK(std::abs(inner(states[i], states[j]) - (i == j ? 1.0 : 0.0)) < 1e-13);
  }
  // d = 2: Omega_{1,0} = X maps Phi+ to Psi+, Omega_{0,1} = Z to Phi-
  CHECK(std::abs(inner(generalized_bell(2, 1, 0), bell(BellState::PsiPlus)) - 1.0) < 1e-14);
  CHECK(std::abs(inner(generalized_bell(2, 0, 1), bell(BellState::PhiMinus)) - 1.0) < 1e-14);
}

TEST_CASE("white noise and fidelity") {
  const auto phi = bell(BellState::PhiPlus);
  for (double eps : {0.0, 0.2, 0.5, 1.0}) {
    const auto rho = white_noise(phi, eps);
    CHECK(is_density_matrix(rho));
    CHECK(fidelity(phi, rho) == doctest::Approx(1.0 - 0.75 * eps));
  }
  CHECK_THROWS(white_noise(phi, 1.5));
}

TEST_CASE("Schmidt coefficients") {
  for (int d : {2, 3, 4}) {
    const auto s = schmidt_squares(max_entangled(d));
    for (double v : s) CHECK(v == doctest::Approx(1.0 / d));
  }
  const std::array sites{StateVector({2}, CVector{0.6, 0.8}), StateVector({2}, CVector{1.0, 0.0})};
  const auto s = schmidt_squares(product_state(sites));
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(std::abs(s[1]) < 1e-12);
  CHECK_THROWS_AS(schmidt_squares(ghz(3)), DimensionMismatch);
}

TEST_CASE("samplers produce valid states") {
  CounterRng rng(21, 0);
  const std::vector<std::size_t> dims{2, 2};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 7);
    const auto psi = haar_pure(d, rng);
    double n = 0;
    for (auto a : psi.amplitudes()) n += std::norm(a);
    CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(is_density_matrix(random_density(d, rng)));
    CHECK(is_density_matrix(random_product(dims, rng).density()));
    const auto p = sample_bell_diagonal(rng).p;
    CHECK(p[0] + p[1] + p[2] + p[3] == doctest::Approx(1.0));
    CHECK(is_density_matrix(bell_diagonal({p})));
  }
}

TEST_CASE("flat simplex has uniform marginals mean 1/4") {
  CounterRng rng(22, 0);
  std::array<double, 4> mean{};
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto p = sample_bell_diagonal(rng).p;
    for (int k = 0; k < 4; ++k) mean[k] += p[k] / n;
  }
  for (double m : mean) CHECK(std::abs(m - 0.25) < 0.003);
}

TEST_CASE("sampled separable states pass the Peres test") {
  CounterRng rng(23, 0);
  const std::vector<std::size_t> dims{2, 2};
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto rho = sample_separable(dims, rng);
    if (!is_density_matrix(rho) || !ppt(rho, 2, 2)) ++failures;
  }
  CHECK(failures == 0);
  // and the test does flag an entangled state
  CHECK_FALSE(ppt(bell(BellState::PhiPlus).density(), 2, 2));
}

TEST_CASE("Bell-diagonal states are diagonal in the Bell basis") {
  const BellDiagonal bd{{0.4, 0.3, 0.2, 0.1}};
  const auto rho = bell_diagonal(bd);
  const std::array all{BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus};
  for (std::size_t i = 0; i < 4; ++i) CHECK(expectation(rho, bell(all[i]).amplitudes()) == doctest::Approx(bd.p[i]));
}
