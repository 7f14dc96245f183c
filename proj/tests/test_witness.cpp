#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ewit/fixtures.hpp"
#include "ewit/witness.hpp"
#include "support.hpp"

using namespace ewit;
namespace fz = oracle::frozen;

namespace {

MSWitness phi_plus() { return fixtures::phi_plus_witness().to_witness(); }
MSWitness psi_minus() { return fixtures::psi_minus_witness().to_witness(); }

oracle::Dense oracle_phi_plus() {
  const auto a = oracle::qubit_op(8387.0 / 8192, 41.0 / 64, 0, 41.0 / 64);
  const auto b = oracle::qubit_op(1, 85.0 / 128, 0, 85.0 / 128);
  return oracle::add(oracle::kron(a, a), oracle::kron(b, b), -1.0);
}

oracle::Dense oracle_psi_minus() {
  const auto a = oracle::qubit_op(607.0 / 512, -107.0 / 128, 0, -107.0 / 128);
  const auto b = oracle::qubit_op(1, -85.0 / 128, 0, -85.0 / 128);
  return oracle::add(oracle::kron(a, a), oracle::kron(b, b), -1.0);
}

std::vector<oracle::C> amps(const StateVector& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

}  // namespace

TEST_CASE("assembled witnesses match the naive construction") {
  CHECK(support::max_diff(support::to_dense(assemble(phi_plus())), oracle_phi_plus()) < 1e-14);
  CHECK(support::max_diff(support::to_dense(assemble(psi_minus())), oracle_psi_minus()) < 1e-14);
}

TEST_CASE("expectation values on Bell states") {
  const auto phi = bell(BellState::PhiPlus), psi = bell(BellState::PsiMinus);
  CHECK(expectation(phi_plus(), phi) == doctest::Approx(fz::phi_plus_on_phi_plus).epsilon(1e-12));
  CHECK(expectation(phi_plus(), psi) == doctest::Approx(fz::phi_plus_on_psi_minus).epsilon(1e-12));
  CHECK(expectation(psi_minus(), psi) == doctest::Approx(fz::psi_minus_on_psi_minus).epsilon(1e-12));
  CHECK(expectation(psi_minus(), phi) == doctest::Approx(fz::psi_minus_on_phi_plus).epsilon(1e-12));
  CHECK(expectation(phi_plus(), phi) == doctest::Approx(oracle::expect(oracle_phi_plus(), amps(phi))));
  CHECK(expectation(phi_plus(), phi.density()) == doctest::Approx(fz::phi_plus_on_phi_plus).epsilon(1e-12));
}

TEST_CASE("expectation requires a density matrix of matching size") {
  CHECK_THROWS_AS(expectation(phi_plus(), ghz(3).density()), DimensionMismatch);
  CHECK_THROWS(expectation(phi_plus(), HermitianMatrix::identity(4)));
}

TEST_CASE("normalization modes") {
  const MSWitness raw = phi_plus();
  CHECK(raw.normalization() == 1.0);
  CHECK(raw.minuend().trace() == doctest::Approx(fz::trace_minuend_phi_plus).epsilon(1e-14));
  const MSWitness td = raw.with_norm_mode(NormMode::TraceDiff);
  CHECK(td.normalization() == doctest::Approx(fz::raw_trace_phi_plus).epsilon(1e-13));
  CHECK(real_trace(assemble(td)) == doctest::Approx(1.0));
  CHECK(expectation(td, bell(BellState::PhiPlus)) * td.normalization() ==
        doctest::Approx(fz::phi_plus_on_phi_plus).epsilon(1e-12));
}

TEST_CASE("mismatched products are rejected") {
  const LocalFactor q = LocalFactor::from_bloch(BlochForm::scaled_identity(2, 1.0));
  const LocalFactor t = LocalFactor::from_bloch(BlochForm::scaled_identity(3, 1.0));
  CHECK_THROWS_AS(MSWitness(ProductObservable({q, q}), ProductObservable({q, t})), DimensionMismatch);
  CHECK_THROWS(ProductObservable({q}));
}

TEST_CASE("coincidence overlaps") {
  const auto [m, s] = coincidence_overlaps(phi_plus(), bell(BellState::PhiPlus).density());
  CHECK(m == doctest::Approx(1.868975 / fz::trace_minuend_phi_plus).epsilon(1e-5));
  CHECK(s == doctest::Approx(1.881958 / 4.0).epsilon(1e-5));
  // raw expectation equals the difference of unnormalized overlaps
  CHECK(m * fz::trace_minuend_phi_plus - 4.0 * s == doctest::Approx(fz::phi_plus_on_phi_plus).epsilon(1e-9));
}

TEST_CASE("product floor matches the corner oracle and the angle grid") {
  const double corner = oracle::symmetric_xz_floor(8387.0 / 8192, 41.0 / 64, 85.0 / 128);
  const double f = product_state_floor(phi_plus());
  CHECK(f == doctest::Approx(corner).epsilon(1e-9));
  CHECK(f == doctest::Approx(fz::min_eig_phi_plus).epsilon(1e-9));
  CHECK(f <= oracle::product_grid_min(oracle_phi_plus(), 24) + 1e-12);

  const double corner_psi = oracle::symmetric_xz_floor(607.0 / 512, -107.0 / 128, -85.0 / 128);
  CHECK(product_state_floor(psi_minus()) == doctest::Approx(corner_psi).epsilon(1e-9));
  CHECK(corner_psi == doctest::Approx(fz::psi_minus_on_psi_minus).epsilon(1e-9));
}

TEST_CASE("the +sqrt2 corner of the second witness") {
  // both sites along +(X+Z)/sqrt2
  const double t = std::numbers::sqrt2;
  const double v = (607.0 / 512 - 107.0 / 128 * t) * (607.0 / 512 - 107.0 / 128 * t) -
                   (1 - 85.0 / 128 * t) * (1 - 85.0 / 128 * t);
  CHECK(v == doctest::Approx(fz::psi_minus_plus_corner).epsilon(1e-12));
  const double th = std::numbers::pi / 4;
  const auto s = oracle::qubit_state(th, 0.0);
  CHECK(oracle::expect(oracle_psi_minus(), oracle::kron(s, s)) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("floor is independent of the worker count") {
  FloorOptions one{8, 3, 1}, four{8, 3, 4};
  CHECK(product_state_floor(psi_minus(), one) == product_state_floor(psi_minus(), four));
  // three-qubit operator through the general path
  const auto w3 = fixtures::w3_pair_witness().to_witness();
  const HermitianMatrix op = kron(assemble(w3), HermitianMatrix::identity(2));
  const std::vector<std::size_t> dims{2, 2, 2};
  CHECK(product_state_floor(op, dims, one) == product_state_floor(op, dims, four));
}

TEST_CASE("audit of the reference witnesses") {
  for (const MSWitness& w : {phi_plus(), psi_minus()}) {
    const auto r = audit(w);
    CHECK(r.verdict == Verdict::PaperValidOnly);
    CHECK(r.local_positivity());
    CHECK_FALSE(r.globally_psd);
    for (std::size_t s = 0; s < 2; ++s) {
      CHECK(r.order_paper[s]);
      CHECK_FALSE(r.order_exact[s]);
      CHECK(r.local_gap[s] < 0.0);
    }
    CHECK(r.product_floor < -1e-6);
  }
  CHECK(audit(phi_plus()).local_gap[0] == doctest::Approx(fz::local_gap_phi_plus).epsilon(1e-10));
  CHECK(audit(phi_plus()).min_eigenvalue == doctest::Approx(fz::min_eig_phi_plus).epsilon(1e-10));
}

TEST_CASE("a witness with equal minuend and subtrahend cannot detect anything") {
  auto f = fixtures::phi_plus_witness();
  f.subtrahend = f.minuend;
  const auto r = audit(f.to_witness());
  CHECK(r.globally_psd);
  CHECK(r.detection_impossible());
  CHECK(r.verdict == Verdict::Invalid);
  CHECK(std::string(to_string(r.verdict)) == "invalid");
}

TEST_CASE("tensor monotonicity of Loewner-ordered factors") {
  CounterRng rng(31, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
    std::vector<LocalFactor> m, s;
    for (int site = 0; site < 2; ++site) {
      const HermitianMatrix b = support::random_psd(d, rng);
      const HermitianMatrix a = b + 0.5 * support::random_psd(d, rng);
      m.push_back(LocalFactor::from_matrix(a));
      s.push_back(LocalFactor::from_matrix(b));
    }
    const MSWitness w{ProductObservable(m), ProductObservable(s)};
    worst = std::min(worst, min_eigenvalue(assemble(w)));
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("noise tolerance closed form and bisection") {
  const auto t = noise_tolerance(phi_plus(), bell(BellState::PhiPlus));
  REQUIRE(t.has_value());
  CHECK(t->epsilon == doctest::Approx(fz::eps_phi_plus).epsilon(1e-12));
  CHECK(std::abs(t->epsilon - t->epsilon_bisection) < 1e-9);
  CHECK(*fidelity_threshold(phi_plus(), bell(BellState::PhiPlus)) ==
        doctest::Approx(fz::fidelity_phi_plus).epsilon(1e-12));
  const auto u = noise_tolerance(psi_minus(), bell(BellState::PsiMinus));
  REQUIRE(u.has_value());
  CHECK(u->epsilon == doctest::Approx(fz::eps_psi_minus).epsilon(1e-12));

  CHECK_FALSE(noise_tolerance(phi_plus(), bell(BellState::PsiMinus)).has_value());

  // projector witness: Tr(W)/D = 1/4, target value -1/2
  const auto phi = bell(BellState::PhiPlus);
  const auto p = noise_tolerance(0.5 * HermitianMatrix::identity(4) - phi.density(), phi);
  REQUIRE(p.has_value());
  CHECK(p->epsilon == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(fidelity_at_tolerance(0.2, 4) == doctest::Approx(0.85));
}

TEST_CASE("noise tolerance saturates when the mixed state is detected") {
  const auto phi = bell(BellState::PhiPlus);
  const auto t = noise_tolerance(-1.0 * HermitianMatrix::identity(4), phi);
  REQUIRE(t.has_value());
  CHECK(t->epsilon == 1.0);
  CHECK(t->epsilon_bisection == 1.0);
}

TEST_CASE("Bloch-data detection conditions agree with the expectation sign") {
  CHECK(bell_detection_inequality(phi_plus(), BellState::PhiPlus));
  CHECK_FALSE(bell_detection_inequality(phi_plus(), BellState::PsiMinus));
  CHECK(bell_detection_inequality(psi_minus(), BellState::PsiMinus));
  CHECK_FALSE(bell_detection_inequality(psi_minus(), BellState::PhiPlus));
  CounterRng rng(32, 0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<BlochForm> m, s;
    for (int site = 0; site < 2; ++site) {
      m.push_back(BlochForm{2, 1.0 + 0.3 * rng.uniform(), {rng.normal() * 0.4, rng.normal() * 0.4, rng.normal() * 0.4}});
      s.push_back(BlochForm{2, 1.0, {rng.normal() * 0.4, rng.normal() * 0.4, rng.normal() * 0.4}});
    }
    const auto w = MSWitness::from_bloch(m, s);
    for (auto b : {BellState::PhiPlus, BellState::PsiMinus}) {
      const double v = expectation(w, bell(b));
      if (std::abs(v) > 1e-12) CHECK(bell_detection_inequality(w, b) == (v < 0.0));
    }
  }
}

TEST_CASE("construct_search finds predicate-ordered Bell witnesses") {
  const std::vector<std::size_t> dims{2, 2};
  for (auto b : {BellState::PhiPlus, BellState::PsiMinus}) {
    const auto r = construct_search(bell(b).density(), dims, SearchMode::Paper, 7, 2000);
    REQUIRE(r.witness.has_value());
    CHECK(expectation(*r.witness, bell(b)) < 0.0);
    CHECK(r.best_value < 0.0);
    CHECK(r.evaluations <= 2000);
    for (std::size_t site = 0; site < 2; ++site)
      CHECK(order_paper(r.witness->minuend().factors()[site].bloch, r.witness->subtrahend().factors()[site].bloch));
    const auto again = construct_search(bell(b).density(), dims, SearchMode::Paper, 7, 2000);
    CHECK(again.evaluations == r.evaluations);
  }
}

TEST_CASE("strict search cannot succeed on Loewner-ordered factors") {
  const std::vector<std::size_t> dims{2, 2};
  const auto r = construct_search(bell(BellState::PhiPlus).density(), dims, SearchMode::Strict, 7, 300);
  CHECK_FALSE(r.witness.has_value());
  CHECK(r.best_value >= -1e-9);
}
