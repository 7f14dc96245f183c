#include "ewit/fixtures.hpp"

namespace ewit::fixtures {

namespace {

// nu0 I + a X + c Z on a qubit; Gell-Mann indices 1 and 3 are X and Z.
SiteForm qubit(Rational nu0, Rational x, Rational z) {
  SiteForm f{nu0, {}};
  if (x.num != 0) f.nu[1] = x;
  if (z.num != 0) f.nu[3] = z;
  return f;
}

WitnessFile symmetric_pair(const SiteForm& minuend, const SiteForm& subtrahend) {
  return WitnessFile{{2, 2}, {minuend, minuend}, {subtrahend, subtrahend}, NormMode::Raw};
}

}  // namespace

WitnessFile phi_plus_witness() {
  return symmetric_pair(qubit({8387, 8192}, {41, 64}, {41, 64}), qubit({1}, {85, 128}, {85, 128}));
}

WitnessFile psi_minus_witness() {
  return symmetric_pair(qubit({607, 512}, {-107, 128}, {-107, 128}), qubit({1}, {-85, 128}, {-85, 128}));
}

WitnessFile w3_pair_witness() {
  return symmetric_pair(qubit({526849, 524288}, {170497, 262144}, {-773, 1024}),
                        qubit({1}, {671, 1024}, {-3, 4}));
}

}  // namespace ewit::fixtures
