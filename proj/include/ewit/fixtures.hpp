// fixtures.hpp - the reference witnesses with their exact coefficients and
// the reference values the reproduction harness compares against.

#pragma once

#include "ewit/io.hpp"

namespace ewit::fixtures {

/// (8387/8192 I + 41/64 (X + Z))^{x2} - (I + 85/128 (X + Z))^{x2}
WitnessFile phi_plus_witness();
/// (607/512 I - 107/128 (X + Z))^{x2} - (I - 85/128 (X + Z))^{x2}
WitnessFile psi_minus_witness();
/// Two-site base witness padded onto every pair of a three-qubit register.
WitnessFile w3_pair_witness();

/// Refinement parameters used with phi_plus_witness.
inline constexpr double kZeta = 1.0 / 9090.0;
inline constexpr double kXi = 1.0 / 9088.0;

struct Reference {
  double value;
  double tol;
};

// expectation values, 1e-6
inline constexpr Reference kPhiPlusOnPhiPlus{-0.012983, 1e-6};
inline constexpr Reference kPhiPlusOnPsiMinus{0.109331, 1e-6};
inline constexpr Reference kPsiMinusOnPsiMinus{-0.110104, 1e-6};
inline constexpr Reference kPsiMinusOnPhiPlus{0.921146, 1e-6};

// white-noise tolerances and fidelity threshold
inline constexpr Reference kEpsPhiPlus{0.21229, 5e-4};
inline constexpr Reference kEpsPsiMinus{0.21354, 5e-4};
inline constexpr Reference kFidelityPhiPlus{0.84078, 5e-4};
inline constexpr double kClosedVsBisection = 1e-9;

// three-qubit W state
inline constexpr Reference kW3PairValue{-0.002617, 2e-5};
inline constexpr Reference kEpsW3{0.21086, 1e-3};
inline constexpr double kW3NoisyEps = 0.25;
// projector witnesses I/2 - |Phi+><Phi+| and 2/3 I - |W3><W3|
inline constexpr Reference kEpsProjectorPhiPlus{2.0 / 3.0, 1e-9};
inline constexpr Reference kEpsProjectorW3{8.0 / 21.0, 1e-9};

// setting counts
inline constexpr std::size_t kCoverPhiPlus = 1;
inline constexpr std::size_t kCoverProjector = 3;
inline constexpr std::size_t kCoverW3 = 4;
inline constexpr const char* kW3Settings[] = {"ZZZ", "XXZ", "XZX", "ZXX"};

// audit of the phi_plus factors
inline constexpr Reference kLocalGapPhiPlus{-0.00934, 1e-4};
inline constexpr Reference kFloorPhiPlus{-0.0361, 1e-3};

// refinement
inline constexpr Reference kFinerEpsilon{0.00468, 1e-4};
inline constexpr double kReconstructionTol = 1e-10;
inline constexpr std::size_t kDominanceStates = 1000;

// nonlinear functional
inline constexpr double kChoiTol = 1e-10;
inline constexpr std::size_t kChoiInputs = 1000;
inline constexpr double kBuildXTol = 1e-10;
inline constexpr double kRelGainW = 0.09;
inline constexpr double kRelGainWf = 0.10;
inline constexpr double kRelGainWLo = 0.05, kRelGainWHi = 0.13;
inline constexpr double kRelGainWfLo = 0.06, kRelGainWfHi = 0.14;
inline constexpr std::size_t kGainSamples = 1000000;

inline constexpr std::uint64_t kDefaultSeed = 7;

}  // namespace ewit::fixtures
