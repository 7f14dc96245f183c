// lvnm.hpp - local-observable term extraction for qubit witnesses and
// minimum sets of local von Neumann measurement settings covering them.
//
// A setting fixes one measurement direction per site. It yields every
// correlator built from {I, n_j . sigma}, so a term is covered when each of
// its non-identity site operators is parallel (up to sign) to the setting's
// direction at that site.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ewit/matcore.hpp"
#include "ewit/witness.hpp"

namespace ewit {

class Uncoverable : public Error {
 public:
  using Error::Error;
};

using Direction = std::array<double, 3>;

/// Unit vector with the sign fixed so that the first non-negligible
/// component is positive.
Direction canonical_direction(const Direction& v);
bool parallel(const Direction& a, const Direction& b, double tol = 1e-9);

/// coeff * (x_j op_j), op_j = I (nullopt) or n_j . sigma with unit n_j.
struct PauliTerm {
  double coeff = 0.0;
  std::vector<std::optional<Direction>> ops;

  std::size_t sites() const { return ops.size(); }
  /// "XIZ" for axis terms; general directions print as (x,y,z).
  std::string label() const;
};

/// Expansion over Pauli strings: c = Tr(m x sigma) / 2^N, |c| <= 1e-12 pruned.
/// Terms come out in lexicographic I < X < Y < Z order, site 0 leftmost.
std::vector<PauliTerm> pauli_terms(const HermitianMatrix& m, std::size_t n_sites);

/// Expansion in the witness' own local directions: each factor
/// nu0 I + nu . sigma contributes {I, n . sigma}. Parallel terms are merged.
std::vector<PauliTerm> factor_terms(const MSWitness& w);

/// Sum of coeff * (x op) over the terms.
HermitianMatrix reconstruct(const std::vector<PauliTerm>& terms);

struct Setting {
  std::vector<std::optional<Direction>> dirs;  ///< nullopt: site not measured

  std::string label() const;
  /// "XXZ"-style axis labels; '*' marks an unmeasured site.
  static Setting from_label(const std::string& s);
};

bool covers(const Setting& s, const PauliTerm& t);

struct SettingCover {
  std::vector<Setting> settings;
  std::vector<std::optional<std::size_t>> covered;  ///< per term: index of a covering setting
  bool optimal = false;
};

/// Coordinate axes plus every direction occurring in the terms.
std::vector<Direction> default_candidates(const std::vector<PauliTerm>& terms);

/// Minimum-cardinality cover. Exact branch-and-bound for <= 6 sites and
/// <= 12 candidates, otherwise greedy with optimal = false. Throws Uncoverable
/// when some term direction is not parallel to any candidate.
SettingCover min_cover(const std::vector<PauliTerm>& terms, const std::vector<Direction>& candidates);
SettingCover min_cover(const std::vector<PauliTerm>& terms);
SettingCover greedy_cover(const std::vector<PauliTerm>& terms, const std::vector<Direction>& candidates);

/// Fills `covered` for the given settings; true iff every term is covered.
bool verify_cover(SettingCover& cover, const std::vector<PauliTerm>& terms);
bool verify_cover(const std::vector<Setting>& settings, const std::vector<PauliTerm>& terms);

}  // namespace ewit
