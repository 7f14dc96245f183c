// gme.hpp - genuine multipartite entanglement checks built from two-site
// witnesses padded with identities, and from bipartition witnesses.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ewit/witness.hpp"

namespace ewit {

class SiteOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Ordered site pair (first < second), 0-based.
using SitePair = std::pair<std::size_t, std::size_t>;

/// (W_k x W_k' - W~_k x W~_k') x I, with the base factors routed to sites k
/// and k' of an N-site register with the given site dims.
HermitianMatrix embed_pair(const MSWitness& base, std::size_t k, std::size_t kp,
                           std::span<const std::size_t> site_dims);
/// Uniform register: every site has the base witness' (common) site dim.
HermitianMatrix embed_pair(const MSWitness& base, std::size_t k, std::size_t kp, std::size_t n_sites);

enum class GmeVerdict { Genuine, Undecided };
const char* to_string(GmeVerdict v);

struct GmeReport {
  std::map<SitePair, double> pair_values;  ///< lexicographic pair order
  bool all_negative = false;
  GmeVerdict verdict = GmeVerdict::Undecided;
  std::size_t evaluations = 0;  ///< expectation evaluations performed
};

/// Evaluates every one of the C(N,2) padded pair witnesses on rho. Requires a
/// witness for each pair. Genuine iff every value is negative.
GmeReport pairwise_scan(const std::map<SitePair, MSWitness>& base_per_pair, const HermitianMatrix& rho,
                        std::span<const std::size_t> site_dims);

/// Same base witness for every pair.
std::map<SitePair, MSWitness> same_witness_for_all_pairs(const MSWitness& base, std::size_t n_sites);

/// Sites of the A side of a bipartition A|A-bar; always contains site 0 and
/// is a proper subset, so each of the 2^{N-1} - 1 bipartitions appears once.
using Bipartition = std::vector<std::size_t>;
std::vector<Bipartition> bipartitions(std::size_t n_sites);
std::vector<std::size_t> complement(const Bipartition& a, std::size_t n_sites);

/// Tr(W_{A|A-bar} rho) for a two-"site" witness whose first factor acts on
/// the sites of A (in order) and the second on the complement.
double bipartition_value(const MSWitness& w, const Bipartition& a, const HermitianMatrix& rho,
                         std::span<const std::size_t> site_dims);

/// Genuine iff every bipartition witness takes a negative value. Requires a
/// witness for each bipartition.
GmeVerdict biseparability_check(const std::map<Bipartition, MSWitness>& witness_per_bipartition,
                                const HermitianMatrix& rho, std::span<const std::size_t> site_dims);

/// Lifts a pair witness to A|A-bar by padding each factor with identities
/// inside its half. nullopt when k and k' fall on the same side.
std::optional<MSWitness> lift_pair_to_bipartition(const MSWitness& base, std::size_t k, std::size_t kp,
                                                  const Bipartition& a,
                                                  std::span<const std::size_t> site_dims);

/// For every bipartition, lifts the lexicographically first separated pair.
std::map<Bipartition, MSWitness> lift_pairs_to_bipartitions(
    const std::map<SitePair, MSWitness>& base_per_pair, std::span<const std::size_t> site_dims);

}  // namespace ewit
