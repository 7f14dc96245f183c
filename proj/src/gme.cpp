#include "ewit/gme.hpp"

#include <algorithm>
#include <string>

namespace ewit {

namespace {

void check_pair(std::size_t k, std::size_t kp, std::size_t n) {
  if (!(k < kp) || kp >= n)
    throw SiteOutOfRange("site pair (" + std::to_string(k) + "," + std::to_string(kp) +
                         ") invalid for " + std::to_string(n) + " sites");
}

/// Operator on the sites listed in `sites` (in order): `op` on `target`,
/// identity elsewhere.
HermitianMatrix pad_within(const HermitianMatrix& op, std::size_t target,
                           const std::vector<std::size_t>& sites, std::span<const std::size_t> dims) {
  std::vector<HermitianMatrix> parts;
  for (auto s : sites) parts.push_back(s == target ? op : HermitianMatrix::identity(dims[s]));
  return kron_all(parts);
}

}  // namespace

const char* to_string(GmeVerdict v) { return v == GmeVerdict::Genuine ? "genuine" : "undecided"; }

HermitianMatrix embed_pair(const MSWitness& base, std::size_t k, std::size_t kp,
                           std::span<const std::size_t> site_dims) {
  if (base.sites() != 2) throw DimensionMismatch("embed_pair: base witness must have two sites");
  const std::size_t n = site_dims.size();
  check_pair(k, kp, n);
  const auto bd = base.dims();
  if (site_dims[k] != bd[0] || site_dims[kp] != bd[1])
    throw DimensionMismatch("embed_pair: base site dims do not match the register");

  // Composite ordering (k, k', rest...) then route position -> register site.
  std::vector<std::size_t> order{k, kp};
  for (std::size_t s = 0; s < n; ++s)
    if (s != k && s != kp) order.push_back(s);
  std::vector<std::size_t> dims_in;
  for (auto s : order) dims_in.push_back(site_dims[s]);

  HermitianMatrix op = assemble(base);
  std::size_t rest = 1;
  for (std::size_t i = 2; i < order.size(); ++i) rest *= dims_in[i];
  if (rest > 1) op = kron(op, HermitianMatrix::identity(rest));
  return permute_sites(op, dims_in, order);
}

HermitianMatrix embed_pair(const MSWitness& base, std::size_t k, std::size_t kp, std::size_t n_sites) {
  const auto bd = base.dims();
  if (bd.size() != 2 || bd[0] != bd[1]) throw DimensionMismatch("embed_pair: need equal base site dims");
  const std::vector<std::size_t> dims(n_sites, bd[0]);
  return embed_pair(base, k, kp, dims);
}

GmeReport pairwise_scan(const std::map<SitePair, MSWitness>& base_per_pair, const HermitianMatrix& rho,
                        std::span<const std::size_t> site_dims) {
  const std::size_t n = site_dims.size();
  if (n < 2) throw DimensionMismatch("pairwise_scan: need at least two sites");
  if (rho.dim() != total_dim(site_dims)) throw DimensionMismatch("pairwise_scan: state size mismatch");
  GmeReport r;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t kp = k + 1; kp < n; ++kp) {
      const auto it = base_per_pair.find({k, kp});
      if (it == base_per_pair.end())
        throw SiteOutOfRange("pairwise_scan: no witness for pair (" + std::to_string(k) + "," +
                             std::to_string(kp) + ")");
      r.pair_values[{k, kp}] = expectation(embed_pair(it->second, k, kp, site_dims), rho);
      ++r.evaluations;
    }
  r.all_negative = std::all_of(r.pair_values.begin(), r.pair_values.end(),
                               [](const auto& kv) { return kv.second < 0.0; });
  r.verdict = r.all_negative ? GmeVerdict::Genuine : GmeVerdict::Undecided;
  return r;
}

std::map<SitePair, MSWitness> same_witness_for_all_pairs(const MSWitness& base, std::size_t n_sites) {
  std::map<SitePair, MSWitness> out;
  for (std::size_t k = 0; k < n_sites; ++k)
    for (std::size_t kp = k + 1; kp < n_sites; ++kp) out.emplace(SitePair{k, kp}, base);
  return out;
}

std::vector<Bipartition> bipartitions(std::size_t n_sites) {
  if (n_sites < 2 || n_sites > 20) throw DimensionMismatch("bipartitions: unsupported site count");
  std::vector<Bipartition> out;
  const std::size_t full = (std::size_t{1} << n_sites) - 1;
  // masks over sites 1..N-1; site 0 always in A
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n_sites - 1)); ++mask) {
    const std::size_t a_mask = 1 | (mask << 1);
    if (a_mask == full) continue;
    Bipartition a;
    for (std::size_t s = 0; s < n_sites; ++s)
      if (a_mask & (std::size_t{1} << s)) a.push_back(s);
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> complement(const Bipartition& a, std::size_t n_sites) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < n_sites; ++s)
    if (std::find(a.begin(), a.end(), s) == a.end()) out.push_back(s);
  return out;
}

double bipartition_value(const MSWitness& w, const Bipartition& a, const HermitianMatrix& rho,
                         std::span<const std::size_t> site_dims) {
  const std::size_t n = site_dims.size();
  const auto b = complement(a, n);
  if (a.empty() || b.empty()) throw DimensionMismatch("bipartition_value: both halves must be non-empty");
  std::size_t da = 1, db = 1;
  for (auto s : a) da *= site_dims[s];
  for (auto s : b) db *= site_dims[s];
  if (w.dims() != std::vector<std::size_t>{da, db})
    throw DimensionMismatch("bipartition_value: witness dims do not match the bipartition");

  // register site s -> position in (A..., A-bar...)
  std::vector<std::size_t> perm(n);
  std::size_t pos = 0;
  for (auto s : a) perm[s] = pos++;
  for (auto s : b) perm[s] = pos++;
  const HermitianMatrix grouped = permute_sites(rho, site_dims, perm);
  return expectation(w, grouped);
}

GmeVerdict biseparability_check(const std::map<Bipartition, MSWitness>& witness_per_bipartition,
                                const HermitianMatrix& rho, std::span<const std::size_t> site_dims) {
  for (const auto& a : bipartitions(site_dims.size())) {
    const auto it = witness_per_bipartition.find(a);
    if (it == witness_per_bipartition.end()) throw SiteOutOfRange("biseparability_check: missing bipartition");
    if (!(bipartition_value(it->second, a, rho, site_dims) < 0.0)) return GmeVerdict::Undecided;
  }
  return GmeVerdict::Genuine;
}

std::optional<MSWitness> lift_pair_to_bipartition(const MSWitness& base, std::size_t k, std::size_t kp,
                                                  const Bipartition& a,
                                                  std::span<const std::size_t> site_dims) {
  const std::size_t n = site_dims.size();
  check_pair(k, kp, n);
  const bool k_in_a = std::find(a.begin(), a.end(), k) != a.end();
  const bool kp_in_a = std::find(a.begin(), a.end(), kp) != a.end();
  if (k_in_a == kp_in_a) return std::nullopt;

  const auto b = complement(a, n);
  const std::size_t site_a = k_in_a ? k : kp;
  const std::size_t site_b = k_in_a ? kp : k;
  const std::size_t fa = k_in_a ? 0 : 1;
  const std::size_t fb = 1 - fa;

  auto lift = [&](const ProductObservable& p) {
    std::vector<LocalFactor> f;
    f.push_back(LocalFactor::from_matrix(pad_within(p.factors()[fa].matrix, site_a, a, site_dims)));
    f.push_back(LocalFactor::from_matrix(pad_within(p.factors()[fb].matrix, site_b, b, site_dims)));
    return ProductObservable(std::move(f));
  };
  return MSWitness(lift(base.minuend()), lift(base.subtrahend()), base.norm_mode());
}

std::map<Bipartition, MSWitness> lift_pairs_to_bipartitions(
    const std::map<SitePair, MSWitness>& base_per_pair, std::span<const std::size_t> site_dims) {
  std::map<Bipartition, MSWitness> out;
  for (const auto& a : bipartitions(site_dims.size())) {
    for (const auto& [pair, w] : base_per_pair) {
      auto lifted = lift_pair_to_bipartition(w, pair.first, pair.second, a, site_dims);
      if (lifted) {
        out.emplace(a, std::move(*lifted));
        break;
      }
    }
  }
  return out;
}

}  // namespace ewit
