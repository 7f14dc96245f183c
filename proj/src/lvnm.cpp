#include "ewit/lvnm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace ewit {

namespace {

constexpr double kPrune = 1e-12;
constexpr std::size_t kMaxExactSites = 6;
constexpr std::size_t kMaxExactCandidates = 12;
constexpr std::size_t kMaxSettings = 1u << 14;

const std::array<Direction, 3> kAxes{Direction{1, 0, 0}, Direction{0, 1, 0}, Direction{0, 0, 1}};

std::string direction_label(const std::optional<Direction>& d) {
  if (!d) return "I";
  for (std::size_t a = 0; a < 3; ++a)
    if (parallel(*d, kAxes[a])) return std::string(1, "XYZ"[a]);
  std::ostringstream os;
  os.precision(6);
  os << '(' << (*d)[0] << ',' << (*d)[1] << ',' << (*d)[2] << ')';
  return os.str();
}

bool same_ops(const PauliTerm& a, const PauliTerm& b) {
  for (std::size_t s = 0; s < a.ops.size(); ++s) {
    if (a.ops[s].has_value() != b.ops[s].has_value()) return false;
    if (a.ops[s] && !parallel(*a.ops[s], *b.ops[s])) return false;
  }
  return true;
}

bool identity_only(const PauliTerm& t) {
  return std::none_of(t.ops.begin(), t.ops.end(), [](const auto& o) { return o.has_value(); });
}

HermitianMatrix direction_operator(const std::optional<Direction>& d) {
  if (!d) return pauli::I();
  return (*d)[0] * pauli::X() + (*d)[1] * pauli::Y() + (*d)[2] * pauli::Z();
}

using Bits = std::vector<bool>;

struct Candidates {
  std::vector<Setting> settings;
  std::vector<Bits> cover;  // cover[s][t]
};

std::size_t site_count(const std::vector<PauliTerm>& terms) {
  if (terms.empty()) return 0;
  const std::size_t n = terms.front().sites();
  for (const auto& t : terms)
    if (t.sites() != n) throw DimensionMismatch("lvnm: terms have different site counts");
  return n;
}

/// Settings built from candidate directions that actually occur at each
/// site; dominated and empty settings removed.
Candidates enumerate_settings(const std::vector<PauliTerm>& terms, const std::vector<Direction>& cands,
                              bool& too_many) {
  const std::size_t n = site_count(terms);
  std::vector<std::vector<std::optional<Direction>>> options(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& c : cands) {
      const Direction cd = canonical_direction(c);
      const bool used = std::any_of(terms.begin(), terms.end(),
                                    [&](const PauliTerm& t) { return t.ops[s] && parallel(*t.ops[s], cd); });
      const bool dup = std::any_of(options[s].begin(), options[s].end(),
                                   [&](const auto& o) { return parallel(*o, cd); });
      if (used && !dup) options[s].push_back(cd);
    }
    if (options[s].empty()) options[s].push_back(std::nullopt);
  }
  for (const auto& t : terms)
    for (std::size_t s = 0; s < n; ++s)
      if (t.ops[s] && !std::any_of(options[s].begin(), options[s].end(),
                                   [&](const auto& o) { return o && parallel(*o, *t.ops[s]); }))
        throw Uncoverable("lvnm: term " + t.label() + " has a direction outside the candidates");

  std::size_t total = 1;
  too_many = false;
  for (const auto& o : options) {
    total *= o.size();
    if (total > kMaxSettings) {
      too_many = true;
      total = kMaxSettings;
    }
  }

  Candidates out;
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Setting st;
    for (std::size_t s = 0; s < n; ++s) st.dirs.push_back(options[s][idx[s]]);
    Bits b(terms.size());
    bool any = false;
    for (std::size_t t = 0; t < terms.size(); ++t)
      if (!identity_only(terms[t]) && covers(st, terms[t])) b[t] = any = true;
    if (any) {
      out.settings.push_back(std::move(st));
      out.cover.push_back(std::move(b));
    }
    for (std::size_t s = n; s-- > 0;) {
      if (++idx[s] < options[s].size()) break;
      idx[s] = 0;
    }
  }

  // drop settings whose coverage is contained in an earlier-or-larger one
  auto subset = [](const Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && !b[i]) return false;
    return true;
  };
  Candidates kept;
  for (std::size_t i = 0; i < out.settings.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < out.settings.size() && !dominated; ++j) {
      if (i == j) continue;
      if (subset(out.cover[i], out.cover[j]) && (!subset(out.cover[j], out.cover[i]) || j < i)) dominated = true;
    }
    if (!dominated) {
      kept.settings.push_back(out.settings[i]);
      kept.cover.push_back(out.cover[i]);
    }
  }
  return kept;
}

SettingCover finish(std::vector<Setting> settings, const std::vector<PauliTerm>& terms, bool optimal) {
  SettingCover c{std::move(settings), {}, optimal};
  verify_cover(c, terms);
  return c;
}

SettingCover greedy_from(const Candidates& cs, const std::vector<PauliTerm>& terms) {
  Bits need(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) need[t] = !identity_only(terms[t]);
  std::vector<Setting> chosen;
  while (std::find(need.begin(), need.end(), true) != need.end()) {
    std::size_t best = cs.settings.size(), best_gain = 0;
    for (std::size_t s = 0; s < cs.settings.size(); ++s) {
      std::size_t gain = 0;
      for (std::size_t t = 0; t < terms.size(); ++t) gain += need[t] && cs.cover[s][t];
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    if (best == cs.settings.size()) throw Uncoverable("lvnm: greedy cover stalled");
    for (std::size_t t = 0; t < terms.size(); ++t)
      if (cs.cover[best][t]) need[t] = false;
    chosen.push_back(cs.settings[best]);
  }
  return finish(std::move(chosen), terms, false);
}

}  // namespace

Direction canonical_direction(const Direction& v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(n > kPrune)) throw Error("canonical_direction: zero vector");
  Direction u{v[0] / n, v[1] / n, v[2] / n};
  for (double c : u) {
    if (std::abs(c) <= kPrune) continue;
    if (c < 0) u = {-u[0], -u[1], -u[2]};
    break;
  }
  return u;
}

bool parallel(const Direction& a, const Direction& b, double tol) {
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const double na = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  const double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  return std::abs(std::abs(dot) - na * nb) <= tol * na * nb;
}

std::string PauliTerm::label() const {
  std::string s;
  for (const auto& o : ops) s += direction_label(o);
  return s;
}

std::vector<PauliTerm> pauli_terms(const HermitianMatrix& m, std::size_t n_sites) {
  if (n_sites == 0 || n_sites > kMaxExactSites || m.dim() != (std::size_t{1} << n_sites))
    throw DimensionMismatch("pauli_terms: operator is not an N-qubit operator");
  const std::size_t dim = m.dim();
  const double scale = 1.0 / static_cast<double>(dim);
  std::vector<PauliTerm> out;
  std::size_t strings = 1;
  for (std::size_t s = 0; s < n_sites; ++s) strings *= 4;
  std::vector<int> code(n_sites);
  for (std::size_t k = 0; k < strings; ++k) {
    std::size_t r = k;
    for (std::size_t s = n_sites; s-- > 0;) {
      code[s] = static_cast<int>(r % 4);
      r /= 4;
    }
    // P|i> = phase(i) |i ^ flip>; Tr(m P) = sum_i m(i, i ^ flip) phase(i)
    std::size_t flip = 0;
    for (std::size_t s = 0; s < n_sites; ++s)
      if (code[s] == 1 || code[s] == 2) flip |= std::size_t{1} << (n_sites - 1 - s);
    Cplx tr{};
    for (std::size_t i = 0; i < dim; ++i) {
      Cplx ph{1.0, 0.0};
      for (std::size_t s = 0; s < n_sites; ++s) {
        const bool bit = (i >> (n_sites - 1 - s)) & 1;
        if (code[s] == 2) ph *= bit ? Cplx{0, -1} : Cplx{0, 1};
        if (code[s] == 3 && bit) ph = -ph;
      }
      tr += m(i, i ^ flip) * ph;
    }
    const double c = tr.real() * scale;
    if (std::abs(c) <= kPrune) continue;
    PauliTerm t{c, {}};
    for (int cd : code) t.ops.push_back(cd == 0 ? std::nullopt : std::optional<Direction>(kAxes[cd - 1]));
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<PauliTerm> factor_terms(const MSWitness& w) {
  for (auto d : w.dims())
    if (d != 2) throw UnsupportedDimension("factor_terms: qubit sites only");
  const double norm = w.normalization();
  std::vector<PauliTerm> out;

  auto expand = [&](const ProductObservable& p, double sign) {
    std::vector<PauliTerm> acc{PauliTerm{sign / norm, {}}};
    for (const auto& f : p.factors()) {
      const auto& nu = f.bloch.nu;
      const Direction v{nu[0], nu[1], nu[2]};
      const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      std::vector<PauliTerm> next;
      for (const auto& t : acc) {
        PauliTerm a = t;
        a.coeff *= f.bloch.nu0;
        a.ops.push_back(std::nullopt);
        next.push_back(std::move(a));
        if (r > kPrune) {
          const Direction u = canonical_direction(v);
          const double sgn = (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) > 0 ? 1.0 : -1.0;
          PauliTerm b = t;
          b.coeff *= sgn * r;
          b.ops.push_back(u);
          next.push_back(std::move(b));
        }
      }
      acc = std::move(next);
    }
    for (auto& t : acc) {
      auto it = std::find_if(out.begin(), out.end(), [&](const PauliTerm& o) { return same_ops(o, t); });
      if (it == out.end())
        out.push_back(std::move(t));
      else
        it->coeff += t.coeff;
    }
  };
  expand(w.minuend(), 1.0);
  expand(w.subtrahend(), -1.0);
  std::erase_if(out, [](const PauliTerm& t) { return std::abs(t.coeff) <= kPrune; });
  return out;
}

HermitianMatrix reconstruct(const std::vector<PauliTerm>& terms) {
  if (terms.empty()) throw DimensionMismatch("reconstruct: no terms");
  const std::size_t n = site_count(terms);
  HermitianMatrix acc = HermitianMatrix::zero(std::size_t{1} << n);
  for (const auto& t : terms) {
    std::vector<HermitianMatrix> parts;
    for (const auto& o : t.ops) parts.push_back(direction_operator(o));
    acc += t.coeff * kron_all(parts);
  }
  return acc;
}

std::string Setting::label() const {
  std::string s;
  for (const auto& d : dirs) s += d ? direction_label(d) : "*";
  return s;
}

Setting Setting::from_label(const std::string& s) {
  Setting st;
  for (char c : s) {
    switch (c) {
      case 'X': case 'x': st.dirs.push_back(kAxes[0]); break;
      case 'Y': case 'y': st.dirs.push_back(kAxes[1]); break;
      case 'Z': case 'z': st.dirs.push_back(kAxes[2]); break;
      case '*': st.dirs.push_back(std::nullopt); break;
      default: throw Error(std::string("Setting::from_label: bad character '") + c + "'");
    }
  }
  return st;
}

bool covers(const Setting& s, const PauliTerm& t) {
  if (s.dirs.size() != t.ops.size()) throw DimensionMismatch("covers: site count mismatch");
  for (std::size_t k = 0; k < t.ops.size(); ++k) {
    if (!t.ops[k]) continue;
    if (!s.dirs[k] || !parallel(*s.dirs[k], *t.ops[k])) return false;
  }
  return true;
}

std::vector<Direction> default_candidates(const std::vector<PauliTerm>& terms) {
  std::vector<Direction> out(kAxes.begin(), kAxes.end());
  for (const auto& t : terms)
    for (const auto& o : t.ops)
      if (o && std::none_of(out.begin(), out.end(), [&](const Direction& d) { return parallel(d, *o); }))
        out.push_back(canonical_direction(*o));
  return out;
}

SettingCover greedy_cover(const std::vector<PauliTerm>& terms, const std::vector<Direction>& candidates) {
  if (terms.empty()) return SettingCover{{}, {}, true};
  bool too_many = false;
  return greedy_from(enumerate_settings(terms, candidates, too_many), terms);
}

SettingCover min_cover(const std::vector<PauliTerm>& terms, const std::vector<Direction>& candidates) {
  if (terms.empty()) return SettingCover{{}, {}, true};
  bool too_many = false;
  const Candidates cs = enumerate_settings(terms, candidates, too_many);
  if (too_many || site_count(terms) > kMaxExactSites || candidates.size() > kMaxExactCandidates)
    return greedy_from(cs, terms);

  // seed the bound with greedy, then search for strictly smaller covers
  SettingCover incumbent = greedy_from(cs, terms);
  std::vector<std::size_t> best_idx;
  std::size_t best = incumbent.settings.size();
  std::vector<std::size_t> chosen;
  std::vector<int> hits(terms.size(), 0);

  std::function<void()> search = [&]() {
    std::size_t first = terms.size();
    for (std::size_t t = 0; t < terms.size(); ++t)
      if (!identity_only(terms[t]) && hits[t] == 0) {
        first = t;
        break;
      }
    if (first == terms.size()) {
      if (chosen.size() < best) {
        best = chosen.size();
        best_idx = chosen;
      }
      return;
    }
    if (chosen.size() + 1 >= best) return;
    for (std::size_t s = 0; s < cs.settings.size(); ++s) {
      if (!cs.cover[s][first]) continue;
      chosen.push_back(s);
      for (std::size_t t = 0; t < terms.size(); ++t) hits[t] += cs.cover[s][t];
      search();
      for (std::size_t t = 0; t < terms.size(); ++t) hits[t] -= cs.cover[s][t];
      chosen.pop_back();
    }
  };
  search();

  if (best_idx.empty() && best == incumbent.settings.size()) {
    incumbent.optimal = true;
    return incumbent;
  }
  std::vector<Setting> settings;
  for (auto s : best_idx) settings.push_back(cs.settings[s]);
  return finish(std::move(settings), terms, true);
}

SettingCover min_cover(const std::vector<PauliTerm>& terms) {
  return min_cover(terms, default_candidates(terms));
}

bool verify_cover(SettingCover& cover, const std::vector<PauliTerm>& terms) {
  cover.covered.assign(terms.size(), std::nullopt);
  bool ok = true;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (std::size_t s = 0; s < cover.settings.size(); ++s)
      if (covers(cover.settings[s], terms[t])) {
        cover.covered[t] = s;
        break;
      }
    if (!cover.covered[t] && !identity_only(terms[t])) ok = false;
  }
  return ok;
}

bool verify_cover(const std::vector<Setting>& settings, const std::vector<PauliTerm>& terms) {
  SettingCover c{settings, {}, false};
  return verify_cover(c, terms);
}

}  // namespace ewit
