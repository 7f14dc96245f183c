#include "ewit/io.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace ewit {

using nlohmann::json;

namespace {

std::int64_t to_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ParseError("bad integer in " + what + ": '" + s + "'");
  return v;
}

double to_double(const std::string& s, const std::string& what) {
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ParseError("bad number in " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Rational rational_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 2 || !j.contains("num") || !j.contains("den") ||
      !j["num"].is_number_integer() || !j["den"].is_number_integer())
    throw ParseError(where + ": expected {\"num\": int, \"den\": int}");
  const auto den = j["den"].get<std::int64_t>();
  if (den == 0) throw ParseError(where + ": zero denominator");
  return Rational(j["num"].get<std::int64_t>(), den);
}

json rational_to_json(const Rational& r) { return json{{"num", r.num}, {"den", r.den}}; }

std::vector<SiteForm> sites_from_json(const json& j, const std::vector<std::size_t>& dims,
                                      const std::string& which) {
  if (!j.is_array()) throw ParseError(which + ": expected an array of sites");
  if (j.size() != dims.size()) throw DimensionMismatch(which + ": site count differs from \"sites\"");
  std::vector<SiteForm> out;
  for (std::size_t s = 0; s < j.size(); ++s) {
    const auto where = which + "[" + std::to_string(s) + "]";
    const auto& e = j[s];
    if (!e.is_object() || !e.contains("nu0")) throw ParseError(where + ": missing nu0");
    for (const auto& [k, _] : e.items())
      if (k != "nu0" && k != "nu") throw ParseError(where + ": unknown key '" + k + "'");
    SiteForm f;
    f.nu0 = rational_from_json(e["nu0"], where + ".nu0");
    if (e.contains("nu")) {
      if (!e["nu"].is_object()) throw ParseError(where + ".nu: expected an object");
      const std::size_t n_gen = dims[s] * dims[s] - 1;
      for (const auto& [key, val] : e["nu"].items()) {
        const auto k = to_int(key, where + ".nu");
        if (k < 1 || static_cast<std::size_t>(k) > n_gen)
          throw DimensionMismatch(where + ".nu: index " + key + " outside 1.." + std::to_string(n_gen));
        const Rational r = rational_from_json(val, where + ".nu." + key);
        if (r.num != 0) f.nu[static_cast<std::size_t>(k)] = r;
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

json sites_to_json(const std::vector<SiteForm>& sites) {
  json arr = json::array();
  for (const auto& f : sites) {
    json nu = json::object();
    for (const auto& [k, r] : f.nu)
      if (r.num != 0) nu[std::to_string(k)] = rational_to_json(r);
    arr.push_back(json{{"nu0", rational_to_json(f.nu0)}, {"nu", nu}});
  }
  return arr;
}

Cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError(where + ": expected a number or [re, im]");
}

ParsedState from_pure(StateVector v) {
  ParsedState s{v.dims(), v.density(), std::nullopt};
  s.pure = std::move(v);
  return s;
}

ParsedState parse_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("state file '" + path.string() + "': " + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j["dims"].is_array())
    throw ParseError("state file: missing \"dims\"");
  std::vector<std::size_t> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_unsigned() || d.get<std::size_t>() < 2) throw ParseError("state file: bad site dim");
    dims.push_back(d.get<std::size_t>());
  }
  const std::size_t dim = total_dim(dims);
  if (j.contains("amplitudes")) {
    const auto& a = j["amplitudes"];
    if (!a.is_array()) throw ParseError("state file: amplitudes must be an array");
    if (a.size() != dim) throw DimensionMismatch("state file: amplitude count does not match dims");
    CVector v;
    for (const auto& e : a) v.push_back(complex_from_json(e, "amplitudes"));
    return from_pure(StateVector::normalized(dims, std::move(v)));
  }
  if (j.contains("density")) {
    const auto& rows = j["density"];
    if (!rows.is_array() || rows.size() != dim) throw DimensionMismatch("state file: density size mismatch");
    Matrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      if (!rows[r].is_array() || rows[r].size() != dim)
        throw DimensionMismatch("state file: density row size mismatch");
      for (std::size_t c = 0; c < dim; ++c) m(r, c) = complex_from_json(rows[r][c], "density");
    }
    HermitianMatrix rho(m, 1e-10);
    if (!is_density_matrix(rho)) throw ParseError("state file: density is not a density matrix");
    return ParsedState{dims, std::move(rho), std::nullopt};
  }
  throw ParseError("state file: needs \"amplitudes\" or \"density\"");
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw ParseError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

BlochForm SiteForm::to_bloch(std::size_t d) const {
  BlochForm b = BlochForm::zero(static_cast<int>(d));
  b.nu0 = nu0.value();
  for (const auto& [k, r] : nu) {
    if (k < 1 || k > b.nu.size()) throw DimensionMismatch("site form index out of range");
    b.nu[k - 1] = r.value();
  }
  return b;
}

MSWitness WitnessFile::to_witness() const {
  if (minuend.size() != site_dims.size() || subtrahend.size() != site_dims.size())
    throw DimensionMismatch("witness file: site count mismatch");
  std::vector<BlochForm> m, s;
  for (std::size_t k = 0; k < site_dims.size(); ++k) {
    m.push_back(minuend[k].to_bloch(site_dims[k]));
    s.push_back(subtrahend[k].to_bloch(site_dims[k]));
  }
  return MSWitness::from_bloch(m, s, norm_mode);
}

const char* to_string(NormMode m) { return m == NormMode::Raw ? "raw" : "trace_diff"; }

NormMode parse_norm_mode(const std::string& s) {
  if (s == "raw") return NormMode::Raw;
  if (s == "trace_diff") return NormMode::TraceDiff;
  throw ParseError("norm mode must be raw or trace_diff, got '" + s + "'");
}

WitnessFile parse_witness_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("witness file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("witness file: top level must be an object");
  for (const char* key : {"sites", "minuend", "subtrahend"})
    if (!j.contains(key)) throw ParseError(std::string("witness file: missing \"") + key + "\"");
  for (const auto& [k, _] : j.items())
    if (k != "sites" && k != "minuend" && k != "subtrahend" && k != "norm_mode")
      throw ParseError("witness file: unknown key '" + k + "'");

  WitnessFile w;
  if (!j["sites"].is_array() || j["sites"].size() < 2) throw ParseError("witness file: need at least two sites");
  for (const auto& s : j["sites"]) {
    if (!s.is_object() || !s.contains("d") || !s["d"].is_number_unsigned())
      throw ParseError("witness file: each site needs an unsigned \"d\"");
    const auto d = s["d"].get<std::size_t>();
    if (d < 2 || d > 8) throw DimensionMismatch("witness file: site dim must be in 2..8");
    w.site_dims.push_back(d);
  }
  w.minuend = sites_from_json(j["minuend"], w.site_dims, "minuend");
  w.subtrahend = sites_from_json(j["subtrahend"], w.site_dims, "subtrahend");
  if (j.contains("norm_mode")) {
    if (!j["norm_mode"].is_string()) throw ParseError("witness file: norm_mode must be a string");
    w.norm_mode = parse_norm_mode(j["norm_mode"].get<std::string>());
  }
  return w;
}

WitnessFile load_witness_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open witness file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_witness_file(ss.str());
}

std::string serialize_witness_file(const WitnessFile& w) {
  json sites = json::array();
  for (auto d : w.site_dims) sites.push_back(json{{"d", d}});
  const json j{{"sites", sites},
               {"minuend", sites_to_json(w.minuend)},
               {"subtrahend", sites_to_json(w.subtrahend)},
               {"norm_mode", to_string(w.norm_mode)}};
  return j.dump(2) + "\n";
}

ParsedState parse_state_spec(const std::string& spec_in) {
  std::string spec = spec_in;
  std::optional<double> noise;
  if (const auto at = spec.rfind('@'); at != std::string::npos) {
    noise = to_double(spec.substr(at + 1), "noise suffix");
    if (!(*noise >= 0.0 && *noise <= 1.0)) throw ParseError("noise weight must lie in [0, 1]");
    spec = spec.substr(0, at);
  }

  ParsedState st = [&]() -> ParsedState {
    const auto parts = split(spec, ':');
    const auto& kind = parts[0];
    if (kind == "bell" && parts.size() == 2) {
      const auto& b = parts[1];
      if (b == "phi+") return from_pure(bell(BellState::PhiPlus));
      if (b == "phi-") return from_pure(bell(BellState::PhiMinus));
      if (b == "psi+") return from_pure(bell(BellState::PsiPlus));
      if (b == "psi-") return from_pure(bell(BellState::PsiMinus));
      throw ParseError("unknown Bell state '" + b + "'");
    }
    if ((kind == "ghz" || kind == "w") && parts.size() == 2) {
      const auto n = to_int(parts[1], kind);
      if (n < 2 || n > 6) throw DimensionMismatch(kind + ": qubit count must be in 2..6");
      return from_pure(kind == "ghz" ? ghz(static_cast<int>(n)) : w_state(static_cast<int>(n)));
    }
    if (kind == "gbell" && parts.size() == 4) {
      const auto d = to_int(parts[1], "gbell");
      if (d < 2 || d > 8) throw DimensionMismatch("gbell: d must be in 2..8");
      return from_pure(generalized_bell(static_cast<int>(d), static_cast<int>(to_int(parts[2], "gbell")),
                                        static_cast<int>(to_int(parts[3], "gbell"))));
    }
    if (std::filesystem::exists(spec)) return parse_state_file(spec);
    throw ParseError("unrecognized state spec '" + spec_in + "'");
  }();

  if (noise && *noise > 0.0) {
    if (!st.pure) throw ParseError("noise suffix needs a pure state");
    st.rho = white_noise(*st.pure, *noise);
    st.pure.reset();
  }
  return st;
}

}  // namespace ewit
