// io.hpp - witness files with exact rational coefficients and compact state
// descriptors.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ewit/states.hpp"
#include "ewit/witness.hpp"

namespace ewit {

/// Malformed input (exit code 2 at the command line).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Reduced fraction with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// One site of a witness file: nu0 and the nonzero nu_k keyed by 1-based k.
struct SiteForm {
  Rational nu0;
  std::map<std::size_t, Rational> nu;

  BlochForm to_bloch(std::size_t d) const;
  friend bool operator==(const SiteForm&, const SiteForm&) = default;
};

struct WitnessFile {
  std::vector<std::size_t> site_dims;
  std::vector<SiteForm> minuend;
  std::vector<SiteForm> subtrahend;
  NormMode norm_mode = NormMode::Raw;

  MSWitness to_witness() const;
  friend bool operator==(const WitnessFile&, const WitnessFile&) = default;
};

/// Throws ParseError on malformed JSON or schema violations, and
/// DimensionMismatch on inconsistent site data.
WitnessFile parse_witness_file(const std::string& text);
WitnessFile load_witness_file(const std::filesystem::path& path);
/// Canonical form: sorted keys, two-space indent, trailing newline.
std::string serialize_witness_file(const WitnessFile& w);

const char* to_string(NormMode m);
NormMode parse_norm_mode(const std::string& s);

struct ParsedState {
  std::vector<std::size_t> dims;
  HermitianMatrix rho;
  std::optional<StateVector> pure;  ///< set when the state is a pure vector
};

/// bell:phi+|phi-|psi+|psi-, ghz:N, w:N, gbell:d:m:n, or a JSON file with
/// {"dims": [...], "amplitudes": [[re, im], ...]} or {"dims": [...],
/// "density": [[[re, im], ...], ...]}. A suffix "@eps" mixes in white noise.
ParsedState parse_state_spec(const std::string& spec);

}  // namespace ewit
