#pragma once

// Plumbing shared by the command-line tool: params JSON, grid strings,
// content hashing, result envelopes and the zero-table cache.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pfz/errors.hpp"
#include "pfz/rho.hpp"

namespace pfz::cli {

using nlohmann::json;

/// Exit codes of the tool.
enum ExitCode : int { ok = 0, usage = 1, numerical = 2, tp_violation = 3, reality_failure = 4 };

/// Validation problems (bad input) exit with 1, everything else with 2.
int exit_code_for(ErrorKind kind);

/// {"omega", "d", "coeffs", "m"}; coeffs and m may be omitted (empty, 0).
RhoSpec params_from_json(const json& j);
json params_to_json(const RhoSpec& spec);
/// Accepts inline JSON (first non-blank character '{') or a file path.
RhoSpec load_params(const std::string& text_or_path);

/// "A:B:N" -> N equally spaced points from A to B inclusive, or a comma
/// separated list of numbers.
std::vector<double> parse_grid(const std::string& text);
/// "RE,IM" or a single real number.
std::complex<double> parse_complex(const std::string& text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t state = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

struct Envelope {
  std::string command;
  json config;
  std::string version;
  double wall_time = 0.0;
  /// Inline report; payload_files lists the CSV files written beside it.
  json payload;
  std::vector<std::string> payload_files;
  std::string hash;

  /// Hash over the serialized config, the inline payload and the contents
  /// of the payload files, in that order. Wall time is excluded.
  std::string compute_hash() const;
  json to_json() const;
};

/// Stores the envelope as <outdir>/<command>.json (hash filled in) and
/// returns the path.
std::string write_envelope(Envelope& env, const std::string& outdir);

/// Cache of deterministic results under <outdir>/cache, keyed by the hash of
/// command, config and version.
class ResultCache {
 public:
  ResultCache(std::string outdir, std::string key_material);
  const std::string& key() const { return key_; }
  std::optional<json> load() const;
  void store(const json& entry) const;

 private:
  std::string dir_;
  std::string key_;
};

std::string read_file(const std::string& path);

}  // namespace pfz::cli
