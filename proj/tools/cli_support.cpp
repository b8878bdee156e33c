#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfz/io.hpp"

namespace pfz::cli {

namespace {

double parse_number(const std::string& raw) {
  std::string s = raw;
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw Error(ErrorKind::invalid_spec, "not a finite number: '" + raw + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_spec:
    case ErrorKind::domain_error:
    case ErrorKind::grid_too_small:
    case ErrorKind::insufficient_data:
    case ErrorKind::range_exceeded:
      return usage;
    default:
      return numerical;
  }
}

RhoSpec params_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_spec, "params must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "omega" && key != "d" && key != "coeffs" && key != "m")
      throw Error(ErrorKind::invalid_spec, "unknown params field '" + key + "'");
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw Error(ErrorKind::invalid_spec, std::string("params needs a number '") + key + "'");
    return j[key].get<double>();
  };
  std::vector<double> coeffs;
  if (j.contains("coeffs")) {
    if (!j["coeffs"].is_array()) throw Error(ErrorKind::invalid_spec, "params 'coeffs' must be an array");
    for (const auto& c : j["coeffs"]) {
      if (!c.is_number()) throw Error(ErrorKind::invalid_spec, "params 'coeffs' must hold numbers");
      coeffs.push_back(c.get<double>());
    }
  }
  int m = 0;
  if (j.contains("m")) {
    if (!j["m"].is_number_integer() || j["m"].get<long>() < 0 || j["m"].get<long>() > 1000)
      throw Error(ErrorKind::invalid_spec, "params 'm' must be a nonnegative integer");
    m = j["m"].get<int>();
  }
  RhoSpec spec{SchoenbergParams(number("omega"), number("d"), std::move(coeffs)), m};
  spec.validate();
  return spec;
}

json params_to_json(const RhoSpec& spec) {
  return {{"omega", spec.params.omega()}, {"d", spec.params.d()}, {"coeffs", spec.params.coeffs()}, {"m", spec.m}};
}

RhoSpec load_params(const std::string& text_or_path) {
  const auto first = text_or_path.find_first_not_of(" \t\n");
  const bool inline_json = first != std::string::npos && text_or_path[first] == '{';
  const std::string text = inline_json ? text_or_path : read_file(text_or_path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_spec, std::string("params JSON: ") + e.what());
  }
  return params_from_json(j);
}

std::vector<double> parse_grid(const std::string& text) {
  const auto fields = split(text, ':');
  if (fields.size() == 3) {
    const double a = parse_number(fields[0]);
    const double b = parse_number(fields[1]);
    const double n = parse_number(fields[2]);
    if (n < 1 || n != std::floor(n) || n > 1e7) throw Error(ErrorKind::invalid_spec, "grid count must be a positive integer: " + text);
    const int count = static_cast<int>(n);
    if (count == 1) return {a};
    std::vector<double> out(count);
    for (int k = 0; k < count; ++k) out[k] = a + (b - a) * k / (count - 1);
    out.back() = b;
    return out;
  }
  if (fields.size() != 1) throw Error(ErrorKind::invalid_spec, "grid must be A:B:N or a comma list: " + text);
  std::vector<double> out;
  for (const auto& f : split(text, ',')) out.push_back(parse_number(f));
  if (out.empty()) throw Error(ErrorKind::invalid_spec, "empty grid");
  return out;
}

std::complex<double> parse_complex(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_number(parts[0]), 0.0};
  if (parts.size() == 2) return {parse_number(parts[0]), parse_number(parts[1])};
  throw Error(ErrorKind::invalid_spec, "expected RE or RE,IM: " + text);
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string Envelope::compute_hash() const {
  std::uint64_t h = fnv1a(config.dump());
  h = fnv1a(payload.dump(), h);
  for (const auto& f : payload_files) h = fnv1a(read_file(f), h);
  return hex64(h);
}

json Envelope::to_json() const {
  return {{"command", command}, {"config", config},       {"version", version},        {"wall_time_s", wall_time},
          {"payload", payload}, {"payload_files", payload_files}, {"hash", hash}};
}

std::string write_envelope(Envelope& env, const std::string& outdir) {
  env.hash = env.compute_hash();
  const std::string path = (std::filesystem::path(outdir) / (env.command + ".json")).string();
  io::write_text(path, env.to_json().dump(2) + "\n");
  return path;
}

ResultCache::ResultCache(std::string outdir, std::string key_material)
    : dir_((std::filesystem::path(outdir) / "cache").string()), key_(hex64(fnv1a(key_material))) {}

std::optional<json> ResultCache::load() const {
  const auto path = std::filesystem::path(dir_) / (key_ + ".json");
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return json::parse(read_file(path.string()));
  } catch (const json::parse_error&) {
    // A truncated entry is treated as a miss and overwritten.
    return std::nullopt;
  }
}

void ResultCache::store(const json& entry) const {
  io::write_text((std::filesystem::path(dir_) / (key_ + ".json")).string(), entry.dump() + "\n");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_spec, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace pfz::cli
