#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "pfz/io.hpp"
#include "pfz/parallel.hpp"
#include "pfz/pfreq.hpp"
#include "pfz/randmat.hpp"
#include "pfz/rho.hpp"
#include "pfz/xi.hpp"
#include "pfz/ztransform.hpp"

#ifndef PFZ_VERSION
#define PFZ_VERSION "unknown"
#endif

using namespace pfz;
using namespace pfz::cli;

namespace {

std::string fmt(double v) { return io::format_double(v); }

json complex_json(std::complex<double> v) { return json::array({v.real(), v.imag()}); }

struct Common {
  std::string outdir = "pfz_out";
  int threads = default_threads();
  bool force = false;
  std::string precision = "native";
  double abs_tol = QuadratureConfig{}.abs_tol;
  double rel_tol = QuadratureConfig{}.rel_tol;
  int panel_order = QuadratureConfig{}.panel_order;

  QuadratureConfig qc() const {
    QuadratureConfig q;
    q.abs_tol = abs_tol;
    q.rel_tol = rel_tol;
    q.panel_order = panel_order;
    q.validate();
    return q;
  }
  PrecisionConfig pc() const {
    PrecisionConfig p;
    if (precision == "dd" || precision == "extended")
      p.mode = PrecisionMode::extended;
    else if (precision != "native")
      throw Error(ErrorKind::invalid_spec, "precision must be native, dd or extended");
    return p;
  }
  json snapshot() const {
    return {{"precision", pc().mode == PrecisionMode::extended ? "extended" : "native"},
            {"abs_tol", abs_tol},
            {"rel_tol", rel_tol},
            {"panel_order", panel_order}};
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.outdir, "Output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--force", c.force, "Recompute even when the cache has the result");
  sub->add_option("--precision", c.precision, "native | dd | extended")->capture_default_str();
  sub->add_option("--abs-tol", c.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
  sub->add_option("--rel-tol", c.rel_tol, "Quadrature relative tolerance")->capture_default_str();
  sub->add_option("--panel-order", c.panel_order, "Gauss-Legendre panel order")->capture_default_str();
}

ZRoute route_from_string(const std::string& s) {
  if (s == "auto") return ZRoute::automatic;
  if (s == "quadrature") return ZRoute::quadrature;
  if (s == "closed-form") return ZRoute::closed_form;
  throw Error(ErrorKind::invalid_spec, "route must be auto, quadrature or closed-form");
}

ZOptions z_options(const Common& c, const std::string& route) {
  ZOptions o;
  o.route = route_from_string(route);
  o.qc = c.qc();
  o.pc = c.pc();
  o.scan.threads = c.threads;
  o.contour.threads = c.threads;
  return o;
}

XiConfig xi_config(const Common& c) {
  XiConfig x;
  x.qc = c.qc();
  x.pc = c.pc();
  x.scan.threads = c.threads;
  x.contour.threads = c.threads;
  return x;
}

std::string out_path(const Common& c, const std::string& name) {
  return (std::filesystem::path(c.outdir) / name).string();
}

json zero_table_json(const ZeroTable& t) {
  json rows = json::array();
  for (const auto& r : t.zeros)
    rows.push_back({{"z", r.z}, {"residual", r.residual}, {"derivative", r.derivative}, {"noise", r.noise}, {"accepted", r.accepted}});
  return {{"b", t.b},       {"scan_lo", t.scan_lo}, {"z_max", t.z_max},       {"step", t.step},
          {"zeros", rows},  {"warnings", t.warnings}, {"method", t.method}, {"evaluations", t.evaluations}};
}

io::Table zero_table_csv(const std::vector<ZeroTable>& tables) {
  io::Table t{{"b", "k", "z_k", "residual", "derivative"}, {}};
  for (const auto& table : tables)
    for (std::size_t k = 0; k < table.zeros.size(); ++k) {
      const auto& r = table.zeros[k];
      t.rows.push_back({fmt(table.b), std::to_string(k + 1), fmt(r.z), fmt(r.residual), fmt(r.derivative)});
    }
  return t;
}

json flow_json(const FlowResult& f) {
  json tables = json::array();
  for (const auto& t : f.tables) tables.push_back(zero_table_json(t));
  return {{"b_grid", f.b_grid}, {"zero_counts", f.zero_counts}, {"ambiguities", f.ambiguities}, {"tables", tables}};
}

io::Table flow_csv(const FlowResult& f) {
  io::Table t{{"zero_index", "b", "z", "discontinuity", "ambiguous"}, {}};
  for (const auto& p : f.points)
    t.rows.push_back({std::to_string(p.zero_index), fmt(p.b), fmt(p.z), p.discontinuity ? "1" : "0", p.ambiguous ? "1" : "0"});
  return t;
}

json tp_json(const TPReport& r) {
  json orders = json::array();
  for (const auto& o : r.orders)
    orders.push_back({{"order", o.order},
                      {"min_minor", o.min_minor},
                      {"tol", o.tol},
                      {"violation", o.violation},
                      {"sampled", o.sampled},
                      {"minors_evaluated", o.minors_evaluated},
                      {"min_rows", o.min_rows},
                      {"min_cols", o.min_cols}});
  return {{"max_order_checked", r.max_order_checked}, {"min_minor", r.min_minor}, {"min_rows", r.min_rows},
          {"min_cols", r.min_cols},                   {"violation", r.violation}, {"seed", r.seed},
          {"orders", orders}};
}

json spacing_json(const SpacingReport& r) {
  return {{"reference", r.reference}, {"ks_distance", r.ks_distance}, {"sample_size", r.sample_size},
          {"mean_spacing", r.mean_spacing}, {"bin_edges", r.bin_edges}, {"counts", r.counts}, {"notes", r.notes}};
}

std::vector<SpectralSample> spectra_from_table(const io::Table& t) {
  const int si = t.column("sample"), ei = t.column("eigenvalue");
  if (si < 0 || ei < 0) throw Error(ErrorKind::invalid_spec, "spectra CSV needs columns sample and eigenvalue");
  const auto samples = t.numeric_column(si);
  const auto values = t.numeric_column(ei);
  std::map<long, std::vector<double>> by_sample;
  for (std::size_t k = 0; k < values.size(); ++k) by_sample[static_cast<long>(samples[k])].push_back(values[k]);
  std::vector<SpectralSample> out;
  for (auto& [id, ev] : by_sample) {
    std::sort(ev.begin(), ev.end());
    out.push_back({std::move(ev)});
  }
  return out;
}

HermitianMatrix matrix_from_csv(const std::string& path, int n) {
  const io::Table t = io::read_csv(path);
  const int ri = t.column("row"), ci = t.column("col"), re = t.column("re"), im = t.column("im");
  if (ri < 0 || ci < 0 || re < 0) throw Error(ErrorKind::invalid_spec, "X CSV needs columns row, col, re (and optionally im)");
  const auto rows = t.numeric_column(ri), cols = t.numeric_column(ci), res = t.numeric_column(re);
  const std::vector<double> ims = im >= 0 ? t.numeric_column(im) : std::vector<double>(res.size(), 0.0);
  std::vector<std::complex<double>> values(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<bool> seen(values.size(), false);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int i = static_cast<int>(rows[k]), j = static_cast<int>(cols[k]);
    if (i != rows[k] || j != cols[k] || i < 0 || j < 0 || i >= n || j >= n)
      throw Error(ErrorKind::invalid_spec, "X entry index out of range in " + path);
    values[i * n + j] = {res[k], ims[k]};
    seen[i * n + j] = true;
    // Entries given on one side only are mirrored.
    if (!seen[j * n + i]) values[j * n + i] = std::conj(values[i * n + j]);
  }
  return HermitianMatrix::from_entries(n, values, 1e-12);
}

class Runner {
 public:
  Runner(std::string command, const Common& c) : c_(c) {
    env_.command = std::move(command);
    env_.version = PFZ_VERSION;
    start_ = std::chrono::steady_clock::now();
  }

  json& config() { return env_.config; }

  // Looks up a cached payload for deterministic commands; on a hit the CSV
  // files recorded with it are restored.
  bool restore_from_cache() {
    if (c_.force) return false;
    const auto hit = cache().load();
    if (!hit) return false;
    env_.payload = (*hit)["payload"];
    for (const auto& [name, text] : (*hit)["files"].items()) add_file(name, text.get<std::string>());
    cached_ = true;
    return true;
  }

  void store_in_cache() const {
    json files = json::object();
    for (const auto& f : env_.payload_files) files[std::filesystem::path(f).filename().string()] = read_file(f);
    cache().store({{"payload", env_.payload}, {"files", files}});
  }

  void set_payload(json p) { env_.payload = std::move(p); }
  const json& payload() const { return env_.payload; }
  bool cached() const { return cached_; }

  void add_file(const std::string& name, const std::string& text) {
    const std::string path = out_path(c_, name);
    io::write_text(path, text);
    env_.payload_files.push_back(path);
  }
  void add_csv(const std::string& name, const io::Table& t) { add_file(name, io::to_csv(t)); }

  void finish() {
    env_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const std::string path = write_envelope(env_, c_.outdir);
    std::cout << "envelope: " << path << " hash " << env_.hash << (cached_ ? " (cached)" : "") << "\n";
  }

 private:
  ResultCache cache() const { return ResultCache(c_.outdir, env_.command + "\n" + env_.config.dump() + "\n" + env_.version); }

  const Common& c_;
  Envelope env_;
  std::chrono::steady_clock::time_point start_;
  bool cached_ = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polya frequency characteristic functions, Newman transforms and their zeros"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PFZ_VERSION));

  Common common;
  std::string params_arg, density_arg, grid_arg, a_grid_arg, t_arg, z_arg = "0", b_grid_arg, x_path, input_path, spectra_path;
  std::string route = "auto", reference = "gue";
  double b = 0.0, zmax = 20.0, height = 3.0, bulk = 0.5;
  int order = 3, n = 0, samples = 0, window = 9;
  std::uint64_t seed = 0;

  auto* p_eval = app.add_subcommand("p-eval", "Evaluate the characteristic function p(t)");
  p_eval->add_option("--params", params_arg, "Params JSON file or inline JSON")->required();
  p_eval->add_option("--t", t_arg, "t as RE or RE,IM")->required();

  auto* pf_eval = app.add_subcommand("pf-eval", "Tabulate the density f on a grid (CSV)");
  pf_eval->add_option("--params", params_arg)->required();
  pf_eval->add_option("--a-grid", a_grid_arg, "A:B:N or a comma list")->required();

  auto* tp_check = app.add_subcommand("tp-check", "Check kernel minors det f(x_i - y_j) (exit 3 on violation)");
  auto* tp_params = tp_check->add_option("--params", params_arg);
  auto* tp_density = tp_check->add_option("--density", density_arg, "Two-column CSV (abscissa, value)");
  tp_params->excludes(tp_density);
  tp_check->add_option("--grid", grid_arg, "A:B:N or a comma list, used for rows and columns")->required();
  tp_check->add_option("--order", order, "Largest minor order (1..5)")->capture_default_str();

  auto* rho_mass = app.add_subcommand("rho-mass", "Total mass of the measure rho");
  rho_mass->add_option("--params", params_arg)->required();

  auto* z_eval = app.add_subcommand("z-eval", "Evaluate Z_b(z) with its cancellation diagnostic");
  z_eval->add_option("--params", params_arg)->required();
  z_eval->add_option("--b", b)->capture_default_str();
  z_eval->add_option("--z", z_arg, "z as RE or RE,IM")->required();

  auto* z_zeros = app.add_subcommand("z-zeros", "Real zeros of Z_b on [0, zmax] (CSV and JSON)");
  auto* z_verify = app.add_subcommand("z-verify", "Compare real zeros with the argument-principle count (exit 4 on mismatch)");
  auto* z_flow = app.add_subcommand("z-flow", "Zero trajectories over a grid of b (CSV)");
  for (auto* sub : {z_zeros, z_verify, z_flow}) {
    sub->add_option("--params", params_arg)->required();
    sub->add_option("--zmax", zmax)->capture_default_str();
    sub->add_option("--route", route, "auto | quadrature | closed-form")->capture_default_str();
  }
  z_zeros->add_option("--b", b)->capture_default_str();
  z_verify->add_option("--b", b)->capture_default_str();
  z_verify->add_option("--height", height)->capture_default_str();
  z_flow->add_option("--b-grid", b_grid_arg, "A:B:N or a comma list")->required();
  z_eval->add_option("--route", route, "auto | quadrature | closed-form")->capture_default_str();

  auto* gue_sample = app.add_subcommand("gue-sample", "Sample GUE spectra (CSV)");
  gue_sample->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  gue_sample->add_option("--samples", samples)->required()->check(CLI::PositiveNumber);
  gue_sample->add_option("--seed", seed)->required();

  auto* gue_char = app.add_subcommand("gue-char", "Monte Carlo E exp(i tr XA) against prod p(t_j)");
  gue_char->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  gue_char->add_option("--X", x_path, "CSV with columns row, col, re, im")->required();
  gue_char->add_option("--samples", samples)->required()->check(CLI::PositiveNumber);
  gue_char->add_option("--seed", seed)->required();

  auto* spacings = app.add_subcommand("spacings", "Nearest-neighbor spacing report for spectra or zeros");
  spacings->add_option("--input", input_path, "Spectra CSV (sample, eigenvalue) or zeros CSV (z_k)")->required();
  spacings->add_option("--reference", reference, "gue | poisson | spectral")->capture_default_str();
  spacings->add_option("--spectra", spectra_path, "Spectra CSV for the spectral reference");
  spacings->add_option("--bulk", bulk, "Central fraction of each spectrum")->capture_default_str();
  spacings->add_option("--window", window, "Unfolding window for zeros")->capture_default_str();

  auto* xi_zeros_cmd = app.add_subcommand("xi-zeros", "Zeros of the Riemann xi function on [0, zmax]");
  xi_zeros_cmd->add_option("--zmax", zmax)->capture_default_str();
  auto* xi_flow_cmd = app.add_subcommand("xi-flow", "Zero trajectories of the deformed xi over a grid of b");
  xi_flow_cmd->add_option("--zmax", zmax)->capture_default_str();
  xi_flow_cmd->add_option("--b-grid", b_grid_arg)->required();

  for (auto* sub : {p_eval, pf_eval, tp_check, rho_mass, z_eval, z_zeros, z_verify, z_flow, gue_sample, gue_char, spacings,
                    xi_zeros_cmd, xi_flow_cmd})
    add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  int status = ok;
  try {
    Runner run(cmd->get_name(), common);
    json& cfg = run.config();
    cfg["options"] = common.snapshot();
    std::optional<RhoSpec> spec;
    if (!params_arg.empty()) {
      spec = load_params(params_arg);
      cfg["params"] = params_to_json(*spec);
      const ValidationReport vr = validate(spec->params);
      for (const auto& note : vr.notes) std::cerr << "note: " << note << "\n";
    }

    if (cmd == p_eval) {
      const auto t = parse_complex(t_arg);
      cfg["t"] = complex_json(t);
      const auto p = eval_p(spec->params, t);
      run.set_payload({{"p", complex_json(p)}});
      std::cout << "p(" << fmt(t.real()) << (t.imag() < 0 ? "" : "+") << fmt(t.imag()) << "i) = " << fmt(p.real())
                << (p.imag() < 0 ? "" : "+") << fmt(p.imag()) << "i\n";
    } else if (cmd == pf_eval) {
      const auto grid = parse_grid(a_grid_arg);
      cfg["a_grid"] = grid;
      const auto qc = common.qc();
      const auto pc = common.pc();
      const auto values = parallel_map(grid.size(), common.threads, [&](std::size_t k) { return eval_f(spec->params, grid[k], qc, pc); });
      io::Table t{{"a", "f"}, {}};
      for (std::size_t k = 0; k < grid.size(); ++k) t.rows.push_back({fmt(grid[k]), fmt(values[k])});
      run.add_csv("pf_eval.csv", t);
      run.set_payload({{"points", grid.size()}});
      std::cout << "f tabulated at " << grid.size() << " points\n";
    } else if (cmd == tp_check) {
      if (!spec && density_arg.empty()) throw Error(ErrorKind::invalid_spec, "tp-check needs --params or --density");
      const auto grid = parse_grid(grid_arg);
      cfg["grid"] = grid;
      cfg["order"] = order;
      DensitySource src;
      if (spec) {
        src = schoenberg_source(spec->params, common.qc());
      } else {
        cfg["density_csv_hash"] = hex64(fnv1a(read_file(density_arg)));
        src = tabulated_source_from_csv(density_arg);
      }
      const TPReport r = check_pf_minors(src, grid, grid, order);
      run.set_payload(tp_json(r));
      std::cout << (r.violation ? "VIOLATION" : "no violation") << ": minimum minor " << fmt(r.min_minor) << " up to order "
                << r.max_order_checked << "\n";
      if (r.violation) status = tp_violation;
    } else if (cmd == rho_mass) {
      const QuadratureResult r = total_mass(*spec, common.qc(), common.pc());
      run.set_payload({{"mass", r.value.real()}, {"error", r.error}, {"precision", to_string(r.precision)}});
      std::cout << "mass = " << fmt(r.value.real()) << " +- " << fmt(r.error) << "\n";
    } else if (cmd == z_eval) {
      const auto z = parse_complex(z_arg);
      cfg["b"] = b;
      cfg["z"] = complex_json(z);
      cfg["route"] = route;
      const ZSpec zs{*spec, b};
      zs.validate();
      json out;
      if (resolve_route(zs, route_from_string(route)) == ZRoute::closed_form) {
        const ScaledValue v = eval_closed_form(zs, z);
        out = {{"route", "closed_form"},
               {"value", complex_json(v.value())},
               {"mantissa", complex_json(v.mantissa)},
               {"log_scale", complex_json(v.log_scale)},
               {"noise", v.noise}};
        std::cout << "Z = " << fmt(v.value().real()) << " " << fmt(v.value().imag()) << "i (closed form)\n";
      } else {
        const ZValue v = eval_quadrature(zs, z, common.qc(), common.pc());
        out = {{"route", "quadrature"},
               {"value", complex_json(v.value)},
               {"error", v.error},
               {"abs_integral", v.abs_integral},
               {"cancellation_ratio", v.cancellation_ratio},
               {"escalated", v.escalated},
               {"precision", to_string(v.precision)}};
        std::cout << "Z = " << fmt(v.value.real()) << " " << fmt(v.value.imag()) << "i +- " << fmt(v.error)
                  << ", cancellation " << fmt(v.cancellation_ratio) << " (" << to_string(v.precision) << ")\n";
      }
      run.set_payload(out);
    } else if (cmd == z_zeros || cmd == xi_zeros_cmd) {
      cfg["zmax"] = zmax;
      if (cmd == z_zeros) {
        cfg["b"] = b;
        cfg["route"] = route;
      }
      if (!run.restore_from_cache()) {
        const ZeroTable t = cmd == z_zeros ? find_real_zeros(ZSpec{*spec, b}, zmax, z_options(common, route))
                                           : xi_zeros(zmax, xi_config(common));
        run.add_csv("zeros.csv", zero_table_csv({t}));
        run.set_payload(zero_table_json(t));
        run.store_in_cache();
      }
      const auto& zs = run.payload()["zeros"];
      std::cout << zs.size() << " real zeros on [0, " << fmt(zmax) << "]";
      for (const auto& r : zs) std::cout << " " << fmt(r["z"].get<double>());
      std::cout << "\n";
    } else if (cmd == z_verify) {
      cfg["b"] = b;
      cfg["zmax"] = zmax;
      cfg["height"] = height;
      cfg["route"] = route;
      const RealityReport r = verify_reality(ZSpec{*spec, b}, zmax, height, z_options(common, route));
      run.set_payload({{"pass", r.pass},
                       {"real_count", r.real_count},
                       {"rect_count", r.rect_count},
                       {"delta", r.delta},
                       {"z_max", r.z_max},
                       {"height", r.height},
                       {"distance_from_integer", r.distance_from_integer},
                       {"perturbed_edges", r.perturbed_edges},
                       {"table", zero_table_json(r.table)}});
      std::cout << (r.pass ? "PASS" : "FAIL") << ": " << r.real_count << " real zeros, " << r.rect_count
                << " by the argument principle on [" << fmt(r.delta) << ", " << fmt(r.z_max) << "] x [-" << fmt(height)
                << ", " << fmt(height) << "]\n";
      if (!r.pass) status = reality_failure;
    } else if (cmd == z_flow || cmd == xi_flow_cmd) {
      const auto grid = parse_grid(b_grid_arg);
      cfg["b_grid"] = grid;
      cfg["zmax"] = zmax;
      if (cmd == z_flow) cfg["route"] = route;
      if (!run.restore_from_cache()) {
        const FlowResult f = cmd == z_flow ? flow_zeros(ZSpec{*spec, 0.0}, grid, zmax, z_options(common, route))
                                           : xi_flow(grid, zmax, xi_config(common));
        run.add_csv("trajectories.csv", flow_csv(f));
        run.add_csv("zeros.csv", zero_table_csv(f.tables));
        run.set_payload(flow_json(f));
        run.store_in_cache();
      }
      std::cout << "zero counts along b:";
      for (const auto& k : run.payload()["zero_counts"]) std::cout << " " << k.get<int>();
      std::cout << "; " << run.payload()["ambiguities"].size() << " ambiguous matches\n";
    } else if (cmd == gue_sample) {
      cfg["n"] = n;
      cfg["samples"] = samples;
      cfg["seed"] = seed;
      const auto spectra = sample_gue_spectra(n, samples, seed, common.threads);
      io::Table t{{"sample", "index", "eigenvalue"}, {}};
      for (std::size_t s = 0; s < spectra.size(); ++s)
        for (std::size_t i = 0; i < spectra[s].eigenvalues.size(); ++i)
          t.rows.push_back({std::to_string(s), std::to_string(i), fmt(spectra[s].eigenvalues[i])});
      run.add_csv("spectra.csv", t);
      run.set_payload({{"spectra", spectra.size()}, {"n", n}});
      std::cout << spectra.size() << " GUE spectra of size " << n << "\n";
    } else if (cmd == gue_char) {
      const HermitianMatrix x = matrix_from_csv(x_path, n);
      json entries = json::array();
      for (const auto& v : x.entries) entries.push_back(complex_json(v));
      cfg["X"] = entries;
      cfg["samples"] = samples;
      cfg["seed"] = seed;
      const CharFnEstimate e = empirical_char_fn(x, samples, seed, common.threads);
      run.set_payload({{"empirical", complex_json(e.mean)},
                       {"standard_error", e.standard_error},
                       {"predicted", complex_json(e.predicted)},
                       {"deviation_in_sigma", e.deviation_in_sigma}});
      std::cout << "empirical " << fmt(e.mean.real()) << " " << fmt(e.mean.imag()) << "i, predicted " << fmt(e.predicted.real())
                << " " << fmt(e.predicted.imag()) << "i, deviation " << fmt(e.deviation_in_sigma) << " sigma\n";
    } else if (cmd == spacings) {
      const SpacingReference ref = spacing_reference_from_string(reference);
      const io::Table input = io::read_csv(input_path);
      cfg["input_csv_hash"] = hex64(fnv1a(read_file(input_path)));
      cfg["reference"] = reference;
      std::vector<SpectralSample> empirical;
      if (!spectra_path.empty()) {
        cfg["spectra_csv_hash"] = hex64(fnv1a(read_file(spectra_path)));
        empirical = spectra_from_table(io::read_csv(spectra_path));
      }
      SpacingReport r;
      if (input.column("z_k") >= 0) {
        cfg["window"] = window;
        r = compare_zero_spacings(input.numeric_column(input.column("z_k")), ref, empirical.empty() ? nullptr : &empirical, window);
      } else {
        cfg["bulk"] = bulk;
        if (ref == SpacingReference::spectral) throw Error(ErrorKind::invalid_spec, "the spectral reference applies to zero tables");
        r = spacing_stats(spectra_from_table(input), bulk, ref);
      }
      run.set_payload(spacing_json(r));
      std::cout << "KS distance to " << r.reference << ": " << fmt(r.ks_distance) << " over " << r.sample_size << " spacings\n";
    }
    run.finish();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical;
  }
  return status;
}
