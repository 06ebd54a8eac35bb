#include "cli_app.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rotorwp/carpet.hpp"
#include "rotorwp/ce_ingest.hpp"
#include "rotorwp/coherent_state.hpp"
#include "rotorwp/errors.hpp"
#include "rotorwp/observables.hpp"
#include "rotorwp/revival.hpp"
#include "rotorwp/version.hpp"

namespace rotorwp::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string command;

  std::optional<double> n;
  std::optional<double> eta;
  std::optional<std::string> amplitudes;
  std::optional<std::string> surrogate;  // "ibar,sigma,imax"
  bool surrogate_include_odd = false;

  std::optional<int> l_max;
  double tol = 1e-10;
  bool renormalize = false;

  std::optional<double> b;
  std::optional<std::string> levels;

  std::optional<int> rev_m;
  std::optional<int> rev_n;
  double clone_threshold = 0.99;
  int n_scan = 0;

  std::optional<double> t0;
  std::optional<double> t1;
  int t_steps = 201;
  int thetas = 181;

  std::string out_dir = "out";
  int threads = 1;
};

void format_csv_value(std::string& line, double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  line.append(buf, res.ptr);
}

// Flags win over the config file; only values the user did not pass on the
// command line are taken from JSON.
void merge_config(const fs::path& path, CLI::App* cmd, Options& opt) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  if (doc.contains("command") && doc["command"].get<std::string>() != opt.command) {
    throw ConfigError("config command '" + doc["command"].get<std::string>() +
                      "' does not match invoked command '" + opt.command + "'");
  }

  const auto unused = [&](const char* flag) { return cmd->count(flag) == 0; };
  if (doc.contains("N") && unused("--N")) opt.n = doc["N"].get<double>();
  if (doc.contains("eta") && unused("--eta")) opt.eta = doc["eta"].get<double>();
  if (doc.contains("amplitudes") && unused("--amplitudes"))
    opt.amplitudes = doc["amplitudes"].get<std::string>();
  if (doc.contains("surrogate") && unused("--surrogate"))
    opt.surrogate = doc["surrogate"].get<std::string>();
  if (doc.contains("surrogate_include_odd") && unused("--surrogate-include-odd"))
    opt.surrogate_include_odd = doc["surrogate_include_odd"].get<bool>();
  if (doc.contains("lmax") && unused("--lmax")) opt.l_max = doc["lmax"].get<int>();
  if (doc.contains("tol") && unused("--tol")) opt.tol = doc["tol"].get<double>();
  if (doc.contains("renormalize") && unused("--renormalize"))
    opt.renormalize = doc["renormalize"].get<bool>();
  if (doc.contains("B") && unused("--B")) opt.b = doc["B"].get<double>();
  if (doc.contains("levels") && unused("--levels")) opt.levels = doc["levels"].get<std::string>();
  if (doc.contains("m") && unused("--m")) opt.rev_m = doc["m"].get<int>();
  if (doc.contains("n") && unused("--n")) opt.rev_n = doc["n"].get<int>();
  if (doc.contains("clone_threshold") && unused("--clone-threshold"))
    opt.clone_threshold = doc["clone_threshold"].get<double>();
  if (doc.contains("nscan") && unused("--nscan")) opt.n_scan = doc["nscan"].get<int>();
  if (doc.contains("t0") && unused("--t0")) opt.t0 = doc["t0"].get<double>();
  if (doc.contains("t1") && unused("--t1")) opt.t1 = doc["t1"].get<double>();
  if (doc.contains("tsteps") && unused("--tsteps")) opt.t_steps = doc["tsteps"].get<int>();
  if (doc.contains("thetas") && unused("--thetas")) opt.thetas = doc["thetas"].get<int>();
  if (doc.contains("out") && unused("--out")) opt.out_dir = doc["out"].get<std::string>();
  if (doc.contains("threads") && unused("--threads")) opt.threads = doc["threads"].get<int>();
}

struct ResolvedPacket {
  WavePacket wp;
  json descriptor;
};

ResolvedPacket resolve_packet(const Options& opt) {
  const int sources = (opt.n.has_value() || opt.eta.has_value() ? 1 : 0) +
                      (opt.amplitudes ? 1 : 0) + (opt.surrogate ? 1 : 0);
  if (sources != 1) {
    throw ConfigError("exactly one coefficient source required: --N/--eta, "
                      "--amplitudes, or --surrogate");
  }

  ResolvedPacket out;
  if (opt.amplitudes) {
    const auto set = load_amplitudes(*opt.amplitudes);
    for (const auto& w : set.warnings) std::cerr << "warning: " << w << '\n';
    out.wp = to_wavepacket(set);
    out.descriptor = {{"source", "amplitudes"}, {"path", *opt.amplitudes}};
  } else if (opt.surrogate) {
    double i_bar = 0.0, sigma = 0.0;
    int i_max = 0;
    char comma1 = 0, comma2 = 0;
    std::istringstream triple(*opt.surrogate);
    triple >> i_bar >> comma1 >> sigma >> comma2 >> i_max;
    if (!triple || comma1 != ',' || comma2 != ',') {
      throw ConfigError("--surrogate expects 'ibar,sigma,imax'");
    }
    const auto set = surrogate_amplitudes(i_bar, sigma, i_max, !opt.surrogate_include_odd);
    out.wp = to_wavepacket(set);
    out.descriptor = {{"source", "surrogate"},
                      {"i_bar", i_bar},
                      {"sigma", sigma},
                      {"i_max", i_max},
                      {"even_only", !opt.surrogate_include_odd}};
  } else {
    if (!opt.n || !opt.eta) throw ConfigError("coherent-state source needs both --N and --eta");
    const CoherentStateParams params{*opt.n, *opt.eta};
    const int l_max = opt.l_max ? *opt.l_max : suggest_lmax(params, opt.tol);
    out.wp = expand_cs(params, l_max, opt.tol, opt.renormalize);
    out.descriptor = {{"source", "coherent_state"}, {"N", *opt.n},   {"eta", *opt.eta},
                      {"l_max", l_max},             {"tol", opt.tol}, {"renormalize", opt.renormalize}};
  }
  out.descriptor["norm_defect"] = out.wp.norm_defect;
  out.descriptor["l_max"] = out.wp.l_max();
  return out;
}

struct ResolvedSpectrum {
  SpectrumModel model = SpectrumModel::ideal_rotor(1.0);
  json descriptor;
};

ResolvedSpectrum resolve_spectrum(const Options& opt) {
  const int sources = (opt.b ? 1 : 0) + (opt.levels ? 1 : 0);
  if (sources != 1) {
    throw ConfigError("exactly one spectrum required: --B or --levels");
  }
  ResolvedSpectrum out;
  if (opt.b) {
    out.model = SpectrumModel::ideal_rotor(*opt.b);
    out.descriptor = {{"kind", "ideal_rotor"}, {"B", *opt.b}};
  } else {
    const auto scheme = load_levels(*opt.levels);
    out.model = to_spectrum(scheme);
    out.descriptor = {{"kind", "tabulated"},
                      {"path", *opt.levels},
                      {"label", scheme.nucleus_label},
                      {"level_count", scheme.levels_kev.size()}};
  }
  return out;
}

json effective_config(const Options& opt) {
  json cfg;
  cfg["command"] = opt.command;
  if (opt.n) cfg["N"] = *opt.n;
  if (opt.eta) cfg["eta"] = *opt.eta;
  if (opt.amplitudes) cfg["amplitudes"] = *opt.amplitudes;
  if (opt.surrogate) {
    cfg["surrogate"] = *opt.surrogate;
    cfg["surrogate_include_odd"] = opt.surrogate_include_odd;
  }
  if (opt.l_max) cfg["lmax"] = *opt.l_max;
  cfg["tol"] = opt.tol;
  cfg["renormalize"] = opt.renormalize;
  if (opt.b) cfg["B"] = *opt.b;
  if (opt.levels) cfg["levels"] = *opt.levels;
  if (opt.rev_m) cfg["m"] = *opt.rev_m;
  if (opt.rev_n) cfg["n"] = *opt.rev_n;
  cfg["clone_threshold"] = opt.clone_threshold;
  cfg["nscan"] = opt.n_scan;
  if (opt.t0) cfg["t0"] = *opt.t0;
  if (opt.t1) cfg["t1"] = *opt.t1;
  cfg["tsteps"] = opt.t_steps;
  cfg["thetas"] = opt.thetas;
  cfg["out"] = opt.out_dir;
  cfg["threads"] = opt.threads;
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_manifest(const fs::path& dir, const json& config, const json& extras,
                    const std::vector<std::string>& outputs) {
  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = config;
  for (const auto& [key, value] : extras.items()) manifest[key] = value;
  manifest["outputs"] = outputs;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

int run_expand(const Options& opt) {
  const auto packet = resolve_packet(opt);
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  save_wavepacket(packet.wp, dir / "wavepacket.json");
  json extras;
  extras["wavepacket"] = packet.descriptor;
  extras["norm_defect"] = packet.wp.norm_defect;
  write_manifest(dir, effective_config(opt), extras, {"wavepacket.json"});
  std::cout << "expand: l_max=" << packet.wp.l_max() << " norm_defect=" << packet.wp.norm_defect
            << " -> " << (dir / "wavepacket.json").string() << '\n';
  return kExitOk;
}

int run_observables(const Options& opt) {
  const auto packet = resolve_packet(opt);
  const auto spectrum = resolve_spectrum(opt);
  const double i_bar = mean_level_index(packet.wp);
  const auto scales = timescales(spectrum.model, i_bar);

  const double t0 = opt.t0.value_or(0.0);
  const double t1 = opt.t1.value_or(scales.t_rev);
  if (opt.t_steps < 2) throw ConfigError("--tsteps must be >= 2");

  std::string csv = "t,mean_lz,var_lx,var_ly,var_lz,uncertainty_product,"
                    "min_uncertainty_rhs,autocorrelation_modulus\n";
  for (int j = 0; j < opt.t_steps; ++j) {
    const double t = t0 + (t1 - t0) * j / (opt.t_steps - 1);
    const WavePacket wp_t = propagate(packet.wp, spectrum.model, t);
    const auto stats = angular_stats(wp_t);
    std::string line;
    format_csv_value(line, t);
    for (double v : {stats.mean_lz, stats.var_lx, stats.var_ly, stats.var_lz,
                     stats.uncertainty_product, stats.min_uncertainty_rhs,
                     std::abs(autocorrelation(packet.wp, wp_t))}) {
      line.push_back(',');
      format_csv_value(line, v);
    }
    line.push_back('\n');
    csv += line;
  }

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  write_text(dir / "observables.csv", csv);
  json extras;
  extras["wavepacket"] = packet.descriptor;
  extras["spectrum"] = spectrum.descriptor;
  extras["norm_defect"] = packet.wp.norm_defect;
  extras["t_cl"] = scales.t_cl;
  extras["t_rev"] = scales.t_rev;
  if (spectrum.model.is_ideal()) extras["t_exact_period"] = 0.5 * scales.t_rev;
  write_manifest(dir, effective_config(opt), extras, {"observables.csv"});
  std::cout << "observables: " << opt.t_steps << " samples over [" << t0 << ", " << t1
            << "] -> " << (dir / "observables.csv").string() << '\n';
  return kExitOk;
}

int run_revivals(const Options& opt) {
  if (!opt.rev_n) throw ConfigError("revivals: --n is required");
  const FractionalTime ft{opt.rev_m.value_or(1), *opt.rev_n};
  validate(ft);

  const auto packet = resolve_packet(opt);
  const auto spectrum = resolve_spectrum(opt);
  const auto scales = timescales(spectrum.model, mean_level_index(packet.wp));
  const double t = scales.t_rev * ft.m / ft.n;

  const WavePacket wp_t = propagate(packet.wp, spectrum.model, t);
  const auto decomposition = gauss_coefficients(ft);
  const auto detection = detect_features(wp_t, packet.wp, ft, opt.clone_threshold, opt.n_scan);

  json report;
  report["m"] = ft.m;
  report["n"] = ft.n;
  report["l"] = decomposition.l;
  report["q_predicted"] = decomposition.predicted_clones;
  report["clone_threshold"] = opt.clone_threshold;
  report["t"] = t;
  json coeffs = json::array();
  for (const auto& a : decomposition.a) coeffs.push_back({a.real(), a.imag()});
  report["coefficients"] = std::move(coeffs);
  json features = json::array();
  for (const auto& f : detection.features) {
    features.push_back({{"azimuth", f.azimuth},
                        {"fidelity", f.fidelity},
                        {"kind", f.kind == FeatureKind::clone ? "clone" : "mutant"},
                        {"raw_overlap", f.raw_overlap}});
  }
  report["features"] = std::move(features);
  report["degenerate"] = detection.degenerate;

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  write_text(dir / "revival.json", report.dump(2) + "\n");
  json extras;
  extras["wavepacket"] = packet.descriptor;
  extras["spectrum"] = spectrum.descriptor;
  extras["norm_defect"] = packet.wp.norm_defect;
  extras["t_cl"] = scales.t_cl;
  extras["t_rev"] = scales.t_rev;
  if (spectrum.model.is_ideal()) extras["t_exact_period"] = 0.5 * scales.t_rev;
  write_manifest(dir, effective_config(opt), extras, {"revival.json"});
  std::cout << "revivals: t=(" << ft.m << '/' << ft.n << ") t_rev, q=" << decomposition.predicted_clones
            << ", detected " << detection.features.size() << " features -> "
            << (dir / "revival.json").string() << '\n';
  return kExitOk;
}

int run_carpet(const Options& opt) {
  const auto packet = resolve_packet(opt);
  const auto spectrum = resolve_spectrum(opt);
  const auto scales = timescales(spectrum.model, mean_level_index(packet.wp));

  const double t0 = opt.t0.value_or(0.0);
  const double t1 = opt.t1.value_or(scales.t_rev);
  const auto grid =
      carpet(packet.wp, spectrum.model, opt.thetas, t0, t1, opt.t_steps, opt.threads);

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  carpet_export(grid, dir / "carpet.csv");

  json meta;
  meta["wavepacket"] = packet.descriptor;
  meta["spectrum"] = spectrum.descriptor;
  meta["t_cl"] = scales.t_cl;
  meta["t_rev"] = scales.t_rev;
  if (spectrum.model.is_ideal()) meta["t_exact_period"] = 0.5 * scales.t_rev;
  write_text(dir / "carpet_meta.json", meta.dump(2) + "\n");

  json extras;
  extras["wavepacket"] = packet.descriptor;
  extras["spectrum"] = spectrum.descriptor;
  extras["norm_defect"] = packet.wp.norm_defect;
  extras["t_cl"] = scales.t_cl;
  extras["t_rev"] = scales.t_rev;
  write_manifest(dir, effective_config(opt), extras, {"carpet.csv", "carpet_meta.json"});
  std::cout << "carpet: " << opt.thetas << " x " << opt.t_steps << " grid over [" << t0 << ", "
            << t1 << "] -> " << (dir / "carpet.csv").string() << '\n';
  return kExitOk;
}

void add_common_options(CLI::App* cmd, Options& opt, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file; explicit flags override it");
  cmd->add_option("--N", opt.n, "coherent-state size parameter");
  cmd->add_option("--eta", opt.eta, "coherent-state ellipticity in [-1, 1]");
  cmd->add_option("--amplitudes", opt.amplitudes, "amplitude table file (I M re im)");
  cmd->add_option("--surrogate", opt.surrogate, "surrogate Gaussian amplitudes 'ibar,sigma,imax'");
  cmd->add_flag("--surrogate-include-odd", opt.surrogate_include_odd,
                "include odd I in the surrogate");
  cmd->add_option("--lmax", opt.l_max, "expansion truncation order");
  cmd->add_option("--tol", opt.tol, "truncation tolerance (default 1e-10)");
  cmd->add_flag("--renormalize", opt.renormalize, "renormalize the truncated expansion");
  cmd->add_option("--B", opt.b, "ideal-rotor rotational constant (natural units)");
  cmd->add_option("--levels", opt.levels, "tabulated level-scheme file (I E_keV)");
  cmd->add_option("--m", opt.rev_m, "fractional-revival numerator (default 1)");
  cmd->add_option("--n", opt.rev_n, "fractional-revival denominator");
  cmd->add_option("--clone-threshold", opt.clone_threshold,
                  "fidelity threshold separating clones from mutants (default 0.99)");
  cmd->add_option("--nscan", opt.n_scan, "azimuthal scan resolution (0 = auto)");
  cmd->add_option("--t0", opt.t0, "window start time");
  cmd->add_option("--t1", opt.t1, "window end time (default t_rev)");
  cmd->add_option("--tsteps", opt.t_steps, "time samples (default 201)");
  cmd->add_option("--thetas", opt.thetas, "theta nodes for carpets (default 181)");
  cmd->add_option("--out", opt.out_dir, "output directory (default 'out')");
  cmd->add_option("--threads", opt.threads, "carpet column workers (default 1)");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"rotorwp: rotor wave-packet expansion, evolution, revival analysis, carpets"};
  app.require_subcommand(1);

  Options opt;
  std::string config_path;
  CLI::App* expand = app.add_subcommand("expand", "expand a state and write wavepacket.json");
  CLI::App* observables =
      app.add_subcommand("observables", "angular-momentum time series as CSV");
  CLI::App* revivals =
      app.add_subcommand("revivals", "Gauss-sum decomposition and clone/mutant detection");
  CLI::App* carpet_cmd = app.add_subcommand("carpet", "marginal density grid over (theta, t)");
  for (CLI::App* cmd : {expand, observables, revivals, carpet_cmd}) {
    add_common_options(cmd, opt, config_path);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << '\n';
    return kExitUsage;
  }

  CLI::App* active = expand->parsed()        ? expand
                     : observables->parsed() ? observables
                     : revivals->parsed()    ? revivals
                                             : carpet_cmd;
  opt.command = active->get_name();

  try {
    if (!config_path.empty()) merge_config(config_path, active, opt);
    if (opt.command == "expand") return run_expand(opt);
    if (opt.command == "observables") return run_observables(opt);
    if (opt.command == "revivals") return run_revivals(opt);
    return run_carpet(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace rotorwp::cli
