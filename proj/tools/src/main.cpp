// Command-line front end for the two-sided atom-cavity steady-state toolkit.
//
// Subcommands cover the single-point queries (chi, cpa-point, regime), the
// scan analyses (cpa-threshold, cpa-frequencies, onset), the sweep products
// (curve, hysteresis, map, cpa-locus), the time-domain oracle, and named
// figure presets that write CSV data files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpa/analysis.hpp"
#include "cpa/dynamics.hpp"
#include "cpa/model.hpp"
#include "cpa/params.hpp"
#include "cpa/sweep.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_complex(cpa::Complex z) {
  double re = z.real() == 0.0 ? 0.0 : z.real();  // normalize -0
  double im = z.imag() == 0.0 ? 0.0 : z.imag();
  return fmt(re) + (im < 0.0 ? "-" : "+") + fmt(std::abs(im)) + "i";
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw cpa::GridError("grid needs hi > lo and steps >= 2");
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * i / (n - 1);
  return grid;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (!(lo > 0.0)) throw cpa::GridError("log grid needs lo > 0");
  std::vector<double> grid = linspace(std::log10(lo), std::log10(hi), n);
  for (auto& v : grid) v = std::pow(10.0, v);
  return grid;
}

// Shared option set. Flags override config-file values, which override the
// defaults (the default rates are the dimensionless working point used
// throughout: g*sqrt(N) = 10, kappa*tau = 0.01, kappa = Gamma).
struct CommonOptions {
  std::string variant = "reduced";
  double delta_p = 0.0;
  double omega1 = 1.0;
  double r_pump = 0.0;
  double g = 0.02;
  double gn = 10.0;
  double kappa = 1.0;
  double kappa_tau = 0.01;
  double gamma12 = 0.001;
  double gamma31 = 0.5;
  double gamma32 = 0.5;
  double delta1 = 0.0;
  double delta_ac = 0.0;
  double phi = 0.0;
  double amp_in = 0.0;
  std::string config_path;
  std::string format = "csv";
  std::string out_path;

  CLI::App* cmd = nullptr;

  void attach(CLI::App* app, bool with_delta_p = true) {
    cmd = app;
    app->add_option("--variant", variant, "Model variant: full|reduced|two-level|two-level-bare");
    if (with_delta_p) app->add_option("--delta-p", delta_p, "Probe detuning (units of Gamma)");
    app->add_option("--omega1", omega1, "Coupling Rabi frequency");
    app->add_option("--r", r_pump, "Incoherent pump rate");
    app->add_option("--g", g, "Single-atom coupling");
    app->add_option("--gn", gn, "Collective coupling g*sqrt(N)");
    app->add_option("--kappa", kappa, "Mirror field decay (both mirrors)");
    app->add_option("--kappa-tau", kappa_tau, "Product kappa*tau");
    app->add_option("--gamma12", gamma12, "Ground-state decoherence");
    app->add_option("--gamma31", gamma31, "Decay |3> -> |1>");
    app->add_option("--gamma32", gamma32, "Decay |3> -> |2>");
    app->add_option("--delta1", delta1, "Coupling-laser detuning");
    app->add_option("--delta-ac", delta_ac, "Cavity detuning");
    app->add_option("--phi", phi, "Relative phase of the left beam");
    app->add_option("--config", config_path, "JSON config file");
    app->add_option("--format", format, "Output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--out", out_path, "Output path (file, or directory for figure)");
  }

  bool set(const std::string& name) const {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  }
};

void apply_json_system(const ordered_json& j, cpa::SystemParams& p) {
  static const std::map<std::string, double cpa::SystemParams::*> fields = {
      {"gamma31", &cpa::SystemParams::gamma31},
      {"gamma32", &cpa::SystemParams::gamma32},
      {"gamma12", &cpa::SystemParams::gamma12},
      {"kappa_l", &cpa::SystemParams::kappa_l},
      {"kappa_r", &cpa::SystemParams::kappa_r},
      {"tau", &cpa::SystemParams::tau},
      {"g", &cpa::SystemParams::g},
      {"n_atoms", &cpa::SystemParams::n_atoms},
      {"omega1", &cpa::SystemParams::omega1},
      {"r_pump", &cpa::SystemParams::r_pump},
      {"delta1", &cpa::SystemParams::delta1},
      {"delta_ac", &cpa::SystemParams::delta_ac},
  };
  for (const auto& [key, value] : j.items()) {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw std::invalid_argument("unknown config key: system." + key);
    }
    p.*(it->second) = value.get<double>();
  }
}

struct Resolved {
  cpa::SystemParams params;
  cpa::ModelVariant variant = cpa::ModelVariant::ReducedThreeLevel;
  double phi = 0.0;
  double delta_p = 0.0;
  double amp_in = 0.0;
};

Resolved resolve(const CommonOptions& o) {
  Resolved r;
  std::string variant_name = "reduced";

  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + o.config_path);
    ordered_json j = ordered_json::parse(in);
    for (const auto& [key, value] : j.items()) {
      if (key == "system") {
        apply_json_system(value, r.params);
      } else if (key == "variant") {
        variant_name = value.get<std::string>();
      } else if (key == "drive") {
        for (const auto& [dkey, dvalue] : value.items()) {
          if (dkey == "delta_p") {
            r.delta_p = dvalue.get<double>();
          } else if (dkey == "amp_in") {
            r.amp_in = dvalue.get<double>();
          } else if (dkey == "phi") {
            r.phi = dvalue.get<double>();
          } else {
            throw std::invalid_argument("unknown config key: drive." + dkey);
          }
        }
      } else {
        throw std::invalid_argument("unknown config key: " + key);
      }
    }
  } else {
    // Flag defaults mirror the numerical working point.
    r.params.omega1 = o.omega1;
  }

  auto& p = r.params;
  if (o.set("--gamma31")) p.gamma31 = o.gamma31;
  if (o.set("--gamma32")) p.gamma32 = o.gamma32;
  if (o.set("--gamma12")) p.gamma12 = o.gamma12;
  if (o.set("--g")) p.g = o.g;
  if (o.set("--gn") || o.config_path.empty()) {
    const double gn = o.set("--gn") ? o.gn : 10.0;
    p.n_atoms = (gn / p.g) * (gn / p.g);
  }
  if (o.set("--kappa")) p.kappa_l = p.kappa_r = o.kappa;
  if (o.set("--kappa-tau") || o.config_path.empty()) {
    const double kt = o.set("--kappa-tau") ? o.kappa_tau : 0.01;
    p.tau = kt / p.kappa_l;
  }
  if (o.set("--omega1")) p.omega1 = o.omega1;
  if (o.set("--r")) p.r_pump = o.r_pump;
  if (o.set("--delta1")) p.delta1 = o.delta1;
  if (o.set("--delta-ac")) p.delta_ac = o.delta_ac;

  if (o.set("--variant") || o.config_path.empty()) {
    variant_name = o.variant;
  }
  r.variant = cpa::variant_from_string(variant_name);
  if (r.variant == cpa::ModelVariant::TwoLevelPumped ||
      r.variant == cpa::ModelVariant::TwoLevelBare) {
    if (o.set("--omega1") && o.omega1 != 0.0) {
      throw std::invalid_argument("two-level variants take omega1 = 0");
    }
    if (r.variant == cpa::ModelVariant::TwoLevelBare && p.r_pump != 0.0) {
      throw std::invalid_argument("the bare two-level variant takes r = 0");
    }
    p = cpa::two_level_params(p);
  }

  if (o.set("--delta-p")) r.delta_p = o.delta_p;
  if (o.set("--phi")) r.phi = o.phi;
  p.validate();
  return r;
}

class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file_.emplace(path);
      if (!*file_) throw std::invalid_argument("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool to_file() const { return file_.has_value(); }

 private:
  std::optional<std::ofstream> file_;
};

void emit_table(const CommonOptions& o, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
  OutputSink sink(o.out_path);
  if (o.format == "json") {
    ordered_json out = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json obj;
      for (size_t i = 0; i < header.size(); ++i) {
        if (std::isnan(row[i])) {
          obj[header[i]] = nullptr;
        } else {
          obj[header[i]] = row[i];
        }
      }
      out.push_back(obj);
    }
    sink.stream() << out.dump(2) << "\n";
    return;
  }
  auto& s = sink.stream();
  for (size_t i = 0; i < header.size(); ++i) {
    s << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      s << fmt(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

// ---------------------------------------------------------------------------
// Subcommand runners
// ---------------------------------------------------------------------------

double opt_intensity = 0.0;

int run_chi(const CommonOptions& o) {
  const Resolved r = resolve(o);
  const cpa::Complex chi =
      cpa::susceptibility(r.params, r.delta_p, opt_intensity, r.variant);
  std::cout << "chi = " << fmt_complex(chi) << "\n";
  return kExitOk;
}

int run_cpa_point(const CommonOptions& o, bool taylor) {
  const Resolved r = resolve(o);
  const cpa::CpaPoint point = taylor
                                  ? cpa::cpa_intensity_taylor(r.params, r.delta_p)
                                  : cpa::cpa_intracavity_intensity(r.params, r.delta_p);
  if (o.format == "json") {
    ordered_json j;
    j["delta_p"] = point.delta_p;
    j["intensity_intracavity"] = point.intensity_intracavity;
    j["intensity_input"] = point.feasible ? ordered_json(point.intensity_input)
                                          : ordered_json(nullptr);
    j["feasible"] = point.feasible;
    OutputSink sink(o.out_path);
    sink.stream() << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "delta_p = " << fmt(point.delta_p) << "\n"
            << "intensity_intracavity = " << fmt(point.intensity_intracavity) << "\n"
            << "intensity_input = " << (point.feasible ? fmt(point.intensity_input) : "")
            << "\n"
            << "feasible = " << (point.feasible ? "true" : "false") << "\n";
  return kExitOk;
}

int run_thresholds(const CommonOptions& o, double lo, double hi, int steps) {
  const Resolved r = resolve(o);
  const auto edges = cpa::cpa_frequency_thresholds(r.params, {lo, hi, steps});
  OutputSink sink(o.out_path);
  if (o.format == "json") {
    ordered_json j = ordered_json::array();
    for (double e : edges) j.push_back(e);
    sink.stream() << j.dump(2) << "\n";
  } else {
    for (double e : edges) sink.stream() << fmt(e) << "\n";
  }
  return kExitOk;
}

int run_frequencies(const CommonOptions& o, double i_in, double lo, double hi, int steps) {
  const Resolved r = resolve(o);
  const auto freqs = cpa::cpa_frequencies_at_intensity(r.params, i_in, {lo, hi, steps});
  OutputSink sink(o.out_path);
  if (o.format == "json") {
    ordered_json j = ordered_json::array();
    for (double f : freqs) j.push_back(f);
    sink.stream() << j.dump(2) << "\n";
  } else {
    for (double f : freqs) sink.stream() << fmt(f) << "\n";
  }
  return kExitOk;
}

int run_regime(const CommonOptions& o) {
  const Resolved r = resolve(o);
  const cpa::RegimeReport report = cpa::regime_classify(r.params, r.delta_p, r.variant);
  std::cout << "regime = " << cpa::to_string(report.label) << "\n";
  if (report.cpa.feasible) {
    std::cout << "iin_cpa = " << fmt(report.cpa.intensity_input) << "\n";
  }
  if (report.cpa_on_unstable_branch) {
    std::cout << "note = CPA intensity lies on the unstable branch\n";
  }
  return kExitOk;
}

int run_onset(const CommonOptions& o, const std::string& swept, double lo, double hi,
              double iin_scan_max) {
  const Resolved r = resolve(o);
  cpa::SweepParameter param;
  if (swept == "omega1") {
    param = cpa::SweepParameter::Omega1;
  } else if (swept == "r") {
    param = cpa::SweepParameter::PumpRate;
  } else {
    throw std::invalid_argument("--sweep must be omega1 or r");
  }
  const cpa::OnsetResult onset =
      cpa::bistability_onset(r.params, r.delta_p, param, lo, hi, 1e-3, iin_scan_max);
  switch (onset.status) {
    case cpa::OnsetResult::Status::Found:
      std::cout << "onset = " << fmt(onset.value) << "\n";
      break;
    case cpa::OnsetResult::Status::AlreadyAtBracketStart:
      std::cout << "onset = " << fmt(onset.value) << "\n"
                << "note = bistable window already present at the bracket start\n";
      break;
    case cpa::OnsetResult::Status::NotFound:
      std::cout << "onset = none\n";
      break;
  }
  return kExitOk;
}

int run_curve(const CommonOptions& o, double iin_max, int points) {
  const Resolved r = resolve(o);
  const auto grid =
      cpa::intensity_grid_for_input_range(r.params, r.delta_p, r.variant, iin_max, points);
  const cpa::BranchCurve curve =
      cpa::input_output_curve(r.params, r.delta_p, grid, r.variant);

  std::vector<std::vector<double>> rows;
  rows.reserve(curve.points.size());
  for (const auto& pt : curve.points) {
    rows.push_back({curve.delta_p, pt.i_in, pt.i_out, pt.intensity,
                    pt.stable ? 1.0 : 0.0});
  }
  emit_table(o, {"delta_p_over_Gamma", "i_in", "i_out", "intensity", "stable"}, rows);
  for (const auto& fold : curve.folds) {
    std::cerr << "fold: i_in = " << fmt(fold.i_in)
              << ", intensity = " << fmt(fold.intensity) << "\n";
  }
  return kExitOk;
}

int run_hysteresis(const CommonOptions& o, double i_min, double i_max, int steps) {
  const Resolved r = resolve(o);
  const cpa::HysteresisTrace trace =
      cpa::hysteresis_trace(r.params, r.delta_p, i_min, i_max, steps, r.variant);

  std::vector<std::vector<double>> rows;
  for (const auto& [i_in, i_out] : trace.up) rows.push_back({0.0, i_in, i_out});
  for (const auto& [i_in, i_out] : trace.down) rows.push_back({1.0, i_in, i_out});
  emit_table(o, {"direction_down", "i_in", "i_out"}, rows);

  if (trace.bistable) {
    std::cerr << "jump_up = " << fmt(trace.jump_up.value_or(0.0)) << "\n"
              << "jump_down = " << fmt(trace.jump_down.value_or(0.0)) << "\n";
  } else {
    std::cerr << "not bistable in the swept range\n";
  }
  return kExitOk;
}

int run_map(const CommonOptions& o, double dp_lo, double dp_hi, int dp_steps,
            double iin_lo, double iin_hi, int iin_steps, const std::string& policy,
            bool log_iin) {
  const Resolved r = resolve(o);
  const auto dp_grid = linspace(dp_lo, dp_hi, dp_steps);
  const auto iin_grid =
      log_iin ? logspace(iin_lo, iin_hi, iin_steps) : linspace(iin_lo, iin_hi, iin_steps);
  const cpa::DensityMap map = cpa::density_map(
      r.params, dp_grid, iin_grid, cpa::policy_from_string(policy), r.variant);

  std::vector<std::vector<double>> rows;
  rows.reserve(dp_grid.size() * iin_grid.size());
  for (size_t i = 0; i < dp_grid.size(); ++i) {
    for (size_t j = 0; j < iin_grid.size(); ++j) {
      rows.push_back({dp_grid[i], iin_grid[j], map.at(i, j)});
    }
  }
  emit_table(o, {"delta_p_over_Gamma", "i_in", "i_out"}, rows);
  return kExitOk;
}

cpa::LocusAxis axis_from_string(const std::string& name) {
  if (name == "delta-p") return cpa::LocusAxis::DeltaP;
  if (name == "r") return cpa::LocusAxis::PumpRate;
  if (name == "omega1") return cpa::LocusAxis::Omega1;
  throw std::invalid_argument("locus axis must be delta-p, r or omega1");
}

int run_locus(const CommonOptions& o, const std::string& axis1, double lo1, double hi1,
              int n1, const std::string& axis2, double lo2, double hi2, int n2) {
  const Resolved r = resolve(o);
  const cpa::CpaLocusMap map =
      cpa::cpa_locus_map(r.params, axis_from_string(axis1), linspace(lo1, hi1, n1),
                         axis_from_string(axis2), linspace(lo2, hi2, n2));
  std::vector<std::vector<double>> rows;
  rows.reserve(map.grid1.size() * map.grid2.size());
  for (size_t i = 0; i < map.grid1.size(); ++i) {
    for (size_t j = 0; j < map.grid2.size(); ++j) {
      rows.push_back({map.grid1[i], map.grid2[j], map.at(i, j)});
    }
  }
  emit_table(o, {cpa::to_string(map.axis1), cpa::to_string(map.axis2), "iin_cpa"}, rows);
  return kExitOk;
}

int run_oracle(const CommonOptions& o, double i_in, double t_max, int samples,
               const std::string& dump_path) {
  const Resolved r = resolve(o);
  const cpa::LiouvillianSpec spec = cpa::LiouvillianSpec::make(r.params, r.delta_p);
  const cpa::ProbeDrive drive{r.delta_p, std::sqrt(i_in), r.phi};

  if (!dump_path.empty()) {
    const auto samples_vec = cpa::sample_trajectory(spec, drive,
                                                    cpa::AtomCavityState::ground(),
                                                    t_max, samples);
    std::ofstream out(dump_path);
    if (!out) throw std::invalid_argument("cannot open dump file: " + dump_path);
    out << "t,re_alpha,im_alpha,intensity,rho11,rho22,rho33\n";
    for (const auto& s : samples_vec) {
      out << fmt(s.t) << "," << fmt(s.state.alpha.real()) << ","
          << fmt(s.state.alpha.imag()) << "," << fmt(std::norm(s.state.alpha)) << ","
          << fmt(s.state.at(0, 0).real()) << "," << fmt(s.state.at(1, 1).real()) << ","
          << fmt(s.state.at(2, 2).real()) << "\n";
    }
    std::cout << "trajectory written to " << dump_path << "\n";
    return kExitOk;
  }

  const auto set = cpa::solve_steady_states(r.params, drive, r.variant);
  const cpa::CurveKernel kernel(r.params, r.delta_p, r.variant);
  std::vector<bool> labels;
  for (const auto& root : set.roots) labels.push_back(kernel.stable(root.intensity));
  const cpa::OracleReport report = cpa::oracle_compare(spec, drive, set, labels);

  for (const auto& check : report.checks) {
    std::cout << "root intensity = " << fmt(check.intensity)
              << ", label = " << (check.labeled_stable ? "stable" : "unstable")
              << ", relaxed to = " << fmt(check.final_intensity)
              << ", confirmed = " << (check.confirmed ? "yes" : "no") << "\n";
  }
  std::cout << "confirmed " << report.confirmed << "/" << report.checks.size() << "\n";
  return report.mismatched == 0 ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------------------
// Figure presets
// ---------------------------------------------------------------------------

cpa::SystemParams preset_base(double omega1, double r_pump) {
  cpa::SystemParams p;  // defaults are the working point
  p.omega1 = omega1;
  p.r_pump = r_pump;
  return p;
}

void write_rows(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path.string());
  for (size_t i = 0; i < header.size(); ++i) {
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << fmt(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

std::vector<std::vector<double>> locus_rows(const cpa::CpaLocusMap& map) {
  std::vector<std::vector<double>> rows;
  rows.reserve(map.grid1.size() * map.grid2.size());
  for (size_t i = 0; i < map.grid1.size(); ++i) {
    for (size_t j = 0; j < map.grid2.size(); ++j) {
      rows.push_back({map.grid1[i], map.grid2[j], map.at(i, j)});
    }
  }
  return rows;
}

std::vector<std::vector<double>> curve_rows(const cpa::SystemParams& p, double delta_p,
                                            cpa::ModelVariant variant, double iin_max,
                                            int points, double tag) {
  const auto grid = cpa::intensity_grid_for_input_range(p, delta_p, variant, iin_max, points);
  const auto curve = cpa::input_output_curve(p, delta_p, grid, variant);
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.points.size());
  for (const auto& pt : curve.points) {
    rows.push_back({tag, pt.i_in, pt.i_out, pt.intensity, pt.stable ? 1.0 : 0.0});
  }
  return rows;
}

std::vector<std::vector<double>> map_rows(const cpa::DensityMap& map) {
  std::vector<std::vector<double>> rows;
  rows.reserve(map.delta_p_axis.size() * map.input_axis.size());
  for (size_t i = 0; i < map.delta_p_axis.size(); ++i) {
    for (size_t j = 0; j < map.input_axis.size(); ++j) {
      rows.push_back({map.delta_p_axis[i], map.input_axis[j], map.at(i, j)});
    }
  }
  return rows;
}

int run_figure(const std::string& preset, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  const fs::path file = dir / (preset + ".csv");

  const auto two_level = cpa::two_level_params(preset_base(0.0, 0.0));
  const std::vector<std::string> locus_header_r = {"delta_p_over_Gamma", "r_over_Gamma",
                                                   "iin_cpa"};
  const std::vector<std::string> locus_header_w = {"delta_p_over_Gamma",
                                                   "omega1_over_Gamma", "iin_cpa"};
  const std::vector<std::string> curve_header_w = {"omega1_over_Gamma", "i_in", "i_out",
                                                   "intensity", "stable"};
  const std::vector<std::string> curve_header_r = {"r_over_Gamma", "i_in", "i_out",
                                                   "intensity", "stable"};
  const std::vector<std::string> map_header = {"delta_p_over_Gamma", "i_in", "i_out"};

  if (preset == "fig2a" || preset == "fig2b") {
    // CPA input over (delta_p, pump rate); (a) no coupling field, (b) unit.
    const auto base = (preset == "fig2a") ? two_level : preset_base(1.0, 0.0);
    const auto map = cpa::cpa_locus_map(base, cpa::LocusAxis::DeltaP,
                                        linspace(-10.0, 10.0, 1001),
                                        cpa::LocusAxis::PumpRate, linspace(0.0, 1.2, 121));
    write_rows(file, locus_header_r, locus_rows(map));
  } else if (preset == "fig2c" || preset == "fig2d") {
    // CPA input over (delta_p, coupling strength) at fixed pump. The
    // omega1 = 0 edge has no closed form with branching decay and is left
    // out of the grid.
    const double r_pump = (preset == "fig2c") ? 0.0 : 0.5;
    const auto map = cpa::cpa_locus_map(preset_base(1.0, r_pump), cpa::LocusAxis::DeltaP,
                                        linspace(-10.0, 10.0, 1001),
                                        cpa::LocusAxis::Omega1, linspace(0.02, 3.0, 150));
    write_rows(file, locus_header_w, locus_rows(map));
  } else if (preset == "fig3a") {
    write_rows(file, curve_header_w,
               curve_rows(preset_base(1.0, 0.0), 7.2, cpa::ModelVariant::ReducedThreeLevel,
                          12.0, 600, 1.0));
  } else if (preset == "fig3b") {
    write_rows(file, curve_header_w,
               curve_rows(preset_base(1.0, 0.0), 7.0, cpa::ModelVariant::ReducedThreeLevel,
                          60.0, 800, 1.0));
  } else if (preset == "fig4a" || preset == "fig4b") {
    // CPA input vs detuning for three pump rates.
    std::vector<std::vector<double>> rows;
    for (double r_pump : {0.0, 0.25, 0.5}) {
      auto p = (preset == "fig4a") ? cpa::two_level_params(preset_base(0.0, r_pump))
                                   : preset_base(1.0, r_pump);
      p.r_pump = r_pump;
      for (double dp = -12.0; dp <= 12.0 + 1e-9; dp += 0.005) {
        const auto pt = cpa::cpa_intracavity_intensity(p, dp);
        rows.push_back({dp, r_pump,
                        pt.feasible ? pt.intensity_input
                                    : std::numeric_limits<double>::quiet_NaN()});
      }
    }
    write_rows(file, {"delta_p_over_Gamma", "r_over_Gamma", "iin_cpa"}, rows);
  } else if (preset == "fig5a" || preset == "fig5b" || preset == "fig5c") {
    // Output-intensity density maps in the low-intensity window.
    const bool zoom = (preset == "fig5c");
    const auto p = (preset == "fig5a") ? two_level : preset_base(1.0, 0.0);
    const auto variant = (preset == "fig5a") ? cpa::ModelVariant::TwoLevelBare
                                             : cpa::ModelVariant::ReducedThreeLevel;
    const auto dp_grid = zoom ? linspace(-0.5, 0.5, 201) : linspace(-12.0, 12.0, 1201);
    const auto iin_grid = linspace(0.05, 6.0, 120);
    const auto map =
        cpa::density_map(p, dp_grid, iin_grid, cpa::BranchPolicy::AdiabaticUp, variant);
    write_rows(file, map_header, map_rows(map));
  } else if (preset == "fig6a" || preset == "fig6b") {
    // Input-output curves for three coupling strengths; the omega1 = 0 curve
    // is the two-level degeneration.
    const double dp = (preset == "fig6a") ? 7.0 : 6.0;
    const double iin_max = (preset == "fig6a") ? 150.0 : 2200.0;
    std::vector<std::vector<double>> rows;
    auto r0 = curve_rows(two_level, dp, cpa::ModelVariant::TwoLevelBare, iin_max, 1000, 0.0);
    rows.insert(rows.end(), r0.begin(), r0.end());
    for (double w : {1.5, 2.5}) {
      auto rw = curve_rows(preset_base(w, 0.0), dp, cpa::ModelVariant::ReducedThreeLevel,
                           iin_max, 1000, w);
      rows.insert(rows.end(), rw.begin(), rw.end());
    }
    write_rows(file, curve_header_w, rows);
  } else if (preset == "fig7a" || preset == "fig7b") {
    // Pump-controlled transfer between regimes at unit coupling.
    const double dp = (preset == "fig7a") ? 7.0 : 6.0;
    const double iin_max = (preset == "fig7a") ? 60.0 : 250.0;
    std::vector<std::vector<double>> rows;
    for (double r_pump : {0.0, 0.01, 0.05, 0.1}) {
      auto rw = curve_rows(preset_base(1.0, r_pump), dp,
                           cpa::ModelVariant::ReducedThreeLevel, iin_max, 800, r_pump);
      rows.insert(rows.end(), rw.begin(), rw.end());
    }
    write_rows(file, curve_header_r, rows);
  } else {
    throw std::invalid_argument("unknown figure preset: " + preset);
  }
  std::cout << "wrote " << file.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state analysis of coherent perfect absorption in a "
               "two-sided atom-cavity system"};
  app.require_subcommand(1);

  // chi
  auto* chi_cmd = app.add_subcommand("chi", "Atomic susceptibility at one point");
  CommonOptions chi_opt;
  chi_opt.attach(chi_cmd);
  chi_cmd->add_option("--intensity", opt_intensity, "Intracavity intensity |alpha|^2");

  // cpa-point
  auto* point_cmd = app.add_subcommand("cpa-point", "Closed-form CPA intensity");
  CommonOptions point_opt;
  point_opt.attach(point_cmd);
  bool taylor = false;
  point_cmd->add_flag("--taylor", taylor, "First-order-in-r expansion");

  // cpa-threshold
  auto* thr_cmd = app.add_subcommand("cpa-threshold", "Feasibility band edges");
  CommonOptions thr_opt;
  thr_opt.attach(thr_cmd, /*with_delta_p=*/false);
  double thr_lo = -12.0, thr_hi = 12.0;
  int thr_steps = 4801;
  thr_cmd->add_option("--dp-min", thr_lo, "Scan start");
  thr_cmd->add_option("--dp-max", thr_hi, "Scan end");
  thr_cmd->add_option("--dp-steps", thr_steps, "Scan samples");

  // cpa-frequencies
  auto* freq_cmd = app.add_subcommand("cpa-frequencies",
                                      "Detunings with a given CPA input intensity");
  CommonOptions freq_opt;
  freq_opt.attach(freq_cmd, /*with_delta_p=*/false);
  double freq_iin = 1.0, freq_lo = -12.0, freq_hi = 12.0;
  int freq_steps = 4801;
  freq_cmd->add_option("--iin", freq_iin, "CPA input intensity")->required();
  freq_cmd->add_option("--dp-min", freq_lo, "Scan start");
  freq_cmd->add_option("--dp-max", freq_hi, "Scan end");
  freq_cmd->add_option("--dp-steps", freq_steps, "Scan samples");

  // regime
  auto* regime_cmd = app.add_subcommand("regime", "Excitation-regime label");
  CommonOptions regime_opt;
  regime_opt.attach(regime_cmd);

  // onset
  auto* onset_cmd = app.add_subcommand("onset", "Bistability onset along a parameter");
  CommonOptions onset_opt;
  onset_opt.attach(onset_cmd);
  std::string onset_sweep = "omega1";
  double onset_lo = 0.0, onset_hi = 3.0, onset_iin_max = 1000.0;
  onset_cmd->add_option("--sweep", onset_sweep, "Swept parameter: omega1|r");
  onset_cmd->add_option("--min", onset_lo, "Bracket start");
  onset_cmd->add_option("--max", onset_hi, "Bracket end");
  onset_cmd->add_option("--iin-scan-max", onset_iin_max, "Input-intensity scan cap");

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "Input-output curve with stability");
  CommonOptions curve_opt;
  curve_opt.attach(curve_cmd);
  double curve_iin_max = 100.0;
  int curve_points = 1000;
  curve_cmd->add_option("--iin-max", curve_iin_max, "Largest input intensity");
  curve_cmd->add_option("--points", curve_points, "Curve samples");

  // hysteresis
  auto* hyst_cmd = app.add_subcommand("hysteresis", "Up/down sweep with jumps");
  CommonOptions hyst_opt;
  hyst_opt.attach(hyst_cmd);
  double hyst_min = 1.0, hyst_max = 1000.0;
  int hyst_steps = 800;
  hyst_cmd->add_option("--iin-min", hyst_min, "Sweep start");
  hyst_cmd->add_option("--iin-max", hyst_max, "Sweep end");
  hyst_cmd->add_option("--steps", hyst_steps, "Sweep steps");

  // map
  auto* map_cmd = app.add_subcommand("map", "Output-intensity density map");
  CommonOptions map_opt;
  map_opt.attach(map_cmd, /*with_delta_p=*/false);
  double map_dp_lo = -12.0, map_dp_hi = 12.0, map_iin_lo = 0.05, map_iin_hi = 6.0;
  int map_dp_steps = 241, map_iin_steps = 60;
  std::string map_policy = "adiabatic-up";
  bool map_log = false;
  map_cmd->add_option("--dp-min", map_dp_lo, "Detuning axis start");
  map_cmd->add_option("--dp-max", map_dp_hi, "Detuning axis end");
  map_cmd->add_option("--dp-steps", map_dp_steps, "Detuning samples");
  map_cmd->add_option("--iin-min", map_iin_lo, "Input axis start");
  map_cmd->add_option("--iin-max", map_iin_hi, "Input axis end");
  map_cmd->add_option("--iin-steps", map_iin_steps, "Input samples");
  map_cmd->add_option("--policy", map_policy,
                      "adiabatic-up|adiabatic-down|min-output|max-output");
  map_cmd->add_flag("--log-iin", map_log, "Logarithmic input axis");

  // cpa-locus
  auto* locus_cmd = app.add_subcommand("cpa-locus", "CPA input surface over two axes");
  CommonOptions locus_opt;
  locus_opt.attach(locus_cmd, /*with_delta_p=*/false);
  std::string locus_axis1 = "delta-p", locus_axis2 = "r";
  double l1_lo = -10.0, l1_hi = 10.0, l2_lo = 0.0, l2_hi = 1.0;
  int l1_steps = 401, l2_steps = 51;
  locus_cmd->add_option("--axis1", locus_axis1, "First axis: delta-p|r|omega1");
  locus_cmd->add_option("--grid1-min", l1_lo, "First axis start");
  locus_cmd->add_option("--grid1-max", l1_hi, "First axis end");
  locus_cmd->add_option("--grid1-steps", l1_steps, "First axis samples");
  locus_cmd->add_option("--axis2", locus_axis2, "Second axis: delta-p|r|omega1");
  locus_cmd->add_option("--grid2-min", l2_lo, "Second axis start");
  locus_cmd->add_option("--grid2-max", l2_hi, "Second axis end");
  locus_cmd->add_option("--grid2-steps", l2_steps, "Second axis samples");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle",
                                        "Time-domain check of the steady states");
  CommonOptions oracle_opt;
  oracle_opt.attach(oracle_cmd);
  double oracle_iin = 1.0, oracle_tmax = 200.0;
  int oracle_samples = 400;
  std::string oracle_dump;
  oracle_cmd->add_option("--iin", oracle_iin, "Input intensity per beam");
  oracle_cmd->add_option("--t-max", oracle_tmax, "Trajectory length for --dump");
  oracle_cmd->add_option("--samples", oracle_samples, "Trajectory samples for --dump");
  oracle_cmd->add_option("--dump", oracle_dump, "Write a trajectory CSV and exit");

  // figure
  auto* fig_cmd = app.add_subcommand("figure", "Named dataset presets");
  std::string fig_preset;
  std::string fig_out;
  fig_cmd->add_option("preset", fig_preset,
                      "fig2a-d, fig3a-b, fig4a-b, fig5a-c, fig6a-b, fig7a-b")
      ->required();
  fig_cmd->add_option("--out", fig_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (chi_cmd->parsed()) return run_chi(chi_opt);
    if (point_cmd->parsed()) return run_cpa_point(point_opt, taylor);
    if (thr_cmd->parsed()) return run_thresholds(thr_opt, thr_lo, thr_hi, thr_steps);
    if (freq_cmd->parsed())
      return run_frequencies(freq_opt, freq_iin, freq_lo, freq_hi, freq_steps);
    if (regime_cmd->parsed()) return run_regime(regime_opt);
    if (onset_cmd->parsed())
      return run_onset(onset_opt, onset_sweep, onset_lo, onset_hi, onset_iin_max);
    if (curve_cmd->parsed()) return run_curve(curve_opt, curve_iin_max, curve_points);
    if (hyst_cmd->parsed()) return run_hysteresis(hyst_opt, hyst_min, hyst_max, hyst_steps);
    if (map_cmd->parsed())
      return run_map(map_opt, map_dp_lo, map_dp_hi, map_dp_steps, map_iin_lo, map_iin_hi,
                     map_iin_steps, map_policy, map_log);
    if (locus_cmd->parsed())
      return run_locus(locus_opt, locus_axis1, l1_lo, l1_hi, l1_steps, locus_axis2, l2_lo,
                       l2_hi, l2_steps);
    if (oracle_cmd->parsed())
      return run_oracle(oracle_opt, oracle_iin, oracle_tmax, oracle_samples, oracle_dump);
    if (fig_cmd->parsed()) return run_figure(fig_preset, fig_out);
  } catch (const cpa::RootFindingFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
