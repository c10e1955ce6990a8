// qvort: free-particle quantum vortex turbulence pipeline.
// Commands communicate only via files; every command writes its fully
// resolved configuration beside its outputs.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qvort/analytic.hpp"
#include "qvort/correlation.hpp"
#include "qvort/evolve.hpp"
#include "qvort/export.hpp"
#include "qvort/flow.hpp"
#include "qvort/snapshot.hpp"
#include "qvort/spectral.hpp"
#include "qvort/vortex.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qvort;

namespace {

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j;
  in >> j;
  return j;
}

// CLI flag beats config file beats built-in default.
template <class T>
void resolve(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
  if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

void write_config(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

double parse_meta_dk(const WaveField& f) {
  if (f.meta.params.empty()) return 0.0;
  try {
    const json j = json::parse(f.meta.params);
    return j.value("dk", 0.0);
  } catch (...) {
    return 0.0;
  }
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", t);
  return buf;
}

json fit_json(const Spectrum& spec, double k_lo, double k_hi) {
  json j;
  try {
    const PowerLawFit f = fit_power_law(spec, k_lo, k_hi);
    j["slope"] = f.slope;
    j["amplitude"] = f.amplitude;
    j["r2"] = f.r2;
    j["nbins"] = f.nbins;
  } catch (const std::exception& e) {
    j["error"] = e.what();
  }
  return j;
}

double component_energy(const VectorField& v) {
  double s = 0.0;
  for (int axis = 0; axis < v.grid.dims; ++axis)
    for (double c : v.comp[axis]) s += c * c;
  return 0.5 * s / static_cast<double>(v.grid.size());
}

// ---------------------------------------------------------------------------

int cmd_init(const std::string& cfg_path, const CLI::Option* o_dims,
             const CLI::Option* o_n, const CLI::Option* o_length,
             const CLI::Option* o_dk, const CLI::Option* o_srms,
             const CLI::Option* o_kc, const CLI::Option* o_seed, int dims, int n,
             double length, double dk, double s_rms, double k_center,
             std::uint64_t seed, const std::string& out) {
  const json cfg = load_config(cfg_path);
  resolve(o_dims, cfg, "dims", dims);
  resolve(o_n, cfg, "n", n);
  resolve(o_length, cfg, "length", length);
  resolve(o_srms, cfg, "s_rms", s_rms);
  resolve(o_kc, cfg, "k_center", k_center);
  resolve(o_seed, cfg, "seed", seed);
  if (o_dk->count() == 0 && cfg.contains("dk"))
    dk = cfg.at("dk").get<double>();
  else if (o_dk->count() == 0)
    dk = InitialConditionParams::defaults_for(dims).dk;

  GridSpec grid{dims, n, length};
  InitialConditionParams p;
  p.dk = dk;
  p.s_rms = s_rms;
  p.k_center = k_center;
  p.seed = seed;
  const WaveField f = random_phase_ic(grid, p);
  save_snapshot(f, out);

  json resolved{{"command", "init"}, {"dims", dims},      {"n", n},
                {"length", length},  {"dk", dk},          {"s_rms", s_rms},
                {"k_center", k_center}, {"seed", seed},   {"out", out}};
  write_config(out + ".config.json", resolved);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_evolve(const std::string& in, std::vector<double> times,
               const std::string& outdir) {
  const WaveField f = load_snapshot(in);
  fs::create_directories(outdir);
  if (times.empty()) {
    std::cerr << "warning: no output times requested, nothing to do\n";
    write_config(outdir + "/evolve.config.json",
                 json{{"command", "evolve"}, {"in", in}, {"times", times}});
    return 0;
  }
  std::sort(times.begin(), times.end());
  json written = json::array();
  for (double t : times) {
    const WaveField e = propagate(f, t);
    const std::string path = outdir + "/snap_t" + time_tag(t) + ".qtrb";
    save_snapshot(e, path);
    written.push_back(path);
    std::cout << "wrote " << path << "\n";
  }
  write_config(outdir + "/evolve.config.json",
               json{{"command", "evolve"},
                    {"in", in},
                    {"times", times},
                    {"outputs", written}});
  return 0;
}

int cmd_flow(const std::string& in, const std::string& outdir, double kappa,
             double fit_lo, double fit_hi, double band_lo, double band_hi) {
  const WaveField f = load_snapshot(in);
  const GridSpec& g = f.grid;
  fs::create_directories(outdir);

  if (fit_lo < 0.0 || fit_hi < 0.0) {
    const double dk = parse_meta_dk(f);
    if (dk > 0.0) {
      if (fit_lo < 0.0) fit_lo = 2.0 * dk * g.k_unit();
      if (fit_hi < 0.0) fit_hi = 0.25 * g.k_nyquist();
    }
  }

  const FlowFields base = fluid_variables(f);
  const FlowFields dec = helmholtz_decompose(base);
  const Spectrum s_total = energy_spectrum(dec.v);
  const Spectrum s_pot = energy_spectrum(dec.v_p);
  const Spectrum s_rot = energy_spectrum(dec.v_r);

  const FlowFields clipped = clip_velocity(base, kappa);
  const FlowFields cdec = helmholtz_decompose(clipped);
  const Spectrum c_total = energy_spectrum(cdec.v);
  const Spectrum c_pot = energy_spectrum(cdec.v_p);
  const Spectrum c_rot = energy_spectrum(cdec.v_r);

  write_spectrum_csv(outdir + "/spectrum_total.csv", s_total);
  write_spectrum_csv(outdir + "/spectrum_potential.csv", s_pot);
  write_spectrum_csv(outdir + "/spectrum_rotational.csv", s_rot);
  write_spectrum_csv(outdir + "/spectrum_total_clipped.csv", c_total);
  write_spectrum_csv(outdir + "/spectrum_potential_clipped.csv", c_pot);
  write_spectrum_csv(outdir + "/spectrum_rotational_clipped.csv", c_rot);

  const double ep = component_energy(dec.v_p);
  const double er = component_energy(dec.v_r);
  json diag;
  diag["input"] = in;
  diag["t"] = f.time;
  diag["grid"] = {{"dims", g.dims}, {"n", g.n}, {"length", g.length}};
  diag["clip_kappa"] = kappa;
  diag["clipped_points"] = clipped.clipped;
  diag["clipped_fraction"] =
      static_cast<double>(clipped.clipped) / static_cast<double>(g.size());
  diag["rotational_fraction"] = er / (ep + er);
  diag["energy"] = {{"total", total_energy(s_total)},
                    {"potential", ep},
                    {"rotational", er}};
  if (fit_lo > 0.0 && fit_hi > fit_lo) {
    diag["fit_range"] = {{"k_lo", fit_lo}, {"k_hi", fit_hi}};
    diag["fits"] = {{"total", fit_json(s_total, fit_lo, fit_hi)},
                    {"potential", fit_json(s_pot, fit_lo, fit_hi)},
                    {"rotational", fit_json(s_rot, fit_lo, fit_hi)},
                    {"total_clipped", fit_json(c_total, fit_lo, fit_hi)},
                    {"potential_clipped", fit_json(c_pot, fit_lo, fit_hi)},
                    {"rotational_clipped", fit_json(c_rot, fit_lo, fit_hi)}};
    try {
      diag["equipartition_ratio"] = equipartition_ratio(s_pot, s_rot, fit_lo, fit_hi);
      diag["equipartition_ratio_clipped"] =
          equipartition_ratio(c_pot, c_rot, fit_lo, fit_hi);
    } catch (const std::exception& e) {
      diag["equipartition_ratio_error"] = e.what();
    }
  }
  if (band_hi > band_lo && band_hi > 0.0) {
    diag["band"] = {{"k_lo", band_lo},
                    {"k_hi", band_hi},
                    {"energy", band_energy(s_total, band_lo, band_hi)}};
  }
  write_text(outdir + "/diagnostics.json", diag.dump(2) + "\n");
  write_config(outdir + "/flow.config.json",
               json{{"command", "flow"},
                    {"in", in},
                    {"clip_kappa", kappa},
                    {"fit_lo", fit_lo},
                    {"fit_hi", fit_hi},
                    {"band_lo", band_lo},
                    {"band_hi", band_hi}});
  std::cout << "wrote " << outdir << "/diagnostics.json\n";
  return 0;
}

int cmd_vortices(const std::string& in, const std::string& out, bool velocities) {
  const WaveField f = load_snapshot(in);
  json j;
  if (f.grid.dims == 2) {
    const std::vector<PointVortex> vs = detect_vortices_2d(f);
    j = vortex_set_json(vs, f.grid, f.time);
    if (velocities && !vs.empty()) {
      const Jet2Field jets(f);
      for (std::size_t i = 0; i < vs.size(); ++i) {
        json& e = j["vortices"][i];
        try {
          const auto w = vortex_velocity(jets, vs[i].x, vs[i].y);
          e["w"] = {w[0], w[1]};
        } catch (const TangentSurfacesError& err) {
          e["w_error"] = err.what();
        }
        try {
          const auto vb = material_velocity(jets, vs[i].x, vs[i].y);
          e["v_bar"] = {vb[0], vb[1]};
        } catch (const TangentSurfacesError& err) {
          e["v_bar_error"] = err.what();
        }
        if (vs.size() >= 2) {
          const auto bs = biot_savart_2d(vs, {vs[i].x, vs[i].y},
                                         static_cast<int>(i), f.grid.length);
          e["biot_savart"] = {bs[0], bs[1]};
        }
      }
    }
  } else {
    const VortexLineSet lines = trace_vortex_lines_3d(f);
    j = line_set_json(lines);
  }
  write_text(out, j.dump(2) + "\n");
  write_config(out + ".config.json", json{{"command", "vortices"},
                                          {"in", in},
                                          {"out", out},
                                          {"velocities", velocities}});
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_correlate(const std::string& in, const std::string& outdir, int nbins,
                  double rmin, double rmax, double fit_lo, double fit_hi) {
  std::ifstream jf(in);
  if (!jf) throw std::runtime_error("cannot open vortex set: " + in);
  json j;
  jf >> j;
  fs::create_directories(outdir);

  const int dims = j.value("dims", 0);
  if (dims == 2) {
    GridSpec g;
    double t = 0.0;
    const std::vector<PointVortex> vs = vortices_from_json(j, &g, &t);
    if (rmin <= 0.0) rmin = g.dx();
    if (rmax <= 0.0) rmax = 0.5 * g.length;
    const auto edges = log_bins(rmin, rmax, nbins);
    const auto eta = point_correlation_2d(vs, g, edges, true);
    const auto xi = point_correlation_2d(vs, g, edges, false);

    std::vector<std::string> eta_comments;
    try {
      eta_comments.push_back(fit_comment(fit_gaussian_screening(eta)));
    } catch (const std::exception& e) {
      eta_comments.push_back(std::string("# fit: error: ") + e.what());
    }
    write_correlation_csv(outdir + "/signed.csv", eta, eta_comments);

    std::vector<std::string> xi_comments;
    try {
      xi_comments.push_back(fit_comment(fit_correlation_power_law(
          xi, fit_lo > 0 ? fit_lo : rmin, fit_hi > 0 ? fit_hi : rmax)));
    } catch (const std::exception& e) {
      xi_comments.push_back(std::string("# fit: error: ") + e.what());
    }
    write_correlation_csv(outdir + "/unsigned.csv", xi, xi_comments);
  } else if (dims == 3) {
    const VortexLineSet lines = lines_from_json(j);
    const GridSpec& g = lines.grid;
    if (rmin <= 0.0) rmin = g.dx();
    if (rmax <= 0.0) rmax = 0.5 * g.length;
    if (fit_lo <= 0.0) fit_lo = 2.0 * g.dx();
    if (fit_hi <= 0.0) fit_hi = g.length / 8.0;
    const auto edges = log_bins(rmin, rmax, nbins);
    const auto eta = line_correlation_3d(lines, g, edges, true);
    const auto xi = line_correlation_3d(lines, g, edges, false);
    for (const auto& [name, corr] :
         {std::pair<const char*, const CorrelationFunction&>{"directed.csv", eta},
          {"undirected.csv", xi}}) {
      std::vector<std::string> comments;
      try {
        comments.push_back(fit_comment(fit_correlation_power_law(corr, fit_lo, fit_hi)));
      } catch (const std::exception& e) {
        comments.push_back(std::string("# fit: error: ") + e.what());
      }
      write_correlation_csv(outdir + "/" + name, corr, comments);
    }
  } else {
    throw std::runtime_error("correlate: input is neither a 2D nor a 3D vortex set");
  }
  write_config(outdir + "/correlate.config.json",
               json{{"command", "correlate"},
                    {"in", in},
                    {"bins", nbins},
                    {"rmin", rmin},
                    {"rmax", rmax},
                    {"fit_lo", fit_lo},
                    {"fit_hi", fit_hi}});
  std::cout << "wrote correlations to " << outdir << "\n";
  return 0;
}

int cmd_analytic_bessel(double c0, double k, int n, double length, double t,
                        double wflat, double wouter, const std::string& outdir) {
  GridSpec g{2, n, length};
  BesselPairParams bp;
  bp.c0 = c0;
  bp.k = k > 0.0 ? k : 4.0 * kJ1FirstZero / length;
  bp.center = {0.5 * length, 0.5 * length};
  const Window win{wflat, wouter};
  fs::create_directories(outdir);
  const WaveField f = bessel_pair_field(bp, g, t, win);
  save_snapshot(f, outdir + "/bessel.qtrb");

  const BesselVortexPair pos = bessel_vortex_positions(bp, t);
  std::string csv = "# name,x,y,charge,radius,angle,omega\n";
  const double omega = 0.5 * bp.k * bp.k;
  csv += "inner," + fmt17(pos.inner[0]) + "," + fmt17(pos.inner[1]) + ",1," +
         fmt17(pos.r_inner) + "," + fmt17(pos.angle) + "," + fmt17(omega) + "\n";
  csv += "outer," + fmt17(pos.outer[0]) + "," + fmt17(pos.outer[1]) + ",-1," +
         fmt17(pos.r_outer) + "," + fmt17(pos.angle) + "," + fmt17(omega) + "\n";
  write_text(outdir + "/positions.csv", csv);
  write_config(outdir + "/analytic.config.json",
               json{{"command", "analytic bessel"},
                    {"c0", c0},
                    {"k", bp.k},
                    {"n", n},
                    {"length", length},
                    {"t", t},
                    {"window_flat", wflat},
                    {"window_outer", wouter}});
  std::cout << "wrote " << outdir << "/bessel.qtrb\n";
  return 0;
}

int cmd_analytic_local(double a, double b, int n, double length,
                       double orientation, const std::string& outdir) {
  GridSpec g{2, n, length};
  LocalVortexModel m;
  m.a = a;
  m.b = b;
  m.orientation = orientation;
  m.x0 = {0.5 * length, 0.5 * length};
  fs::create_directories(outdir);
  save_snapshot(local_vortex_field(m, g), outdir + "/local.qtrb");

  // Closed-form reference table: phase, split, velocity, compression.
  std::string csv = "# r,phi,S,S_p,v_x,v_y,lap_S\n";
  for (double r : {0.05 * length, 0.1 * length}) {
    for (int i = 0; i < 16; ++i) {
      const double phi = 2.0 * kPi * i / 16;
      const double S = local_phase(a, b, phi);
      const auto split = local_phase_split(a, b, phi);
      const auto v = local_velocity(a, b, r, phi);
      const double comp = local_compression(a, b, r, phi);
      csv += fmt17(r) + "," + fmt17(phi) + "," + fmt17(S) + "," + fmt17(split[1]) +
             "," + fmt17(v[0]) + "," + fmt17(v[1]) + "," + fmt17(comp) + "\n";
    }
  }
  write_text(outdir + "/reference.csv", csv);
  write_config(outdir + "/analytic.config.json",
               json{{"command", "analytic local"},
                    {"a", a},
                    {"b", b},
                    {"n", n},
                    {"length", length},
                    {"orientation", orientation}});
  std::cout << "wrote " << outdir << "/local.qtrb\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free-particle quantum vortex turbulence toolkit"};
  app.require_subcommand(1);

  // init ----------------------------------------------------------------
  auto* init = app.add_subcommand("init", "generate a random-phase initial condition");
  int dims = 2, n = 512;
  double length = 1.0, dk = 20.0, s_rms = 10.0, k_center = 0.0;
  std::uint64_t seed = 0;
  std::string out, cfg_path;
  auto* o_dims = init->add_option("--dims", dims, "2 or 3");
  auto* o_n = init->add_option("--n", n, "samples per axis (power of two)");
  auto* o_length = init->add_option("--length", length, "box size L");
  auto* o_dk = init->add_option("--dk", dk, "phase spectral width (2pi/L units)");
  auto* o_srms = init->add_option("--s-rms", s_rms, "target RMS of the phase (rad)");
  auto* o_kc = init->add_option("--k-center", k_center, "injection annulus center");
  auto* o_seed = init->add_option("--seed", seed, "RNG seed");
  init->add_option("--out", out, "output snapshot path")->required();
  init->add_option("--config", cfg_path, "JSON config (flags override)");

  // evolve ---------------------------------------------------------------
  auto* evolve = app.add_subcommand("evolve", "exact jumps to the requested times");
  std::string ev_in, ev_outdir;
  std::vector<double> times;
  evolve->add_option("--in", ev_in, "input snapshot")->required();
  evolve->add_option("--times", times, "output times (comma separated)")
      ->delimiter(',');
  evolve->add_option("--outdir", ev_outdir, "output directory")->required();

  // flow -----------------------------------------------------------------
  auto* flow = app.add_subcommand("flow", "fluid variables, spectra, diagnostics");
  std::string fl_in, fl_outdir;
  double kappa = 1.0, fit_lo = -1.0, fit_hi = -1.0, band_lo = -1.0, band_hi = -1.0;
  flow->add_option("--in", fl_in, "input snapshot")->required();
  flow->add_option("--outdir", fl_outdir, "output directory")->required();
  flow->add_option("--clip-kappa", kappa, "velocity cap kappa/dx");
  flow->add_option("--fit-lo", fit_lo, "power-law fit k_lo");
  flow->add_option("--fit-hi", fit_hi, "power-law fit k_hi");
  flow->add_option("--band-lo", band_lo, "band energy k_lo");
  flow->add_option("--band-hi", band_hi, "band energy k_hi");

  // vortices ---------------------------------------------------------------
  auto* vort = app.add_subcommand("vortices", "detect point vortices / trace lines");
  std::string vo_in, vo_out;
  bool velocities = false;
  vort->add_option("--in", vo_in, "input snapshot")->required();
  vort->add_option("--out", vo_out, "output JSON path")->required();
  vort->add_flag("--velocities", velocities,
                 "add per-vortex w, v_bar, and Biot-Savart columns (2D)");

  // correlate ----------------------------------------------------------------
  auto* corr = app.add_subcommand("correlate", "two-point statistics of a vortex set");
  std::string co_in, co_outdir;
  int nbins = 64;
  double rmin = -1.0, rmax = -1.0, cfit_lo = -1.0, cfit_hi = -1.0;
  corr->add_option("--in", co_in, "vortex JSON from the vortices command")->required();
  corr->add_option("--outdir", co_outdir, "output directory")->required();
  corr->add_option("--bins", nbins, "number of logarithmic bins");
  corr->add_option("--rmin", rmin, "smallest separation (default dx)");
  corr->add_option("--rmax", rmax, "largest separation (default L/2)");
  corr->add_option("--fit-lo", cfit_lo, "power-law fit r_lo");
  corr->add_option("--fit-hi", cfit_hi, "power-law fit r_hi");

  // analytic -----------------------------------------------------------------
  auto* ana = app.add_subcommand("analytic", "closed-form reference fields");
  ana->require_subcommand(1);
  auto* bess = ana->add_subcommand("bessel", "two-vortex Bessel solution");
  double c0 = 0.3, bk = -1.0, bt = 0.0, wflat = 0.25, wouter = 0.36;
  int bn = 256;
  double blen = 1.0;
  std::string ba_outdir;
  bess->add_option("--c0", c0, "constant offset, 0 < c0 < max J1");
  bess->add_option("--k", bk, "radial wavenumber (default: first zero at L/4)");
  bess->add_option("--n", bn, "grid samples per axis");
  bess->add_option("--length", blen, "box size");
  bess->add_option("--t", bt, "evaluation time");
  bess->add_option("--window-flat", wflat, "window flat half-width (L units)");
  bess->add_option("--window-outer", wouter, "window outer half-width (L units)");
  bess->add_option("--outdir", ba_outdir, "output directory")->required();

  auto* loc = ana->add_subcommand("local", "diagonalized local vortex model");
  double la = 1.0, lb = 1.0, lorient = 0.0;
  int ln = 256;
  double llen = 1.0;
  std::string la_outdir;
  loc->add_option("--a", la, "amplitude a");
  loc->add_option("--b", lb, "amplitude b");
  loc->add_option("--orientation", lorient, "frame rotation (rad)");
  loc->add_option("--n", ln, "grid samples per axis");
  loc->add_option("--length", llen, "box size");
  loc->add_option("--outdir", la_outdir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*init)
      return cmd_init(cfg_path, o_dims, o_n, o_length, o_dk, o_srms, o_kc, o_seed,
                      dims, n, length, dk, s_rms, k_center, seed, out);
    if (*evolve) return cmd_evolve(ev_in, times, ev_outdir);
    if (*flow) return cmd_flow(fl_in, fl_outdir, kappa, fit_lo, fit_hi, band_lo, band_hi);
    if (*vort) return cmd_vortices(vo_in, vo_out, velocities);
    if (*corr)
      return cmd_correlate(co_in, co_outdir, nbins, rmin, rmax, cfit_lo, cfit_hi);
    if (*bess)
      return cmd_analytic_bessel(c0, bk, bn, blen, bt, wflat, wouter, ba_outdir);
    if (*loc) return cmd_analytic_local(la, lb, ln, llen, lorient, la_outdir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
