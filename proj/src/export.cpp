#include "qvort/export.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qvort {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_spectrum_csv(const std::string& path, const Spectrum& spec) {
  std::string s = "# k,E,count\n";
  for (int b = 0; b < spec.shells(); ++b) {
    s += fmt17(spec.k(b));
    s += ',';
    s += fmt17(spec.energy[b]);
    s += ',';
    s += std::to_string(spec.counts[b]);
    s += '\n';
  }
  write_text(path, s);
}

void write_correlation_csv(const std::string& path, const CorrelationFunction& corr,
                           const std::vector<std::string>& fit_comments) {
  std::string s = "# r_lo,r_hi,value,pair_count\n";
  for (int b = 0; b < corr.bins(); ++b) {
    s += fmt17(corr.edges[b]);
    s += ',';
    s += fmt17(corr.edges[b + 1]);
    s += ',';
    s += fmt17(corr.value[b]);
    s += ',';
    s += std::to_string(corr.pair_count[b]);
    s += '\n';
  }
  for (const auto& c : fit_comments) {
    s += c;
    s += '\n';
  }
  write_text(path, s);
}

std::string fit_comment(const PowerLawFit& fit) {
  return "# fit: slope=" + fmt17(fit.slope) + ",amplitude=" + fmt17(fit.amplitude) +
         ",r2=" + fmt17(fit.r2);
}

std::string fit_comment(const GaussianFit& fit) {
  return "# fit: gaussian,amplitude=" + fmt17(fit.amplitude) +
         ",sigma=" + fmt17(fit.sigma) + ",r2=" + fmt17(fit.r2) +
         ",drop_radius=" + fmt17(fit.drop_radius);
}

json vortex_set_json(const std::vector<PointVortex>& vortices, const GridSpec& grid,
                     double t) {
  json j;
  j["dims"] = 2;
  j["t"] = t;
  j["L"] = grid.length;
  j["n"] = grid.n;
  j["net_charge"] = net_charge(vortices);
  j["vortices"] = json::array();
  for (const auto& v : vortices) {
    json e;
    e["x"] = v.x;
    e["y"] = v.y;
    e["charge"] = v.charge;
    if (!v.converged) e["subpixel_converged"] = false;
    j["vortices"].push_back(std::move(e));
  }
  return j;
}

json line_set_json(const VortexLineSet& lines) {
  json j;
  j["dims"] = 3;
  j["t"] = lines.time;
  j["L"] = lines.grid.length;
  j["n"] = lines.grid.n;
  j["total_length"] = lines.total_length;
  j["lines"] = json::array();
  for (const auto& line : lines.lines) {
    json e;
    e["closed"] = line.closed;
    e["points"] = json::array();
    for (const auto& p : line.points) e["points"].push_back({p[0], p[1], p[2]});
    j["lines"].push_back(std::move(e));
  }
  return j;
}

std::vector<PointVortex> vortices_from_json(const json& j, GridSpec* grid, double* t) {
  if (j.value("dims", 0) != 2)
    throw std::invalid_argument("vortices_from_json: not a 2D vortex set");
  if (grid) {
    grid->dims = 2;
    grid->n = j.at("n").get<int>();
    grid->length = j.at("L").get<double>();
  }
  if (t) *t = j.value("t", 0.0);
  std::vector<PointVortex> out;
  for (const auto& e : j.at("vortices")) {
    PointVortex v;
    v.x = e.at("x").get<double>();
    v.y = e.at("y").get<double>();
    v.charge = e.at("charge").get<int>();
    out.push_back(v);
  }
  return out;
}

VortexLineSet lines_from_json(const json& j) {
  if (j.value("dims", 0) != 3)
    throw std::invalid_argument("lines_from_json: not a 3D line set");
  VortexLineSet set;
  set.grid.dims = 3;
  set.grid.n = j.at("n").get<int>();
  set.grid.length = j.at("L").get<double>();
  set.time = j.value("t", 0.0);
  set.total_length = j.value("total_length", 0.0);
  for (const auto& e : j.at("lines")) {
    VortexLine line;
    line.closed = e.at("closed").get<bool>();
    for (const auto& p : e.at("points"))
      line.points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    set.lines.push_back(std::move(line));
  }
  return set;
}

}  // namespace qvort
