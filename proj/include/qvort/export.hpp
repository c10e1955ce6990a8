#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qvort/correlation.hpp"
#include "qvort/flow.hpp"
#include "qvort/vortex.hpp"

namespace qvort {

// f64 with 17 significant digits, enough to round trip.
std::string fmt17(double v);

// Header "# k,E,count", one row per shell.
void write_spectrum_csv(const std::string& path, const Spectrum& spec);

// Header "# r_lo,r_hi,value,pair_count", rows, then "# fit: ..." comments.
void write_correlation_csv(const std::string& path, const CorrelationFunction& corr,
                           const std::vector<std::string>& fit_comments = {});

std::string fit_comment(const PowerLawFit& fit);
std::string fit_comment(const GaussianFit& fit);

// {dims:2, t, vortices:[{x,y,charge}]} plus grid and net-charge metadata.
nlohmann::json vortex_set_json(const std::vector<PointVortex>& vortices,
                               const GridSpec& grid, double t);
// {dims:3, t, lines:[{closed, points:[[x,y,z],...]}]} plus metadata.
nlohmann::json line_set_json(const VortexLineSet& lines);

std::vector<PointVortex> vortices_from_json(const nlohmann::json& j, GridSpec* grid,
                                            double* t);
VortexLineSet lines_from_json(const nlohmann::json& j);

void write_text(const std::string& path, const std::string& text);

}  // namespace qvort
