#pragma once

#include "tlab/config.hpp"
#include "tlab/output.hpp"

#include <cstdint>
#include <string>

namespace tlab {

/// Far-field smallness at a disk transmission eigenvalue.
Report run_E1_nonscattering(const Json& config);
/// Corner decay of polygon transmission eigenfunctions.
Report run_E2_corner_vanishing(const Json& config);
/// Positive far-field floor for kernels of fixed vanishing order at a vertex.
Report run_E3_farfield_floor(const Json& config, std::uint64_t seed);
/// Cone Laplace-transform lower bound along the CGO curve.
Report run_E4_cone_bound(const Json& config, std::uint64_t seed);

/// Dispatch on "E1".."E4"; throws ConfigError for unknown ids.
Report run_experiment(const std::string& id, const Json& config, std::uint64_t seed);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tlab
