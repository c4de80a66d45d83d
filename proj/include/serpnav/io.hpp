#pragma once

#include <iosfwd>
#include <string>

#include "serpnav/gait.hpp"

namespace serpnav {

/// CSV with header A,kappa,xi_x,xi_y,omega, one row per grid point,
/// 9 significant digits.
void writeSweepCsv(const SweepResult& sweep, std::ostream& out);

/// Flat key-value record: v_forward, omega_slope, omega_intercept,
/// fit_r_squared.
void writeReductionMap(const ReductionMap& map, std::ostream& out);
void writeReductionMap(const ReductionMap& map, const std::string& path);
ReductionMap parseReductionMap(std::istream& in);
ReductionMap loadReductionMap(const std::string& path);

}  // namespace serpnav
