#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cogrelay/sim.hpp"

namespace cogrelay::csv {

// 12 significant digits, shortest form.
std::string format_number(double v);

// RFC-4180 quoting: fields containing comma, quote or newline get quoted,
// embedded quotes doubled.
std::string quote(const std::string& field);

inline constexpr const char* kCurveHeader =
    "theta_p,p_st,p_sr,p_effective,omega,eta,p_sout_analytical,p_sout_simulated,"
    "ci_halfwidth,n_active_mean,status";

// Metadata comment lines, header, then one row per sweep point. Infeasible
// rows keep theta_p and status but leave the numeric fields empty.
void write_curve(std::ostream& out, const std::vector<sim::SweepRow>& rows,
                 std::uint64_t seed, const std::string& config_hash);

}  // namespace cogrelay::csv
