#include "cogrelay/csv.hpp"

#include <cstdio>

namespace cogrelay::csv {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_curve(std::ostream& out, const std::vector<sim::SweepRow>& rows, std::uint64_t seed,
                 const std::string& config_hash) {
    out << "# cogrelay curve\n";
    out << "# seed=" << seed << " config_hash=" << config_hash << "\n";
    out << kCurveHeader << "\n";
    for (const auto& r : rows) {
        out << format_number(r.theta_cap) << ',';
        if (r.status == sim::RowStatus::infeasible) {
            out << ",,,,,,,,,";
        } else {
            out << format_number(r.p_st) << ',' << format_number(r.p_sr) << ','
                << format_number(r.p_effective) << ',' << format_number(r.omega) << ','
                << format_number(r.eta) << ',' << format_number(r.psout_analytic) << ','
                << format_number(r.psout_sim) << ',' << format_number(r.ci_halfwidth) << ','
                << format_number(r.n_active_mean) << ',';
        }
        out << row_status_name(r.status) << "\n";
    }
}

}  // namespace cogrelay::csv
