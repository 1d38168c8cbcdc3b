#include "cogrelay/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cogrelay::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    double out = 0.0;
    const auto* first = v.data();
    const auto* last = v.data() + v.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last || v.empty()) {
        throw std::invalid_argument("config: value for '" + key + "' is not a number: '" + value +
                                    "'");
    }
    return out;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    std::int64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || v.empty()) {
        throw std::invalid_argument("config: value for '" + key + "' is not an integer: '" +
                                    value + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || v.empty()) {
        throw std::invalid_argument("config: value for '" + key +
                                    "' is not a nonnegative integer: '" + value + "'");
    }
    return out;
}

using Setter = std::function<void(SystemConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto dbl = [](double SystemConfig::* field) {
            return [field](SystemConfig& c, const std::string& k, const std::string& v) {
                c.*field = parse_double(k, v);
            };
        };
        auto integer = [](int SystemConfig::* field) {
            return [field](SystemConfig& c, const std::string& k, const std::string& v) {
                c.*field = static_cast<int>(parse_int(k, v));
            };
        };
        auto u64 = [](std::uint64_t SystemConfig::* field) {
            return [field](SystemConfig& c, const std::string& k, const std::string& v) {
                c.*field = parse_u64(k, v);
            };
        };
        auto str = [](std::string SystemConfig::* field) {
            return [field](SystemConfig& c, const std::string&, const std::string& v) {
                c.*field = trim(v);
            };
        };
        auto coord = [](double channel::Point::* axis, channel::Point channel::Topology::* pt) {
            return [axis, pt](SystemConfig& c, const std::string& k, const std::string& v) {
                c.topology.*pt.*axis = parse_double(k, v);
            };
        };

        t["system.p_pt_db"] = dbl(&SystemConfig::p_pt_db);
        t["system.p_pt_db_unit"] = str(&SystemConfig::p_pt_db_unit);
        t["system.n0_dbm"] = dbl(&SystemConfig::n0_dbm);
        t["system.r_p"] = dbl(&SystemConfig::r_p);
        t["system.r_s"] = dbl(&SystemConfig::r_s);

        t["topology.st_x"] = coord(&channel::Point::x, &channel::Topology::st);
        t["topology.st_y"] = coord(&channel::Point::y, &channel::Topology::st);
        t["topology.relays_x"] = coord(&channel::Point::x, &channel::Topology::relays);
        t["topology.relays_y"] = coord(&channel::Point::y, &channel::Topology::relays);
        t["topology.sd_x"] = coord(&channel::Point::x, &channel::Topology::sd);
        t["topology.sd_y"] = coord(&channel::Point::y, &channel::Topology::sd);
        t["topology.pt_x"] = coord(&channel::Point::x, &channel::Topology::pt);
        t["topology.pt_y"] = coord(&channel::Point::y, &channel::Topology::pt);
        t["topology.pd_x"] = coord(&channel::Point::x, &channel::Topology::pd);
        t["topology.pd_y"] = coord(&channel::Point::y, &channel::Topology::pd);
        t["topology.path_loss_exponent"] =
            [](SystemConfig& c, const std::string& k, const std::string& v) {
                c.topology.path_loss_exponent = parse_double(k, v);
            };

        t["fading.m_f"] = integer(&SystemConfig::m_f);
        t["fading.m_int"] = integer(&SystemConfig::m_int);
        t["fading.pt_pd_class"] = str(&SystemConfig::pt_pd_class);

        t["energy.h_av"] = dbl(&SystemConfig::h_av);
        t["energy.relays"] = integer(&SystemConfig::relays);
        t["energy.slot_duration"] = dbl(&SystemConfig::slot_duration);

        t["sweep.theta_min"] = dbl(&SystemConfig::theta_min);
        t["sweep.theta_max"] = dbl(&SystemConfig::theta_max);
        t["sweep.theta_steps"] = integer(&SystemConfig::theta_steps);
        t["sweep.mode"] = str(&SystemConfig::mode);
        t["sweep.p_upper_bracket"] = dbl(&SystemConfig::p_upper_bracket);

        t["simulation.slots"] = u64(&SystemConfig::slots);
        t["simulation.trials"] = u64(&SystemConfig::trials);
        t["simulation.seed"] = u64(&SystemConfig::seed);
        t["simulation.harvest_profile"] = str(&SystemConfig::harvest_profile);
        t["simulation.warmup_fraction"] = dbl(&SystemConfig::warmup_fraction);
        return t;
    }();
    return table;
}

}  // namespace

void apply_config_text(SystemConfig& cfg, const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw std::invalid_argument("config " + where + ": malformed section header '" +
                                            t + "'");
            }
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config " + where + ": expected key = value, got '" + t +
                                        "'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = t.substr(eq + 1);
        if (section.empty()) {
            throw std::invalid_argument("config " + where + ": key '" + key +
                                        "' appears before any [section]");
        }
        const std::string full = section + "." + key;
        const auto it = setters().find(full);
        if (it == setters().end()) {
            throw std::invalid_argument("config " + where + ": unknown key '" + full + "'");
        }
        it->second(cfg, full, value);
    }
}

SystemConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    SystemConfig cfg;
    apply_config_text(cfg, buf.str(), path);
    cfg.validate();
    return cfg;
}

void SystemConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& what) {
        throw std::invalid_argument("config: " + key + " " + what);
    };
    if (p_pt_db_unit != "dBW" && p_pt_db_unit != "dBm") {
        fail("system.p_pt_db_unit", "must be dBW or dBm");
    }
    if (!(r_p > 0.0)) fail("system.r_p", "must be positive");
    if (!(r_s > 0.0)) fail("system.r_s", "must be positive");
    topology.validate();
    if (m_f < 1 || m_f > 8) fail("fading.m_f", "must be an integer in [1, 8]");
    if (m_int < 1 || m_int > 8) fail("fading.m_int", "must be an integer in [1, 8]");
    if (pt_pd_class != "mf" && pt_pd_class != "mint") {
        fail("fading.pt_pd_class", "must be 'mf' or 'mint'");
    }
    if (h_av < 0.0) fail("energy.h_av", "must be >= 0");
    if (relays < 1 || relays > 16) fail("energy.relays", "must be an integer in [1, 16]");
    if (!(slot_duration > 0.0)) fail("energy.slot_duration", "must be positive");
    if (!(theta_min > 0.0) || theta_min >= 1.0) fail("sweep.theta_min", "must lie in (0, 1)");
    if (!(theta_max > 0.0) || theta_max >= 1.0) fail("sweep.theta_max", "must lie in (0, 1)");
    if (theta_steps < 1) fail("sweep.theta_steps", "must be >= 1");
    if (theta_steps > 1 && !(theta_max > theta_min)) {
        fail("sweep.theta_max", "must exceed sweep.theta_min for a multi-point grid");
    }
    if (mode != "max-power" && mode != "min-rule") {
        fail("sweep.mode", "must be 'max-power' or 'min-rule'");
    }
    if (!(p_upper_bracket > 0.0)) fail("sweep.p_upper_bracket", "must be positive");
    if (slots == 0) fail("simulation.slots", "must be >= 1");
    if (trials == 0) fail("simulation.trials", "must be >= 1");
    if (harvest_profile != "exponential" && harvest_profile != "deterministic") {
        fail("simulation.harvest_profile", "must be 'exponential' or 'deterministic'");
    }
    if (warmup_fraction < 0.0 || warmup_fraction >= 1.0) {
        fail("simulation.warmup_fraction", "must lie in [0, 1)");
    }
}

double SystemConfig::p_pt_watts() const {
    const double dbw = p_pt_db_unit == "dBm" ? p_pt_db - 30.0 : p_pt_db;
    return std::pow(10.0, dbw / 10.0);
}

double SystemConfig::n0_watts() const { return std::pow(10.0, (n0_dbm - 30.0) / 10.0); }

double SystemConfig::theta_p() const { return std::exp2(r_p) - 1.0; }

double SystemConfig::gamma_s() const { return std::exp2(2.0 * r_s) - 1.0; }

int SystemConfig::m_primary_link() const { return pt_pd_class == "mint" ? m_int : m_f; }

channel::LinkSet SystemConfig::links() const {
    return channel::build_links(topology, m_f, m_int, m_primary_link());
}

energy::EnergyParams SystemConfig::energy_params() const {
    return energy::EnergyParams{h_av, relays, slot_duration};
}

std::vector<double> SystemConfig::theta_grid() const {
    std::vector<double> grid;
    if (theta_steps == 1) {
        grid.push_back(theta_min);
        return grid;
    }
    const double step = (theta_max - theta_min) / static_cast<double>(theta_steps - 1);
    for (int i = 0; i < theta_steps; ++i) {
        grid.push_back(theta_min + step * static_cast<double>(i));
    }
    grid.back() = theta_max;
    return grid;
}

sim::HarvestProfile SystemConfig::harvest() const {
    return harvest_profile == "deterministic" ? sim::HarvestProfile::deterministic
                                              : sim::HarvestProfile::exponential;
}

sim::PowerRule SystemConfig::power_rule() const {
    return mode == "min-rule" ? sim::PowerRule::min_rule : sim::PowerRule::max_power;
}

sim::SweepInputs SystemConfig::sweep_inputs() const {
    sim::SweepInputs in;
    in.links = links();
    in.p_pt = p_pt_watts();
    in.n0 = n0_watts();
    in.theta_p = theta_p();
    in.gamma = gamma_s();
    in.energy = energy_params();
    in.theta_grid = theta_grid();
    in.rule = power_rule();
    in.p_upper_bracket = p_upper_bracket;
    in.slots = slots;
    in.seed = seed;
    in.profile = harvest();
    in.warmup_fraction = warmup_fraction;
    return in;
}

primary::PrimaryScenario SystemConfig::primary_scenario_st() const {
    const auto ls = links();
    return primary::PrimaryScenario{p_pt_watts(), n0_watts(), theta_p(), ls.pt_pd, ls.st_pd};
}

primary::PrimaryScenario SystemConfig::primary_scenario_sr() const {
    const auto ls = links();
    return primary::PrimaryScenario{p_pt_watts(), n0_watts(), theta_p(), ls.pt_pd, ls.sr_pd};
}

secondary::SecondaryScenario SystemConfig::secondary_scenario(double p_st, double p_sr) const {
    const auto ls = links();
    secondary::SecondaryScenario scn;
    scn.p_st = p_st;
    scn.p_sr = p_sr;
    scn.p_pt = p_pt_watts();
    scn.n0 = n0_watts();
    scn.gamma = gamma_s();
    scn.st_sr = ls.st_sr;
    scn.sr_sd = ls.sr_sd;
    scn.pt_sr = ls.pt_sr;
    scn.pt_sd = ls.pt_sd;
    return scn;
}

std::string SystemConfig::canonical_dump() const {
    std::ostringstream out;
    out.precision(17);
    out << "system.p_pt_db=" << p_pt_db << '\n'
        << "system.p_pt_db_unit=" << p_pt_db_unit << '\n'
        << "system.n0_dbm=" << n0_dbm << '\n'
        << "system.r_p=" << r_p << '\n'
        << "system.r_s=" << r_s << '\n'
        << "topology.st=" << topology.st.x << ',' << topology.st.y << '\n'
        << "topology.relays=" << topology.relays.x << ',' << topology.relays.y << '\n'
        << "topology.sd=" << topology.sd.x << ',' << topology.sd.y << '\n'
        << "topology.pt=" << topology.pt.x << ',' << topology.pt.y << '\n'
        << "topology.pd=" << topology.pd.x << ',' << topology.pd.y << '\n'
        << "topology.path_loss_exponent=" << topology.path_loss_exponent << '\n'
        << "fading.m_f=" << m_f << '\n'
        << "fading.m_int=" << m_int << '\n'
        << "fading.pt_pd_class=" << pt_pd_class << '\n'
        << "energy.h_av=" << h_av << '\n'
        << "energy.relays=" << relays << '\n'
        << "energy.slot_duration=" << slot_duration << '\n'
        << "sweep.theta_min=" << theta_min << '\n'
        << "sweep.theta_max=" << theta_max << '\n'
        << "sweep.theta_steps=" << theta_steps << '\n'
        << "sweep.mode=" << mode << '\n'
        << "sweep.p_upper_bracket=" << p_upper_bracket << '\n'
        << "simulation.slots=" << slots << '\n'
        << "simulation.trials=" << trials << '\n'
        << "simulation.seed=" << seed << '\n'
        << "simulation.harvest_profile=" << harvest_profile << '\n'
        << "simulation.warmup_fraction=" << warmup_fraction << '\n';
    return out.str();
}

std::string SystemConfig::hash_hex() const {
    // FNV-1a 64
    const std::string dump = canonical_dump();
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : dump) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace cogrelay::config
