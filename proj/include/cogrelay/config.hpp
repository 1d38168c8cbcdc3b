#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cogrelay/channel.hpp"
#include "cogrelay/energy.hpp"
#include "cogrelay/primary.hpp"
#include "cogrelay/sim.hpp"

namespace cogrelay::config {

// Every scenario knob in one place. Defaults reproduce the reference system:
// P_PT = 15 dBW, N0 = -60 dBm, R_p = 0.4, R_s = 0.2 bits/s/Hz, path loss 4,
// ST(0,0) / relays(50,0) / SD(100,0) / PT(50,50) / PD(100,50).
struct SystemConfig {
    // [system]
    double p_pt_db = 15.0;
    std::string p_pt_db_unit = "dBW";  // dBW | dBm
    double n0_dbm = -60.0;
    double r_p = 0.4;  // primary target rate, bits/s/Hz
    double r_s = 0.2;  // secondary target rate, bits/s/Hz (half-duplex, two phases)

    // [topology]
    channel::Topology topology;

    // [fading]
    int m_f = 2;    // forward links ST-SR, SR-SD
    int m_int = 1;  // interference links PT-SR, PT-SD, ST-PD, SR-PD
    // Severity class of the primary's own PT-PD link: "mf" or "mint".
    std::string pt_pd_class = "mf";

    // [energy]
    double h_av = 2.0;
    int relays = 3;
    double slot_duration = 1.0;

    // [sweep]
    double theta_min = 5e-4;
    double theta_max = 1e-2;
    int theta_steps = 10;
    std::string mode = "max-power";  // max-power | min-rule
    double p_upper_bracket = 1e4;

    // [simulation]
    std::uint64_t slots = 100000;
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 12345;
    std::string harvest_profile = "exponential";  // exponential | deterministic
    double warmup_fraction = 0.10;

    void validate() const;

    double p_pt_watts() const;
    double n0_watts() const;
    double theta_p() const;  // 2^r_p - 1
    double gamma_s() const;  // 2^(2*r_s) - 1
    int m_primary_link() const;
    channel::LinkSet links() const;
    energy::EnergyParams energy_params() const;
    std::vector<double> theta_grid() const;
    sim::HarvestProfile harvest() const;
    sim::PowerRule power_rule() const;
    sim::SweepInputs sweep_inputs() const;
    primary::PrimaryScenario primary_scenario_st() const;
    primary::PrimaryScenario primary_scenario_sr() const;
    secondary::SecondaryScenario secondary_scenario(double p_st, double p_sr) const;

    // Canonical key=value dump (fixed order, full precision) and its FNV-1a
    // hash; the hash is embedded in emitted artifacts.
    std::string canonical_dump() const;
    std::string hash_hex() const;
};

// Parses the sectioned key-value config text onto `cfg`. Unknown sections or
// keys and malformed values are errors naming the offender. An empty file
// leaves the defaults untouched.
void apply_config_text(SystemConfig& cfg, const std::string& text, const std::string& source);

// Loads the file at `path` onto the defaults and validates.
SystemConfig load_config(const std::string& path);

}  // namespace cogrelay::config
