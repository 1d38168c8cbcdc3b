#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cogrelay/channel.hpp"
#include "cogrelay/energy.hpp"
#include "cogrelay/primary.hpp"
#include "cogrelay/secondary.hpp"

namespace cogrelay::sim {

struct OutageEstimate {
    double probability = 0.0;
    std::uint64_t trials = 0;
    double half_width_95 = 0.0;

    static OutageEstimate from_counts(std::uint64_t outages, std::uint64_t trials);
};

enum class HarvestProfile { exponential, deterministic };

// Deterministic per-purpose seed derivation; every consumer of randomness in
// a run owns a stream derived from (seed, tag), so adding consumers never
// shifts existing streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

// Per-relay energy queue state.
struct RelayState {
    double battery = 0.0;  // joules, never negative
    bool active = false;   // battery >= p_tx * T at the last check
};

// What happened in one slot; recorded only when tracing is enabled.
struct SlotOutcome {
    int n_active = 0;
    int selected_relay = -1;  // -1: empty active set
    bool secondary_outage = false;
    double end_to_end_sinr = 0.0;  // best-relay metric; 0 when no relay transmits
};

struct SecondarySimConfig {
    channel::LinkSpec st_sr, sr_sd, pt_sr, pt_sd;
    double p_st = 1.0;
    double p_tx = 1.0;  // relay transmit power in use this run
    double p_pt = 1.0;
    double n0 = 1e-9;
    double gamma = 1.0;
    int m_relays = 3;
    double h_av = 2.0;
    double slot_duration = 1.0;  // T; a slot spans 2T
    std::uint64_t slots = 100000;
    std::uint64_t seed = 1;
    HarvestProfile profile = HarvestProfile::exponential;
    double warmup_fraction = 0.10;  // slots excluded from statistics
    // When false, every relay's second hop sees its own PT->SD draw. That is
    // deliberately wrong (the real channel shares one draw) and exists only
    // for the correlation regression test.
    bool correlated_interference = true;
    std::optional<double> battery_capacity;  // default: unbounded storage
    std::size_t trace_slots = 0;  // record SlotOutcomes for the first N slots

    void validate() const;
};

struct SecondarySimResult {
    OutageEstimate outage;
    std::vector<double> activity;        // per relay, fraction of counted slots
    std::vector<double> selection_freq;  // per relay, fraction of counted slots
    double mean_active = 0.0;            // mean active-relay count per counted slot
    std::uint64_t counted_slots = 0;
    std::uint64_t transmissions = 0;
    std::vector<SlotOutcome> trace;      // first trace_slots outcomes, in slot order
};

// Slot-by-slot two-phase protocol: harvest for 2T, fresh block-fading draws,
// activity check, best-relay selection by end-to-end SINR, outage count,
// battery deduction.
SecondarySimResult run_secondary_sim(const SecondarySimConfig& cfg);

// Empirical primary rate-outage frequency under a fixed interferer power.
// Gains depend only on (seed, trial), not on the power, so estimates at
// different powers are common-random-number coupled.
OutageEstimate run_primary_sim(const primary::PrimaryScenario& scn, double p_interferer,
                               std::uint64_t trials, std::uint64_t seed);

// P(best-of-N end-to-end SINR <= gamma) with N always-active relays; the
// per-trial PT->SD draw is shared across relays unless `correlated` is
// cleared (regression hook).
OutageEstimate run_fixed_n_sim(const secondary::SecondaryScenario& scn, int n_active,
                               std::uint64_t trials, std::uint64_t seed, bool correlated = true);

enum class PowerRule { max_power, min_rule };
enum class RowStatus { ok, saturated, infeasible };

const char* row_status_name(RowStatus s);

struct SweepInputs {
    channel::LinkSet links;
    double p_pt = 31.622776601683793;
    double n0 = 1e-9;
    double theta_p = 0.31950791077289417;  // primary SINR threshold
    double gamma = 0.31950791077289417;    // secondary SINR threshold
    energy::EnergyParams energy;
    std::vector<double> theta_grid;  // outage caps, strictly increasing
    PowerRule rule = PowerRule::max_power;
    double p_upper_bracket = 1e4;
    std::uint64_t slots = 100000;
    std::uint64_t seed = 1;
    HarvestProfile profile = HarvestProfile::exponential;
    double warmup_fraction = 0.10;
    unsigned threads = 0;  // 0: use hardware concurrency
};

struct SweepRow {
    double theta_cap = 0.0;
    RowStatus status = RowStatus::ok;
    double p_st = 0.0;
    double p_sr = 0.0;
    double p_effective = 0.0;  // relay power in use under the sweep's rule
    double omega = 0.0;
    double eta = 0.0;
    double psout_analytic = 0.0;
    double psout_sim = 0.0;
    double ci_halfwidth = 0.0;
    double n_active_mean = 0.0;
};

// One row per grid point, ordered by the grid; points run in parallel on
// independently derived seeds.
std::vector<SweepRow> run_sweep(const SweepInputs& in);

}  // namespace cogrelay::sim
