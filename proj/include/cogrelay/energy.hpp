#pragma once

#include <optional>
#include <span>

namespace cogrelay::energy {

struct EnergyParams {
    double h_av = 2.0;        // mean harvesting rate, J/s
    int m_relays = 3;         // M
    double slot_duration = 1.0;  // T, seconds (one phase; a slot spans 2T)

    void validate() const;
};

struct SelectionProbability {
    double value = 0.0;        // omega = 2*H_av/P_SR, clamped to [0, 1]
    bool unconstrained = false;  // raw omega >= 1/M: energy never binds
};

// Long-run probability that a given relay is the one selected, from energy
// neutrality of the harvest/consume cycle.
SelectionProbability selection_probability(const EnergyParams& params, double p_sr);

// Probability a relay has enough stored energy to transmit:
// eta = 1 - [(1 - M*omega)^+]^(1/M). Equals 1 iff p_sr <= 2*M*H_av.
double relay_active_probability(const EnergyParams& params, double p_sr);

// Transmit power satisfying both the primary constraint and the
// always-active energy constraint: min(2*M*H_av, p_sr).
double effective_relay_power(const EnergyParams& params, double p_sr);

// Unconditions the per-N outage over the binomially distributed number of
// active relays; an empty active set is a certain outage.
// outage_by_n[k] holds the N = k+1 value.
double aggregate_outage(int m_relays, double eta, std::span<const double> outage_by_n);

// First grid point at which the relays leave the energy-unconstrained region
// (eta < 1). p_sr_by_point[i] is the solved relay power at grid point i.
std::optional<std::size_t> find_tipping_index(const EnergyParams& params,
                                              std::span<const double> p_sr_by_point);

}  // namespace cogrelay::energy
