#include "cogrelay/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cogrelay/specmath.hpp"

namespace cogrelay::energy {

void EnergyParams::validate() const {
    if (h_av < 0.0 || !std::isfinite(h_av)) {
        throw std::invalid_argument("energy: harvesting rate must be >= 0");
    }
    if (m_relays < 1) {
        throw std::invalid_argument("energy: need at least one relay");
    }
    if (!(slot_duration > 0.0)) {
        throw std::invalid_argument("energy: slot duration must be positive");
    }
}

SelectionProbability selection_probability(const EnergyParams& params, double p_sr) {
    params.validate();
    if (!(p_sr > 0.0)) {
        throw std::invalid_argument("selection_probability: relay power must be positive");
    }
    const double raw = 2.0 * params.h_av / p_sr;
    SelectionProbability out;
    out.unconstrained = raw >= 1.0 / static_cast<double>(params.m_relays);
    out.value = raw > 1.0 ? 1.0 : raw;
    return out;
}

double relay_active_probability(const EnergyParams& params, double p_sr) {
    params.validate();
    if (!(p_sr > 0.0)) {
        throw std::invalid_argument("relay_active_probability: relay power must be positive");
    }
    const double omega = 2.0 * params.h_av / p_sr;
    const double m = static_cast<double>(params.m_relays);
    const double rest = 1.0 - m * omega;
    if (rest <= 0.0) return 1.0;
    return 1.0 - std::pow(rest, 1.0 / m);
}

double effective_relay_power(const EnergyParams& params, double p_sr) {
    params.validate();
    return std::min(2.0 * static_cast<double>(params.m_relays) * params.h_av, p_sr);
}

double aggregate_outage(int m_relays, double eta, std::span<const double> outage_by_n) {
    if (m_relays < 1) {
        throw std::invalid_argument("aggregate_outage: need at least one relay");
    }
    if (eta < 0.0 || eta > 1.0) {
        throw std::invalid_argument("aggregate_outage: eta must lie in [0, 1]");
    }
    if (outage_by_n.size() < static_cast<std::size_t>(m_relays)) {
        throw std::invalid_argument("aggregate_outage: need per-N outage for N = 1.." +
                                    std::to_string(m_relays));
    }
    specmath::CompensatedSum sum;
    sum.add(std::pow(1.0 - eta, m_relays));  // empty active set: certain outage
    for (int n = 1; n <= m_relays; ++n) {
        const double w = static_cast<double>(specmath::binomial(m_relays, n)) *
                         std::pow(eta, n) * std::pow(1.0 - eta, m_relays - n);
        sum.add(w * outage_by_n[static_cast<std::size_t>(n - 1)]);
    }
    double v = sum.value();
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

std::optional<std::size_t> find_tipping_index(const EnergyParams& params,
                                              std::span<const double> p_sr_by_point) {
    for (std::size_t i = 0; i < p_sr_by_point.size(); ++i) {
        if (relay_active_probability(params, p_sr_by_point[i]) < 1.0) return i;
    }
    return std::nullopt;
}

}  // namespace cogrelay::energy
