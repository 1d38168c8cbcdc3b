#pragma once

#include <stdexcept>

#include "cogrelay/channel.hpp"

namespace cogrelay::primary {

// Pr( p_sig*S / (p_int*I + n0) > threshold ) for independent Gamma power
// gains S ~ sig, I ~ intf. This is the closed form behind the primary outage
// (both interferer roles) and the relay decode-success probability; it is the
// exact expectation of the Erlang survival function over the interferer gain.
// Requires integer severities 1..8 on both links.
double prob_sinr_exceeds(const channel::LinkSpec& sig, double p_sig, const channel::LinkSpec& intf,
                         double p_int, double threshold, double n0);

// Primary-user side of one secondary transmit phase.
struct PrimaryScenario {
    double p_pt = 31.622776601683793;  // W
    double n0 = 1e-9;                  // W
    double theta_p = 0.31950791077289417;
    channel::LinkSpec link_pp;  // PT -> PD
    channel::LinkSpec link_ip;  // interferer -> PD (ST or relay)

    void validate() const;
};

// P(rate outage at PD) when the interferer transmits with p_interferer.
// Strictly increasing in p_interferer.
double primary_outage(const PrimaryScenario& scn, double p_interferer);

struct PowerBudget {
    double p_st = 0.0;
    double p_sr = 0.0;
    double effective_p_sr = 0.0;  // min(2*M*H_av, p_sr)
};

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MaxPowerResult {
    double power = 0.0;
    bool bracket_saturated = false;
};

// Largest interferer power whose primary outage stays within theta_outage_cap,
// by bisection (primary_outage is strictly increasing in power). Throws
// InfeasibleError when even a silent interferer violates the cap; reports
// bracket saturation when the upper bracket itself satisfies it.
MaxPowerResult solve_max_power(const PrimaryScenario& scn, double theta_outage_cap,
                               double p_upper_bracket = 1e4, double rel_tol = 1e-9);

}  // namespace cogrelay::primary
