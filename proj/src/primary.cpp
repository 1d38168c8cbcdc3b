#include "cogrelay/primary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cogrelay/specmath.hpp"

namespace cogrelay::primary {

using specmath::CompensatedSum;
using specmath::log_factorial;

namespace {

void require_order(const channel::LinkSpec& l, const char* what) {
    if (l.m < 1 || l.m > 8) {
        throw std::domain_error(std::string("closed form requires integer fading severity in "
                                            "[1, 8] on ") +
                                what + ", got m = " + std::to_string(l.m));
    }
}

}  // namespace

double prob_sinr_exceeds(const channel::LinkSpec& sig, double p_sig, const channel::LinkSpec& intf,
                         double p_int, double threshold, double n0) {
    require_order(sig, "the signal link");
    require_order(intf, "the interference link");
    if (!(p_sig > 0.0) || !(n0 > 0.0) || p_int < 0.0 || threshold < 0.0) {
        throw std::domain_error("prob_sinr_exceeds: need p_sig > 0, n0 > 0, p_int >= 0, "
                                "threshold >= 0");
    }
    if (threshold == 0.0) return 1.0;  // SINR is positive almost surely

    const double a_sig = sig.alpha();
    const double a_int = intf.alpha();
    const double c = a_sig * threshold * n0 / p_sig;      // noise-only exponent
    const double den = a_sig * threshold * p_int / p_sig + a_int;
    const double log_c = std::log(c);
    const double log_den = std::log(den);
    const double log_pi_n0 = p_int > 0.0 ? std::log(p_int / n0) : 0.0;
    const double prefix = intf.m * std::log(a_int) - log_factorial(intf.m - 1) - c;

    // All terms are positive; each is assembled in log space to keep the huge
    // (p_int/n0)^t against den^(m+t) ratios in range.
    CompensatedSum total;
    for (int k = 0; k < sig.m; ++k) {
        const double base_k = prefix + (k > 0 ? k * log_c : 0.0) - log_factorial(k);
        for (int t = 0; t <= k; ++t) {
            if (t > 0 && p_int == 0.0) continue;  // (p_int/n0)^t vanishes
            const double lt = base_k + std::log(static_cast<double>(specmath::binomial(k, t))) +
                              t * log_pi_n0 + log_factorial(intf.m + t - 1) -
                              (intf.m + t) * log_den;
            total.add(std::exp(lt));
        }
    }
    double p = total.value();
    if (p > 1.0) p = 1.0;
    if (p < 0.0) p = 0.0;
    return p;
}

void PrimaryScenario::validate() const {
    if (!(p_pt > 0.0) || !(n0 > 0.0)) {
        throw std::invalid_argument("primary scenario: powers and noise must be positive");
    }
    if (!(theta_p > 0.0)) {
        throw std::invalid_argument("primary scenario: SINR threshold theta_p must be positive");
    }
    link_pp.validate("PT-PD");
    link_ip.validate("interferer-PD");
}

double primary_outage(const PrimaryScenario& scn, double p_interferer) {
    return 1.0 - prob_sinr_exceeds(scn.link_pp, scn.p_pt, scn.link_ip, p_interferer, scn.theta_p,
                                   scn.n0);
}

MaxPowerResult solve_max_power(const PrimaryScenario& scn, double theta_outage_cap,
                               double p_upper_bracket, double rel_tol) {
    if (!(theta_outage_cap > 0.0) || !(theta_outage_cap < 1.0)) {
        throw std::domain_error("solve_max_power: outage cap must lie in (0, 1)");
    }
    if (!(p_upper_bracket > 0.0)) {
        throw std::domain_error("solve_max_power: upper bracket must be positive");
    }
    const double floor = primary_outage(scn, 0.0);
    if (floor > theta_outage_cap) {
        throw InfeasibleError(
            "primary outage constraint infeasible: even with a silent secondary the outage is " +
            std::to_string(floor) + " > cap " + std::to_string(theta_outage_cap));
    }
    if (primary_outage(scn, p_upper_bracket) <= theta_outage_cap) {
        return {p_upper_bracket, true};
    }
    double lo = 0.0;
    double hi = p_upper_bracket;
    // max(hi, 1) keeps the loop finite when the answer is 0 exactly.
    while (hi - lo > rel_tol * std::max(hi, 1.0)) {
        const double mid = 0.5 * (lo + hi);
        if (primary_outage(scn, mid) <= theta_outage_cap) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, false};
}

}  // namespace cogrelay::primary
