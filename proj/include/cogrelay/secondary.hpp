#pragma once

#include "cogrelay/channel.hpp"

namespace cogrelay::secondary {

// Secondary network parameters for one power allocation. All active relays
// share identical link statistics (collocated cluster).
struct SecondaryScenario {
    double p_st = 1.0;   // W, source transmit power
    double p_sr = 1.0;   // W, relay transmit power actually used
    double p_pt = 1.0;   // W, primary transmitter power (interference source)
    double n0 = 1e-9;    // W
    double gamma = 1.0;  // end-to-end SINR threshold, 2^(2*Rs) - 1

    channel::LinkSpec st_sr;
    channel::LinkSpec sr_sd;
    channel::LinkSpec pt_sr;
    channel::LinkSpec pt_sd;

    void validate() const;
};

// Probability that one relay decodes the source message, i.e. that its
// first-hop SINR exceeds gamma. Equals 1 at gamma = 0, decreasing in gamma.
double relay_decode_success(const SecondaryScenario& scn);

// CDF of the best-relay end-to-end SINR conditioned on the PT->SD power gain
// being x: the N identical per-relay failure factors multiply because the
// only coupling between relays' second hops is that shared gain.
double conditional_outage_given_interference(const SecondaryScenario& scn, int n_active, double x);

struct ClosedFormResult {
    double value = 0.0;
    // Relative cancellation check: the alternating multinomial sum is
    // rejected when |value| < 1e-12 * sum(|terms|).
    bool cancellation_flagged = false;
    double magnitude_sum = 0.0;
    double term_count = 0.0;
};

// Closed-form P(best-of-N end-to-end SINR <= gamma) via the multinomial
// expansion. Enumerates nonincreasing integer chains with an iterative
// odometer; alternating-sign terms go to separate compensated buckets.
// Requires n_active <= 16 and m(SR-SD) <= 8.
ClosedFormResult secondary_outage_given_n_closed(const SecondaryScenario& scn, int n_active);

// Independent route: adaptive quadrature of the conditional CDF against the
// PT->SD Gamma density. This is the correctness oracle for the closed form
// and the authoritative fallback when cancellation is flagged.
double secondary_outage_given_n_quadrature(const SecondaryScenario& scn, int n_active);

// Closed form with automatic quadrature fallback on a cancellation flag.
double secondary_outage_given_n(const SecondaryScenario& scn, int n_active);

}  // namespace cogrelay::secondary
