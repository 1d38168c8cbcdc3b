#include "cogrelay/secondary.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cogrelay/primary.hpp"
#include "cogrelay/quadrature.hpp"
#include "cogrelay/specmath.hpp"

namespace cogrelay::secondary {

using specmath::CompensatedSum;
using specmath::log_factorial;
using specmath::SignedAccumulator;

namespace {

constexpr int kMaxActiveRelays = 16;
constexpr double kCancellationTolerance = 1e-12;

// n * log(x) with the x^0 == 1 convention even when x == 0.
double pow_log(double x, double n) { return n == 0.0 ? 0.0 : n * std::log(x); }

void check_caps(const SecondaryScenario& scn, int n_active) {
    if (n_active < 1) {
        throw std::domain_error("secondary outage: need at least one active relay");
    }
    if (n_active > kMaxActiveRelays) {
        throw std::domain_error("secondary outage: closed form capped at N <= 16 active relays, "
                                "got N = " + std::to_string(n_active));
    }
    if (scn.sr_sd.m > 8) {
        throw std::domain_error("secondary outage: closed form capped at m(SR-SD) <= 8, got m = " +
                                std::to_string(scn.sr_sd.m));
    }
}

// Enumerates nonincreasing chains r[0] >= r[1] >= ... >= r[m-1] with
// r[0] <= n, in lexicographic order, without recursion.
class ChainOdometer {
public:
    ChainOdometer(int length, int top) : r_(static_cast<std::size_t>(length), 0), top_(top) {}

    const std::vector<int>& chain() const { return r_; }

    bool advance() {
        const int len = static_cast<int>(r_.size());
        for (int i = len - 1; i >= 0; --i) {
            const int cap = (i == 0) ? top_ : r_[static_cast<std::size_t>(i - 1)];
            if (r_[static_cast<std::size_t>(i)] < cap) {
                ++r_[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < len; ++j) r_[static_cast<std::size_t>(j)] = 0;
                return true;
            }
        }
        return false;
    }

private:
    std::vector<int> r_;
    int top_;
};

}  // namespace

void SecondaryScenario::validate() const {
    if (!(p_st > 0.0) || !(p_sr > 0.0) || !(p_pt > 0.0) || !(n0 > 0.0)) {
        throw std::invalid_argument("secondary scenario: powers and noise must be positive");
    }
    if (gamma < 0.0) {
        throw std::invalid_argument("secondary scenario: SINR threshold gamma must be >= 0");
    }
    st_sr.validate("ST-SR");
    sr_sd.validate("SR-SD");
    pt_sr.validate("PT-SR");
    pt_sd.validate("PT-SD");
}

double relay_decode_success(const SecondaryScenario& scn) {
    return primary::prob_sinr_exceeds(scn.st_sr, scn.p_st, scn.pt_sr, scn.p_pt, scn.gamma, scn.n0);
}

double conditional_outage_given_interference(const SecondaryScenario& scn, int n_active,
                                             double x) {
    if (n_active < 1) {
        throw std::domain_error("conditional outage: need at least one active relay");
    }
    if (x < 0.0) {
        throw std::domain_error("conditional outage: conditioning gain must be >= 0");
    }
    const double decode = relay_decode_success(scn);
    const double second_hop_ok = specmath::regularized_upper_gamma(
        scn.sr_sd.m, scn.sr_sd.alpha() * scn.gamma * (scn.p_pt * x + scn.n0) / scn.p_sr);
    const double per_relay_fail = 1.0 - decode * second_hop_ok;
    return std::pow(per_relay_fail, n_active);
}

ClosedFormResult secondary_outage_given_n_closed(const SecondaryScenario& scn, int n_active) {
    scn.validate();
    check_caps(scn, n_active);

    const int m_rd = scn.sr_sd.m;
    const int m_i = scn.pt_sd.m;
    const double a_rd = scn.sr_sd.alpha();
    const double a_i = scn.pt_sd.alpha();
    const double decode = relay_decode_success(scn);
    const double log_decode = decode > 0.0 ? std::log(decode) : -HUGE_VAL;
    const double c_lin = a_rd * scn.gamma * scn.n0 / scn.p_sr;
    const double cross = a_rd * scn.gamma * scn.p_pt / scn.p_sr;
    const double log_pt_n0 = std::log(scn.p_pt / scn.n0);
    const double i_prefix = m_i * std::log(a_i) - log_factorial(m_i - 1);

    SignedAccumulator acc;
    double terms = 0.0;
    ChainOdometer odo(m_rd, n_active);
    do {
        const auto& r = odo.chain();
        const int r_last = r[static_cast<std::size_t>(m_rd - 1)];
        const int n_minus = n_active - r_last;
        int big_r = 0;
        double log_chain = std::log(static_cast<double>(specmath::binomial(n_active, r[0])));
        for (int k = 1; k < m_rd; ++k) {
            const int diff = r[static_cast<std::size_t>(k - 1)] - r[static_cast<std::size_t>(k)];
            big_r += k * diff;
            log_chain += std::log(static_cast<double>(
                specmath::binomial(r[static_cast<std::size_t>(k - 1)],
                                   r[static_cast<std::size_t>(k)])));
            log_chain -= diff * log_factorial(k);
        }
        log_chain += (n_minus > 0 ? n_minus * log_decode : 0.0);
        log_chain += -c_lin * n_minus;
        log_chain += pow_log(c_lin, big_r);

        const double den = a_i + cross * n_minus;
        const double log_den = std::log(den);
        const bool negative = ((n_active + r_last) & 1) != 0;

        // Inner expectation over the shared PT->SD gain: one term per binomial
        // power p. Fused with the chain weight in log space; the separate
        // factors can overflow but their product cannot.
        const double log_r_fact = log_factorial(big_r);
        for (int p = 0; p <= big_r; ++p) {
            const double log_binom = log_r_fact - log_factorial(p) - log_factorial(big_r - p);
            const double lt = log_chain + log_binom + (p > 0 ? p * log_pt_n0 : 0.0) + i_prefix +
                              log_factorial(m_i + p - 1) - (m_i + p) * log_den;
            acc.add(std::exp(lt), negative);
            terms += 1.0;
        }
    } while (odo.advance());

    ClosedFormResult out;
    out.magnitude_sum = acc.magnitude_sum();
    out.term_count = terms;
    double v = acc.value();
    // non-finite term magnitudes (overflowed intermediates) go the same way
    // as cancellation: the integral route decides
    out.cancellation_flagged =
        !std::isfinite(v) || acc.cancellation_exceeds(kCancellationTolerance);
    if (!(v >= 0.0)) v = 0.0;
    if (v > 1.0) v = 1.0;
    out.value = v;
    return out;
}

double secondary_outage_given_n_quadrature(const SecondaryScenario& scn, int n_active) {
    scn.validate();
    if (n_active < 1) {
        throw std::domain_error("secondary outage: need at least one active relay");
    }
    const double decode = relay_decode_success(scn);
    const int m_i = scn.pt_sd.m;
    const double a_i = scn.pt_sd.alpha();
    const double a_rd = scn.sr_sd.alpha();
    const int m_rd = scn.sr_sd.m;
    const double log_norm = -log_factorial(m_i - 1);

    // Integrate in y = alpha_i * x so the Gamma weight is scale-free.
    auto integrand = [&](double y) {
        if (y <= 0.0) return 0.0;
        const double x = y / a_i;
        const double arg = a_rd * scn.gamma * (scn.p_pt * x + scn.n0) / scn.p_sr;
        const double per_relay_fail =
            1.0 - decode * specmath::regularized_upper_gamma(m_rd, arg);
        const double weight = std::exp(log_norm + (m_i - 1) * std::log(y) - y);
        return std::pow(per_relay_fail, n_active) * weight;
    };
    const auto res = quadrature::integrate_to_infinity(integrand, 0.0, 1e-13, 1e-12);
    double v = res.value;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

double secondary_outage_given_n(const SecondaryScenario& scn, int n_active) {
    const ClosedFormResult closed = secondary_outage_given_n_closed(scn, n_active);
    if (closed.cancellation_flagged) {
        // The closed form is only a fast route to the integral; when it has
        // cancelled away, the integral is the answer.
        return secondary_outage_given_n_quadrature(scn, n_active);
    }
    return closed.value;
}

}  // namespace cogrelay::secondary
