#include "cogrelay/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "cogrelay/specmath.hpp"

namespace cogrelay::channel {

void LinkSpec::validate(const std::string& name) const {
    if (m < 1) {
        throw std::invalid_argument("link " + name + ": fading severity m must be a positive integer");
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("link " + name + ": mean gain omega must be positive");
    }
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Topology::validate() const {
    if (!(path_loss_exponent > 0.0)) {
        throw std::invalid_argument("topology: path loss exponent must be positive");
    }
    const Point pts[] = {st, relays, sd, pt, pd};
    const char* names[] = {"ST", "relays", "SD", "PT", "PD"};
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            if (distance(pts[i], pts[j]) <= 0.0) {
                throw std::invalid_argument(std::string("topology: ") + names[i] + " and " +
                                            names[j] + " are collocated (zero distance)");
            }
        }
    }
}

double Topology::mean_gain(Point a, Point b) const {
    return std::pow(distance(a, b), -path_loss_exponent);
}

double gain_cdf(const LinkSpec& link, double u) {
    return specmath::regularized_lower_gamma(link.m, link.alpha() * u);
}

double gain_pdf(const LinkSpec& link, double u) {
    if (u < 0.0) return 0.0;
    const double a = link.alpha();
    const double lp = link.m * std::log(a) + (link.m - 1) * (u > 0.0 ? std::log(u) : 0.0) -
                      a * u - specmath::log_factorial(link.m - 1);
    if (link.m > 1 && u == 0.0) return 0.0;
    return std::exp(lp);
}

double sample_gain(const LinkSpec& link, kernels::CounterStream& stream) {
    return stream.next_erlang(link.m, link.omega / static_cast<double>(link.m));
}

void LinkSet::validate() const {
    st_sr.validate("ST-SR");
    sr_sd.validate("SR-SD");
    pt_sr.validate("PT-SR");
    pt_sd.validate("PT-SD");
    st_pd.validate("ST-PD");
    sr_pd.validate("SR-PD");
    pt_pd.validate("PT-PD");
}

LinkSet build_links(const Topology& topo, int m_forward, int m_interference, int m_primary_link) {
    LinkSet ls;
    ls.st_sr = {m_forward, topo.mean_gain(topo.st, topo.relays)};
    ls.sr_sd = {m_forward, topo.mean_gain(topo.relays, topo.sd)};
    ls.pt_sr = {m_interference, topo.mean_gain(topo.pt, topo.relays)};
    ls.pt_sd = {m_interference, topo.mean_gain(topo.pt, topo.sd)};
    ls.st_pd = {m_interference, topo.mean_gain(topo.st, topo.pd)};
    ls.sr_pd = {m_interference, topo.mean_gain(topo.relays, topo.pd)};
    ls.pt_pd = {m_primary_link, topo.mean_gain(topo.pt, topo.pd)};
    ls.validate();
    return ls;
}

}  // namespace cogrelay::channel
