#pragma once

#include <string>

#include "cogrelay/kernels.hpp"

namespace cogrelay::channel {

// One Nakagami-m faded link described by the Gamma distribution of its
// channel power gain: integer severity m, mean power gain omega.
struct LinkSpec {
    int m = 1;
    double omega = 1.0;

    double alpha() const { return static_cast<double>(m) / omega; }
    void validate(const std::string& name) const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

// 2-D node placement with power-law path loss; mean gain between two nodes
// is d^(-delta).
struct Topology {
    Point st{0.0, 0.0};
    Point relays{50.0, 0.0};  // collocated relay cluster
    Point sd{100.0, 0.0};
    Point pt{50.0, 50.0};
    Point pd{100.0, 50.0};
    double path_loss_exponent = 4.0;

    void validate() const;
    double mean_gain(Point a, Point b) const;
};

// CDF of the channel power gain, F(u) = P(m, alpha*u).
double gain_cdf(const LinkSpec& link, double u);

// Density of the channel power gain.
double gain_pdf(const LinkSpec& link, double u);

// One Gamma(shape m, scale omega/m) draw; exact (sum of exponentials),
// strictly positive, consumes m stream words.
double sample_gain(const LinkSpec& link, kernels::CounterStream& stream);

// The full set of links the network uses. Forward links carry m_f, the four
// cross-network interference links carry m_int, and the primary PT-PD link
// severity is its own knob (defaults to m_f).
struct LinkSet {
    LinkSpec st_sr;  // ST -> relay
    LinkSpec sr_sd;  // relay -> SD
    LinkSpec pt_sr;  // PT -> relay (interference)
    LinkSpec pt_sd;  // PT -> SD (interference)
    LinkSpec st_pd;  // ST -> PD (interference at primary)
    LinkSpec sr_pd;  // relay -> PD (interference at primary)
    LinkSpec pt_pd;  // PT -> PD (primary's own link)

    void validate() const;
};

LinkSet build_links(const Topology& topo, int m_forward, int m_interference, int m_primary_link);

}  // namespace cogrelay::channel
