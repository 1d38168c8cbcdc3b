#include "cogrelay/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "cogrelay/kernels.hpp"

namespace cogrelay::sim {

using kernels::CounterStream;

namespace {

constexpr std::size_t kBlock = 8192;

// Stream tags. One stream per (purpose, relay); the shared PT->SD draw is
// purpose 4 with relay index 0.
constexpr std::uint64_t tag(std::uint64_t purpose, std::uint64_t relay = 0) {
    return (purpose << 16) | relay;
}
constexpr std::uint64_t kTagStSr = 1;
constexpr std::uint64_t kTagPtSr = 2;
constexpr std::uint64_t kTagSrSd = 3;
constexpr std::uint64_t kTagPtSd = 4;
constexpr std::uint64_t kTagHarvest = 5;
constexpr std::uint64_t kTagPrimaryPp = 10;
constexpr std::uint64_t kTagPrimaryIp = 11;

struct ErlangSource {
    std::uint64_t base;
    int shape;
    double scale;

    ErlangSource(std::uint64_t seed, std::uint64_t stream_tag, const channel::LinkSpec& link)
        : base(CounterStream::derive(seed, stream_tag).base),
          shape(link.m),
          scale(link.omega / static_cast<double>(link.m)) {}

    // Draws for trials [first, first+n) into out.
    void fill(std::uint64_t first, std::size_t n, double* out) const {
        kernels::fill_erlang(base, first * static_cast<std::uint64_t>(shape), shape, scale, n,
                             out);
    }
};

}  // namespace

OutageEstimate OutageEstimate::from_counts(std::uint64_t outages, std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("outage estimate needs at least one trial");
    OutageEstimate e;
    e.trials = trials;
    e.probability = static_cast<double>(outages) / static_cast<double>(trials);
    e.half_width_95 =
        1.96 * std::sqrt(e.probability * (1.0 - e.probability) / static_cast<double>(trials));
    return e;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return kernels::mix64(seed ^ kernels::mix64(salt + kernels::kGamma));
}

void SecondarySimConfig::validate() const {
    st_sr.validate("ST-SR");
    sr_sd.validate("SR-SD");
    pt_sr.validate("PT-SR");
    pt_sd.validate("PT-SD");
    if (!(p_st > 0.0) || !(p_tx > 0.0) || !(p_pt > 0.0) || !(n0 > 0.0)) {
        throw std::invalid_argument("simulator: powers and noise must be positive");
    }
    if (gamma < 0.0) throw std::invalid_argument("simulator: gamma must be >= 0");
    if (m_relays < 1) throw std::invalid_argument("simulator: need at least one relay");
    if (h_av < 0.0) throw std::invalid_argument("simulator: harvesting rate must be >= 0");
    if (!(slot_duration > 0.0)) throw std::invalid_argument("simulator: slot duration must be positive");
    if (slots == 0) throw std::invalid_argument("simulator: need at least one slot");
    if (warmup_fraction < 0.0 || warmup_fraction >= 1.0) {
        throw std::invalid_argument("simulator: warmup fraction must lie in [0, 1)");
    }
    if (battery_capacity && !(*battery_capacity > 0.0)) {
        throw std::invalid_argument("simulator: battery capacity must be positive when set");
    }
}

SecondarySimResult run_secondary_sim(const SecondarySimConfig& cfg) {
    cfg.validate();
    const auto m = static_cast<std::size_t>(cfg.m_relays);
    const double cost = cfg.p_tx * cfg.slot_duration;
    const double harvest_mean = 2.0 * cfg.slot_duration * cfg.h_av;  // per slot of 2T
    const std::uint64_t warm = static_cast<std::uint64_t>(
        static_cast<double>(cfg.slots) * cfg.warmup_fraction);

    std::vector<ErlangSource> src_sr, src_int, src_rd;
    std::vector<std::uint64_t> harvest_base;
    std::vector<ErlangSource> src_x;
    for (std::size_t i = 0; i < m; ++i) {
        src_sr.emplace_back(cfg.seed, tag(kTagStSr, i), cfg.st_sr);
        src_int.emplace_back(cfg.seed, tag(kTagPtSr, i), cfg.pt_sr);
        src_rd.emplace_back(cfg.seed, tag(kTagSrSd, i), cfg.sr_sd);
        harvest_base.push_back(CounterStream::derive(cfg.seed, tag(kTagHarvest, i)).base);
        // In the broken (uncorrelated) variant each relay gets its own stream.
        src_x.emplace_back(cfg.seed, tag(kTagPtSd, cfg.correlated_interference ? 0 : i),
                           cfg.pt_sd);
    }

    std::vector<std::vector<double>> metric(m, std::vector<double>(kBlock));
    std::vector<std::vector<double>> harvest(m, std::vector<double>(kBlock));
    std::vector<double> x(kBlock), den(kBlock), g1(kBlock), gi(kBlock), g2(kBlock), grd(kBlock);

    std::vector<RelayState> relays(m);
    std::vector<std::uint64_t> active_count(m, 0), selected_count(m, 0);
    std::uint64_t outages = 0, transmissions = 0, active_sum = 0, counted = 0;
    std::vector<SlotOutcome> trace;
    trace.reserve(std::min<std::uint64_t>(cfg.trace_slots, cfg.slots));

    for (std::uint64_t done = 0; done < cfg.slots; done += kBlock) {
        const auto n = static_cast<std::size_t>(
            std::min<std::uint64_t>(kBlock, cfg.slots - done));
        for (std::size_t i = 0; i < m; ++i) {
            src_sr[i].fill(done, n, g1.data());
            src_int[i].fill(done, n, gi.data());
            kernels::sinr(cfg.p_st, g1.data(), cfg.p_pt, gi.data(), cfg.n0, n, metric[i].data());
            if (i == 0 || !cfg.correlated_interference) {
                src_x[i].fill(done, n, x.data());
                kernels::axpb(cfg.p_pt, x.data(), cfg.n0, n, den.data());
            }
            src_rd[i].fill(done, n, g2.data());
            kernels::scaled_ratio(cfg.p_tx, g2.data(), den.data(), n, grd.data());
            kernels::min_inplace(metric[i].data(), grd.data(), n);
            if (cfg.profile == HarvestProfile::exponential) {
                kernels::fill_erlang(harvest_base[i], done, 1, harvest_mean, n,
                                     harvest[i].data());
            }
        }

        for (std::size_t t = 0; t < n; ++t) {
            const std::uint64_t slot = done + t;
            const bool count = slot >= warm;
            SlotOutcome outcome;
            for (std::size_t i = 0; i < m; ++i) {
                RelayState& r = relays[i];
                r.battery += cfg.profile == HarvestProfile::exponential ? harvest[i][t]
                                                                        : harvest_mean;
                if (cfg.battery_capacity && r.battery > *cfg.battery_capacity) {
                    r.battery = *cfg.battery_capacity;
                }
                r.active = r.battery >= cost;
                if (r.active) {
                    ++outcome.n_active;
                    if (count) ++active_count[i];
                    if (outcome.selected_relay < 0 ||
                        metric[i][t] > outcome.end_to_end_sinr) {
                        outcome.selected_relay = static_cast<int>(i);
                        outcome.end_to_end_sinr = metric[i][t];
                    }
                }
            }
            if (outcome.selected_relay < 0) {
                outcome.secondary_outage = true;  // empty active set
            } else {
                RelayState& sel = relays[static_cast<std::size_t>(outcome.selected_relay)];
                sel.battery -= cost;
                if (sel.battery < 0.0) {
                    throw std::logic_error("energy neutrality violated: negative battery");
                }
                ++transmissions;
                outcome.secondary_outage = outcome.end_to_end_sinr <= cfg.gamma;
            }
            if (count) {
                ++counted;
                if (outcome.secondary_outage) ++outages;
                if (outcome.selected_relay >= 0) {
                    active_sum += static_cast<std::uint64_t>(outcome.n_active);
                    ++selected_count[static_cast<std::size_t>(outcome.selected_relay)];
                }
            }
            if (slot < cfg.trace_slots) trace.push_back(outcome);
        }
    }

    SecondarySimResult res;
    res.trace = std::move(trace);
    res.outage = OutageEstimate::from_counts(outages, counted);
    res.counted_slots = counted;
    res.transmissions = transmissions;
    res.mean_active = static_cast<double>(active_sum) / static_cast<double>(counted);
    for (std::size_t i = 0; i < m; ++i) {
        res.activity.push_back(static_cast<double>(active_count[i]) /
                               static_cast<double>(counted));
        res.selection_freq.push_back(static_cast<double>(selected_count[i]) /
                                     static_cast<double>(counted));
    }
    return res;
}

OutageEstimate run_primary_sim(const primary::PrimaryScenario& scn, double p_interferer,
                               std::uint64_t trials, std::uint64_t seed) {
    scn.validate();
    if (p_interferer < 0.0) {
        throw std::invalid_argument("primary sim: interferer power must be >= 0");
    }
    if (trials == 0) throw std::invalid_argument("primary sim: need at least one trial");

    const ErlangSource src_pp(seed, tag(kTagPrimaryPp), scn.link_pp);
    const ErlangSource src_ip(seed, tag(kTagPrimaryIp), scn.link_ip);
    std::vector<double> gpp(kBlock), gip(kBlock), s(kBlock);
    std::uint64_t outages = 0;
    for (std::uint64_t done = 0; done < trials; done += kBlock) {
        const auto n = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, trials - done));
        src_pp.fill(done, n, gpp.data());
        src_ip.fill(done, n, gip.data());
        kernels::sinr(scn.p_pt, gpp.data(), p_interferer, gip.data(), scn.n0, n, s.data());
        outages += kernels::count_le(s.data(), scn.theta_p, n);
    }
    return OutageEstimate::from_counts(outages, trials);
}

OutageEstimate run_fixed_n_sim(const secondary::SecondaryScenario& scn, int n_active,
                               std::uint64_t trials, std::uint64_t seed, bool correlated) {
    scn.validate();
    if (n_active < 1) throw std::invalid_argument("fixed-N sim: need at least one relay");
    if (trials == 0) throw std::invalid_argument("fixed-N sim: need at least one trial");

    const auto m = static_cast<std::size_t>(n_active);
    std::vector<ErlangSource> src_sr, src_int, src_rd, src_x;
    for (std::size_t i = 0; i < m; ++i) {
        src_sr.emplace_back(seed, tag(kTagStSr, i), scn.st_sr);
        src_int.emplace_back(seed, tag(kTagPtSr, i), scn.pt_sr);
        src_rd.emplace_back(seed, tag(kTagSrSd, i), scn.sr_sd);
        src_x.emplace_back(seed, tag(kTagPtSd, correlated ? 0 : i), scn.pt_sd);
    }

    std::vector<double> x(kBlock), den(kBlock), g1(kBlock), gi(kBlock), g2(kBlock), grd(kBlock),
        metric(kBlock), best(kBlock);
    std::uint64_t outages = 0;
    for (std::uint64_t done = 0; done < trials; done += kBlock) {
        const auto n = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, trials - done));
        for (std::size_t i = 0; i < m; ++i) {
            src_sr[i].fill(done, n, g1.data());
            src_int[i].fill(done, n, gi.data());
            kernels::sinr(scn.p_st, g1.data(), scn.p_pt, gi.data(), scn.n0, n, metric.data());
            if (i == 0 || !correlated) {
                src_x[i].fill(done, n, x.data());
                kernels::axpb(scn.p_pt, x.data(), scn.n0, n, den.data());
            }
            src_rd[i].fill(done, n, g2.data());
            kernels::scaled_ratio(scn.p_sr, g2.data(), den.data(), n, grd.data());
            kernels::min_inplace(metric.data(), grd.data(), n);
            if (i == 0) {
                std::copy(metric.begin(), metric.begin() + static_cast<std::ptrdiff_t>(n),
                          best.begin());
            } else {
                for (std::size_t t = 0; t < n; ++t) best[t] = std::max(best[t], metric[t]);
            }
        }
        outages += kernels::count_le(best.data(), scn.gamma, n);
    }
    return OutageEstimate::from_counts(outages, trials);
}

const char* row_status_name(RowStatus s) {
    switch (s) {
        case RowStatus::ok: return "ok";
        case RowStatus::saturated: return "saturated";
        case RowStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

namespace {

SweepRow sweep_point(const SweepInputs& in, std::size_t index) {
    SweepRow row;
    row.theta_cap = in.theta_grid[index];

    primary::PrimaryScenario st_scn{in.p_pt, in.n0, in.theta_p, in.links.pt_pd, in.links.st_pd};
    primary::PrimaryScenario sr_scn{in.p_pt, in.n0, in.theta_p, in.links.pt_pd, in.links.sr_pd};
    primary::MaxPowerResult st_res, sr_res;
    try {
        st_res = primary::solve_max_power(st_scn, row.theta_cap, in.p_upper_bracket);
        sr_res = primary::solve_max_power(sr_scn, row.theta_cap, in.p_upper_bracket);
    } catch (const primary::InfeasibleError&) {
        row.status = RowStatus::infeasible;
        return row;
    }
    if (st_res.bracket_saturated || sr_res.bracket_saturated) row.status = RowStatus::saturated;
    const primary::PowerBudget budget{
        st_res.power, sr_res.power, energy::effective_relay_power(in.energy, sr_res.power)};
    row.p_st = budget.p_st;
    row.p_sr = budget.p_sr;
    row.p_effective = in.rule == PowerRule::min_rule ? budget.effective_p_sr : budget.p_sr;

    row.omega = energy::selection_probability(in.energy, row.p_effective).value;
    row.eta = energy::relay_active_probability(in.energy, row.p_effective);

    secondary::SecondaryScenario scn;
    scn.p_st = row.p_st;
    scn.p_sr = row.p_effective;
    scn.p_pt = in.p_pt;
    scn.n0 = in.n0;
    scn.gamma = in.gamma;
    scn.st_sr = in.links.st_sr;
    scn.sr_sd = in.links.sr_sd;
    scn.pt_sr = in.links.pt_sr;
    scn.pt_sd = in.links.pt_sd;

    std::vector<double> by_n;
    for (int n = 1; n <= in.energy.m_relays; ++n) {
        by_n.push_back(secondary::secondary_outage_given_n(scn, n));
    }
    row.psout_analytic = energy::aggregate_outage(in.energy.m_relays, row.eta, by_n);

    SecondarySimConfig sim_cfg;
    sim_cfg.st_sr = in.links.st_sr;
    sim_cfg.sr_sd = in.links.sr_sd;
    sim_cfg.pt_sr = in.links.pt_sr;
    sim_cfg.pt_sd = in.links.pt_sd;
    sim_cfg.p_st = row.p_st;
    sim_cfg.p_tx = row.p_effective;
    sim_cfg.p_pt = in.p_pt;
    sim_cfg.n0 = in.n0;
    sim_cfg.gamma = in.gamma;
    sim_cfg.m_relays = in.energy.m_relays;
    sim_cfg.h_av = in.energy.h_av;
    sim_cfg.slot_duration = in.energy.slot_duration;
    sim_cfg.slots = in.slots;
    sim_cfg.seed = derive_seed(in.seed, 0x50E9 + index);
    sim_cfg.profile = in.profile;
    sim_cfg.warmup_fraction = in.warmup_fraction;
    const SecondarySimResult sim = run_secondary_sim(sim_cfg);
    row.psout_sim = sim.outage.probability;
    row.ci_halfwidth = sim.outage.half_width_95;
    row.n_active_mean = sim.mean_active;
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepInputs& in) {
    if (in.theta_grid.empty()) throw std::invalid_argument("sweep: empty theta grid");
    in.links.validate();
    in.energy.validate();

    const std::size_t n_points = in.theta_grid.size();
    std::vector<SweepRow> rows(n_points);
    std::vector<std::exception_ptr> errors(n_points);

    unsigned want = in.threads == 0 ? std::thread::hardware_concurrency() : in.threads;
    if (want == 0) want = 1;
    const unsigned n_threads = static_cast<unsigned>(
        std::min<std::size_t>(want, n_points));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_points) return;
            try {
                rows[i] = sweep_point(in, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

}  // namespace cogrelay::sim
