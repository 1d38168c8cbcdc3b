// cogrelay: closed-form and Monte Carlo outage analysis of an
// energy-harvesting decode-and-forward cognitive relay network.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cogrelay/config.hpp"
#include "cogrelay/csv.hpp"
#include "cogrelay/kernels.hpp"
#include "cogrelay/validate.hpp"

namespace {

using cogrelay::config::SystemConfig;

struct Overrides {
    std::string config_path;
    std::optional<double> theta_min, theta_max, h_av;
    std::optional<int> theta_steps, relays, mf, mint;
    std::optional<std::string> mode;
    std::optional<std::uint64_t> slots, trials, seed;
    std::string out_path;
    std::string kernels = "auto";
};

void add_common_options(CLI::App* sub, Overrides& ov) {
    sub->add_option("--config", ov.config_path, "configuration file (sectioned key=value)");
    sub->add_option("--theta-min", ov.theta_min, "lowest primary outage cap in the sweep");
    sub->add_option("--theta-max", ov.theta_max, "highest primary outage cap in the sweep");
    sub->add_option("--theta-steps", ov.theta_steps, "number of sweep grid points");
    sub->add_option("--h-av", ov.h_av, "mean harvesting rate, J/s");
    sub->add_option("--relays", ov.relays, "number of relays M");
    sub->add_option("--mf", ov.mf, "fading severity on forward links");
    sub->add_option("--mint", ov.mint, "fading severity on interference links");
    sub->add_option("--mode", ov.mode, "relay power rule: max-power | min-rule");
    sub->add_option("--slots", ov.slots, "simulated slots per sweep point");
    sub->add_option("--trials", ov.trials, "Monte Carlo trials for validation checks");
    sub->add_option("--seed", ov.seed, "master seed; all randomness derives from it");
    sub->add_option("--out", ov.out_path, "output file (default: stdout)");
    sub->add_option("--kernels", ov.kernels, "batch kernel ISA: auto | scalar | avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

SystemConfig build_config(const Overrides& ov) {
    SystemConfig cfg;
    if (!ov.config_path.empty()) cfg = cogrelay::config::load_config(ov.config_path);
    if (ov.theta_min) cfg.theta_min = *ov.theta_min;
    if (ov.theta_max) cfg.theta_max = *ov.theta_max;
    if (ov.theta_steps) cfg.theta_steps = *ov.theta_steps;
    if (ov.h_av) cfg.h_av = *ov.h_av;
    if (ov.relays) cfg.relays = *ov.relays;
    if (ov.mf) cfg.m_f = *ov.mf;
    if (ov.mint) cfg.m_int = *ov.mint;
    if (ov.mode) cfg.mode = *ov.mode;
    if (ov.slots) cfg.slots = *ov.slots;
    if (ov.trials) cfg.trials = *ov.trials;
    if (ov.seed) cfg.seed = *ov.seed;
    cfg.validate();
    if (ov.kernels == "scalar") {
        cogrelay::kernels::force_isa(cogrelay::kernels::Isa::scalar);
    } else if (ov.kernels == "avx2") {
        cogrelay::kernels::force_isa(cogrelay::kernels::Isa::avx2);
    }
    return cfg;
}

// Writes to --out or stdout.
int emit(const Overrides& ov, const std::string& text) {
    if (ov.out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(ov.out_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file '" << ov.out_path << "'\n";
        return 1;
    }
    f << text;
    return 0;
}

int cmd_curve(const Overrides& ov) {
    const SystemConfig cfg = build_config(ov);
    const auto rows = cogrelay::sim::run_sweep(cfg.sweep_inputs());
    std::ostringstream out;
    cogrelay::csv::write_curve(out, rows, cfg.seed, cfg.hash_hex());
    const int rc = emit(ov, out.str());
    if (rc != 0) return rc;
    for (const auto& r : rows) {
        if (r.status == cogrelay::sim::RowStatus::infeasible) return 2;
    }
    return 0;
}

int cmd_solve_power(const Overrides& ov) {
    const SystemConfig cfg = build_config(ov);
    const auto st = cfg.primary_scenario_st();
    const auto sr = cfg.primary_scenario_sr();
    const auto energy = cfg.energy_params();
    std::ostringstream out;
    out << "# cogrelay solve-power\n";
    out << "# seed=" << cfg.seed << " config_hash=" << cfg.hash_hex() << "\n";
    out << "theta_p,p_st,p_sr,effective_p_sr,omega,eta,status\n";
    bool any_infeasible = false;
    using cogrelay::csv::format_number;
    const auto grid = cfg.theta_grid();
    std::vector<double> p_sr_points;
    std::vector<double> caps_solved;
    for (const double cap : grid) {
        out << format_number(cap) << ',';
        try {
            const auto rst = cogrelay::primary::solve_max_power(st, cap, cfg.p_upper_bracket);
            const auto rsr = cogrelay::primary::solve_max_power(sr, cap, cfg.p_upper_bracket);
            const cogrelay::primary::PowerBudget budget{
                rst.power, rsr.power,
                cogrelay::energy::effective_relay_power(energy, rsr.power)};
            p_sr_points.push_back(budget.p_sr);
            caps_solved.push_back(cap);
            out << format_number(budget.p_st) << ',' << format_number(budget.p_sr) << ','
                << format_number(budget.effective_p_sr) << ','
                << format_number(
                       cogrelay::energy::selection_probability(energy, budget.p_sr).value)
                << ','
                << format_number(
                       cogrelay::energy::relay_active_probability(energy, budget.p_sr))
                << ',' << (rst.bracket_saturated || rsr.bracket_saturated ? "saturated" : "ok")
                << '\n';
        } catch (const cogrelay::primary::InfeasibleError&) {
            any_infeasible = true;
            out << ",,,,,infeasible\n";
        }
    }
    // first grid point where the relays leave the energy-unconstrained region
    const auto tip = cogrelay::energy::find_tipping_index(energy, p_sr_points);
    if (tip) {
        out << "# tipping_point theta_p=" << format_number(caps_solved[*tip]) << "\n";
    } else {
        out << "# tipping_point none (energy unconstrained over the whole grid)\n";
    }
    const int rc = emit(ov, out.str());
    return rc != 0 ? rc : (any_infeasible ? 2 : 0);
}

int cmd_simulate(const Overrides& ov, double theta, int fixed_n, bool break_correlation) {
    const SystemConfig cfg = build_config(ov);
    const double cap = theta > 0.0 ? theta : cfg.theta_min;
    const auto rst = cogrelay::primary::solve_max_power(cfg.primary_scenario_st(), cap,
                                                        cfg.p_upper_bracket);
    const auto rsr = cogrelay::primary::solve_max_power(cfg.primary_scenario_sr(), cap,
                                                        cfg.p_upper_bracket);
    const auto energy = cfg.energy_params();
    const double p_tx = cfg.power_rule() == cogrelay::sim::PowerRule::min_rule
                            ? cogrelay::energy::effective_relay_power(energy, rsr.power)
                            : rsr.power;
    std::ostringstream out;
    out << "# cogrelay simulate\n";
    out << "# seed=" << cfg.seed << " config_hash=" << cfg.hash_hex() << "\n";
    out << "theta_p cap        " << cap << "\n";
    out << "P_ST               " << rst.power << (rst.bracket_saturated ? " (saturated)" : "")
        << "\n";
    out << "P_SR               " << rsr.power << (rsr.bracket_saturated ? " (saturated)" : "")
        << "\n";
    out << "relay tx power     " << p_tx << "  [" << cfg.mode << "]\n";

    if (fixed_n > 0) {
        const auto scn = cfg.secondary_scenario(rst.power, p_tx);
        const double closed = cogrelay::secondary::secondary_outage_given_n(scn, fixed_n);
        const auto mc = cogrelay::sim::run_fixed_n_sim(scn, fixed_n, cfg.trials, cfg.seed,
                                                       !break_correlation);
        out << "closed-form P_s,out|N=" << fixed_n << "  " << closed << "\n";
        out << "simulated   P_s,out|N=" << fixed_n << "  " << mc.probability << " +/- "
            << mc.half_width_95 << "  (" << mc.trials << " trials"
            << (break_correlation ? ", independent draws — deliberately broken" : "") << ")\n";
        emit(ov, out.str());
        return 0;
    }

    const double omega = cogrelay::energy::selection_probability(energy, p_tx).value;
    const double eta = cogrelay::energy::relay_active_probability(energy, p_tx);
    const auto scn = cfg.secondary_scenario(rst.power, p_tx);
    std::vector<double> by_n;
    for (int n = 1; n <= cfg.relays; ++n) {
        by_n.push_back(cogrelay::secondary::secondary_outage_given_n(scn, n));
    }
    const double agg = cogrelay::energy::aggregate_outage(cfg.relays, eta, by_n);

    cogrelay::sim::SecondarySimConfig sc;
    const auto ls = cfg.links();
    sc.st_sr = ls.st_sr;
    sc.sr_sd = ls.sr_sd;
    sc.pt_sr = ls.pt_sr;
    sc.pt_sd = ls.pt_sd;
    sc.p_st = rst.power;
    sc.p_tx = p_tx;
    sc.p_pt = cfg.p_pt_watts();
    sc.n0 = cfg.n0_watts();
    sc.gamma = cfg.gamma_s();
    sc.m_relays = cfg.relays;
    sc.h_av = cfg.h_av;
    sc.slot_duration = cfg.slot_duration;
    sc.slots = cfg.slots;
    sc.seed = cfg.seed;
    sc.profile = cfg.harvest();
    sc.warmup_fraction = cfg.warmup_fraction;
    sc.correlated_interference = !break_correlation;
    const auto res = cogrelay::sim::run_secondary_sim(sc);

    out << "omega              " << omega << "\n";
    out << "eta (analytical)   " << eta << "\n";
    out << "P_s,out analytical " << agg << "\n";
    out << "P_s,out simulated  " << res.outage.probability << " +/- " << res.outage.half_width_95
        << "  (" << res.counted_slots << " counted slots)\n";
    out << "mean active relays " << res.mean_active << "\n";
    out << "per-relay activity ";
    for (const double a : res.activity) out << a << ' ';
    out << "\nper-relay selected ";
    for (const double s : res.selection_freq) out << s << ' ';
    out << "\ntransmissions      " << res.transmissions << "\n";
    return emit(ov, out.str());
}

int cmd_validate(const Overrides& ov, bool break_correlation) {
    cogrelay::validate::Options vopts;
    vopts.cfg = build_config(ov);
    vopts.break_correlation = break_correlation;
    const auto results = cogrelay::validate::run_all(vopts);
    std::ostringstream out;
    out << "# cogrelay validate\n";
    out << "# seed=" << vopts.cfg.seed << " config_hash=" << vopts.cfg.hash_hex() << "\n";
    out << "cogrelay validate  (seed " << vopts.cfg.seed << ", trials " << vopts.cfg.trials
        << ", slots " << vopts.cfg.slots << ", kernels "
        << cogrelay::kernels::isa_name(cogrelay::kernels::active_isa()) << ")\n";
    for (const auto& r : results) {
        char line[512];
        std::snprintf(line, sizeof line, "%-12s %-32s %s\n",
                      cogrelay::validate::status_name(r.status), r.name.c_str(),
                      r.detail.c_str());
        out << line;
    }
    const bool ok = cogrelay::validate::all_passed(results);
    out << (ok ? "all checks passed\n" : "CHECK FAILURES PRESENT\n");
    const int rc = emit(ov, out.str());
    return rc != 0 ? rc : (ok ? 0 : 3);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"outage analysis of energy-harvesting cognitive relays under a primary outage "
                 "constraint"};
    app.require_subcommand(1);

    Overrides ov_curve, ov_solve, ov_sim, ov_val;
    double sim_theta = 0.0;
    int sim_fixed_n = 0;
    bool sim_break = false, val_break = false;

    auto* curve = app.add_subcommand(
        "curve", "sweep the primary outage cap and emit the outage-vs-cap table as CSV");
    add_common_options(curve, ov_curve);

    auto* solve = app.add_subcommand(
        "solve-power", "solve the maximum ST/relay powers allowed by each primary outage cap");
    add_common_options(solve, ov_solve);

    auto* simulate = app.add_subcommand("simulate", "run one full system simulation");
    add_common_options(simulate, ov_sim);
    simulate->add_option("--theta", sim_theta, "primary outage cap (default: sweep.theta_min)");
    simulate->add_option("--fixed-n", sim_fixed_n,
                         "simulate N always-active relays instead of the energy queues");
    simulate->add_flag("--break-correlation", sim_break,
                       "use independent PT-SD draws per relay (deliberately wrong; for "
                       "regression demonstrations)");

    auto* validate = app.add_subcommand(
        "validate", "cross-validate every closed form against its independent oracle");
    add_common_options(validate, ov_val);
    validate->add_flag("--break-correlation", val_break,
                       "run the Monte Carlo checks with independent PT-SD draws; the suite "
                       "must then fail");

    CLI11_PARSE(app, argc, argv);

    try {
        if (curve->parsed()) return cmd_curve(ov_curve);
        if (solve->parsed()) return cmd_solve_power(ov_solve);
        if (simulate->parsed()) return cmd_simulate(ov_sim, sim_theta, sim_fixed_n, sim_break);
        if (validate->parsed()) return cmd_validate(ov_val, val_break);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
