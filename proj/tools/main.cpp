#include "hillstab/duffing.hpp"
#include "hillstab/evolution.hpp"
#include "hillstab/hill_core.hpp"
#include "hillstab/io.hpp"
#include "hillstab/propagator.hpp"
#include "hillstab/resonance.hpp"
#include "hillstab/rng.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <thread>

namespace {

using namespace hillstab;
constexpr double kPi = std::numbers::pi;

unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HILLSTAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

std::string fmt(double x) { return io::format_full(x); }

void print_certificate(const SystemParams& p, const Certificate& cert) {
    const double main_thr = stability_threshold(p.b, p.c);
    const auto [strong, weak] = legacy_thresholds(p.b, p.c);
    auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
    std::cout << "parameters: b=" << fmt(p.b) << " c=" << fmt(p.c) << " C=" << fmt(p.C)
              << "\n";
    std::cout << "main criterion   C < c*max{c, 2*sqrt(b)} = " << fmt(main_thr) << " : "
              << verdict(cert.holds_main) << "\n";
    std::cout << "legacy strong    C < c*sqrt(b) = " << fmt(strong) << " : "
              << verdict(cert.holds_legacy_strong) << "\n";
    std::cout << "legacy weak      C <= c^2/4 + c*sqrt(b + c^2/16) = " << fmt(weak)
              << " : " << verdict(cert.holds_legacy_weak) << "\n";
    std::cout << "margin: " << fmt(cert.margin) << "\n";
    std::cout << "decay rate delta: " << fmt(cert.delta) << "\n";
    std::cout << "chosen form: " << to_string(cert.chosen_form) << "\n";
    if (cert.chosen_form != LyapunovForm::None)
        std::cout << "equivalence ratio M: "
                  << fmt(equivalence_ratio(p, cert.chosen_form)) << "\n";
}

CoefficientSignal random_signal(std::uint64_t seed, double ceiling, double t_end,
                                int pieces) {
    Rng rng(seed);
    std::vector<double> bp{0};
    for (int i = 0; i < pieces - 1; ++i) bp.push_back(rng.uniform(0, t_end));
    bp.push_back(t_end);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<double> vals;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        vals.push_back(rng.uniform(0, ceiling));
    return CoefficientSignal(bp, vals);
}

Eigen::VectorXd smooth_modes(Rng& rng, int n, double amp) {
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i)
        q(i) = amp * rng.uniform(-1, 1) * std::exp(-0.5 * (i + 1));
    return q;
}

struct CertifyArgs {
    double b = 1, c = 1, C = 0;
    bool assert_stable = false;
    std::string json_path;
};

struct HillArgs {
    double b = 1, c = 1, C = 0;
    double t_end = 20, u0 = 1, v0 = 0, h = 0, sample_dt = 0;
    std::uint64_t seed = 1;
    int pieces = 12;
    std::vector<double> breakpoints, values;
    bool periodic = false;
    std::string method = "exact";
    std::string csv_path, json_path;
    double fit_window = 0.5;
};

struct ResonanceArgs {
    double omega = 2, c = 0;
    int periods = 20;
    std::string csv_path;
};

struct DuffingArgs {
    double b = 1, c = 2, a_nl = 1, p = 2;
    double amp = 0, freq = 1, phase = 0;
    double t_end = 100, h = 0;
    double u0 = 0.5, v0 = 0, u1 = -0.5, v1 = 0.3;
    int stride = 10;
    std::string mode = "bound";
    std::string csv_path;
};

struct WaveArgs {
    int n_modes = 32;
    double k = 1, c = 2 * kPi;
    double t_end = 10, h = 0;
    double amp = 0, freq = 2, phase = 0;
    int forcing_mode = 1;
    double init_amp = 0.5;
    std::uint64_t seed = 1;
    int stride = 10;
    bool dealias = false, record_modes = false;
    std::string mode = "single";
    std::string csv_path;
};

struct SweepArgs {
    std::vector<double> h_values{0.1, 0.01, 0.001};
    std::string csv_path;
};

int run_certify(const CertifyArgs& a) {
    const SystemParams p(a.b, a.c, a.C);
    const Certificate cert = certify(p);
    print_certificate(p, cert);
    if (!a.json_path.empty()) {
        std::ofstream os(a.json_path);
        if (!os) throw std::runtime_error("cannot open " + a.json_path);
        os << io::certificate_to_json(p, cert).dump(2) << "\n";
    }
    if (a.assert_stable && !cert.holds_main) {
        std::cout << "assertion failed: main criterion does not hold\n";
        return 2;
    }
    return 0;
}

int run_simulate_hill(const HillArgs& a) {
    const SystemParams p(a.b, a.c, a.C);
    CoefficientSignal sig = [&] {
        if (!a.breakpoints.empty()) {
            if (a.periodic) return CoefficientSignal::periodic(a.breakpoints, a.values);
            return CoefficientSignal(a.breakpoints, a.values);
        }
        return random_signal(a.seed, a.C, a.t_end, a.pieces);
    }();
    const PhaseState s0{a.u0, a.v0, 0};
    Trajectory traj;
    if (a.method == "exact") {
        const double sample_dt = a.sample_dt > 0 ? a.sample_dt : a.t_end / 400;
        traj = propagate(p, sig, s0, a.t_end, sample_dt);
    } else if (a.method == "rk4") {
        const double h = a.h > 0 ? a.h : default_rk4_step(p, sig);
        const auto n_steps = static_cast<long long>(a.t_end / h);
        const int stride = std::max<long long>(1, n_steps / 2000);
        traj = hill_rk4(p, sig, s0, a.t_end, h, stride);
    } else {
        throw std::domain_error("method must be 'exact' or 'rk4'");
    }
    const Certificate cert = certify(p);
    print_certificate(p, cert);
    std::cout << "samples: " << traj.samples.size() << " (method " << a.method << ")\n";
    std::cout << "final state: u=" << fmt(traj.samples.back().u)
              << " v=" << fmt(traj.samples.back().v) << "\n";
    if (traj.samples.size() >= 10) {
        const ExponentialFit fit = fit_exponential(traj, a.fit_window);
        if (fit.underflow) {
            std::cout << "fitted decay: energy reached zero inside the window\n";
        } else {
            std::cout << "fitted decay rate: " << fmt(fit.delta_emp)
                      << " (certified delta " << fmt(cert.delta) << ")\n";
            std::cout << "fitted prefactor M: " << fmt(fit.m_emp) << "\n";
        }
    }
    if (!a.csv_path.empty()) io::write_trajectory_csv(traj, a.csv_path);
    if (!a.json_path.empty()) io::write_trajectory_json(traj, a.json_path);
    return 0;
}

int run_resonance(const ResonanceArgs& a) {
    const auto sys = resonance::build(a.omega);
    std::cout << "omega=" << fmt(a.omega) << " period=" << fmt(sys.period)
              << " C=" << fmt(sys.omega * sys.omega - 1) << " c0=" << fmt(sys.c0)
              << "\n";
    std::cout << "damping c=" << fmt(a.c) << (a.c < sys.c0 ? " (below c0: growth)"
                                                           : " (at or above c0: decay)")
              << "\n";
    const auto rep = resonance::verify_unbounded(a.omega, a.c, a.periods);
    std::cout << "closed-form per-period factor: " << fmt(rep.closed_form_factor)
              << "\n";
    for (std::size_t k = 0; k < rep.factors.size(); ++k) {
        if (k < 3 || k + 3 >= rep.factors.size())
            std::cout << "  period " << (k + 1) << ": factor " << fmt(rep.factors[k])
                      << "\n";
        else if (k == 3)
            std::cout << "  ...\n";
    }
    std::cout << "max deviation from closed form: " << fmt(rep.max_factor_deviation)
              << "\n";
    std::cout << "norm start " << fmt(rep.initial_norm) << " -> end "
              << fmt(rep.final_norm) << (rep.grew ? " (grew)" : " (decayed)") << "\n";
    const Certificate cert = certify(sys.params(a.c));
    std::cout << "certificate holds_main: " << (cert.holds_main ? "true" : "false")
              << "\n";
    if (!a.csv_path.empty()) io::write_trajectory_csv(rep.trajectory, a.csv_path);
    return 0;
}

int run_duffing(const DuffingArgs& a) {
    const duffing::DuffingParams dp(a.b, a.c, a.a_nl, a.p);
    const duffing::Forcing f = a.amp == 0
                                   ? duffing::Forcing::zero()
                                   : duffing::Forcing(duffing::CosineForcing{
                                         a.amp, a.freq, a.phase});
    std::cout << "duffing: b=" << fmt(a.b) << " c=" << fmt(a.c) << " a_nl="
              << fmt(a.a_nl) << " p=" << fmt(a.p) << " forcing bound=" << fmt(f.bound())
              << "\n";
    if (a.mode == "bound") {
        if (!a.csv_path.empty())
            throw std::domain_error("--csv exports the gap series; use --mode pair");
        const auto rep = duffing::verify_ultimate_bound(dp, f, {a.u0, a.v0, 0}, a.t_end,
                                                        a.h, a.stride);
        std::cout << "ultimate bound: " << fmt(rep.bound) << "\n";
        std::cout << "trailing max |u|: " << fmt(rep.trailing_max_abs_u) << "\n";
        std::cout << "within bound: " << (rep.within ? "yes" : "no") << "\n";
        if (rep.diverged) {
            std::cout << "integration diverged\n";
            return 1;
        }
        return 0;
    }
    if (a.mode != "pair") throw std::domain_error("mode must be 'bound' or 'pair'");
    const double thr = duffing::convergence_threshold(dp);
    std::cout << "convergence threshold on the forcing bound: " << fmt(thr)
              << (f.bound() < thr ? " (forcing below: convergence certified)"
                                  : " (forcing not below: no claim)")
              << "\n";
    const auto run = duffing::simulate_pair(dp, f, {a.u0, a.v0, 0}, {a.u1, a.v1, 0},
                                            a.t_end, a.h, a.stride);
    if (run.diverged) {
        std::cout << "integration diverged\n";
        return 1;
    }
    std::cout << "gap start " << fmt(run.gap.front()) << " -> end "
              << fmt(run.gap.back()) << "\n";
    if (!run.gap_fit.underflow)
        std::cout << "fitted gap decay rate: " << fmt(run.gap_fit.rate) << "\n";
    else
        std::cout << "gap vanished below floating-point resolution\n";
    if (!a.csv_path.empty()) io::write_gap_csv(run.gap_times, run.gap, a.csv_path);
    return 0;
}

int run_wave(const WaveArgs& a) {
    evolution::WaveConfig cfg;
    cfg.n_modes = a.n_modes;
    cfg.k = a.k;
    cfg.c = a.c;
    cfg.h = a.h;
    cfg.dealias = a.dealias;
    cfg.sample_stride = a.stride;
    cfg.record_modes = a.record_modes;

    evolution::WaveForcing f;
    f.profile = Eigen::VectorXd::Zero(a.n_modes);
    if (a.forcing_mode < 1 || a.forcing_mode > a.n_modes)
        throw std::domain_error("forcing-mode must lie in [1, n-modes]");
    f.profile(a.forcing_mode - 1) = 1;
    f.amplitude = a.amp;
    f.frequency = a.freq;
    f.phase = a.phase;

    Rng rng(a.seed);
    evolution::ModalState s0;
    s0.q = smooth_modes(rng, a.n_modes, a.init_amp);
    s0.qdot = smooth_modes(rng, a.n_modes, a.init_amp);

    std::cout << "wave: N=" << a.n_modes << " k=" << fmt(a.k) << " c=" << fmt(a.c)
              << " |f|^2 bound=" << fmt(f.bound_sq()) << "\n";
    if (a.k > 0) {
        const double thr = evolution::wave_sync_threshold(a.k, a.c);
        std::cout << "sync threshold on |f|^2: " << fmt(thr)
                  << (f.bound_sq() < thr ? " (below: synchronization certified)"
                                         : " (not below: no claim)")
                  << "\n";
    }
    if (a.mode == "single") {
        const auto run = evolution::simulate_wave(cfg, f, s0, a.t_end);
        if (run.diverged) {
            std::cout << "integration diverged at t=" << fmt(run.last_valid_time) << "\n";
            return 1;
        }
        std::cout << "energy start " << fmt(run.energy.front()) << " -> end "
                  << fmt(run.energy.back()) << "\n";
        double resid = 0;
        for (double r : run.balance_residual) resid = std::max(resid, r);
        std::cout << "max energy-balance residual: " << fmt(resid) << "\n";
        std::cout << "ultimate bound on ||u_x||^2: "
                  << fmt(evolution::wave_ultimate_bound(a.c, f.bound_sq())) << "\n";
        std::cout << "final ||u_x||^2: " << fmt(run.final_state.v_norm_sq()) << "\n";
        if (!a.csv_path.empty()) io::write_wave_csv(run, a.csv_path, a.record_modes);
        return 0;
    }
    if (a.mode != "sync") throw std::domain_error("mode must be 'single' or 'sync'");
    evolution::ModalState s1;
    s1.q = smooth_modes(rng, a.n_modes, a.init_amp);
    s1.qdot = smooth_modes(rng, a.n_modes, a.init_amp);
    const auto run = evolution::wave_sync_experiment(cfg, f, s0, s1, a.t_end);
    if (run.diverged) {
        std::cout << "integration diverged\n";
        return 1;
    }
    std::cout << "energy gap start " << fmt(run.gap_energy.front()) << " -> end "
              << fmt(run.gap_energy.back()) << "\n";
    if (!run.gap_fit.underflow)
        std::cout << "fitted gap decay rate: " << fmt(run.gap_fit.rate) << "\n";
    std::cout << "measured coefficient bound (3/pi) max ||u_x||^2: "
              << fmt(run.coeff_bound) << " vs scalar threshold "
              << fmt(run.coeff_threshold)
              << (run.coeff_within_threshold ? " (within)" : " (exceeded)") << "\n";
    if (!a.csv_path.empty()) io::write_sync_csv(run, a.csv_path);
    return 0;
}

int run_sweep(const SweepArgs& a) {
    const auto& hs = a.h_values;
    std::vector<resonance::SweepRow> rows(hs.size());
    const unsigned n_threads =
        std::min<unsigned>(thread_cap(), static_cast<unsigned>(hs.size()));
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < n_threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < hs.size();
                 i = next.fetch_add(1)) {
                const auto sys = resonance::build(1 + hs[i]);
                rows[i] = {hs[i], sys.omega, sys.c0, sys.omega * sys.omega - 1,
                           resonance::sharpness_ratio(hs[i])};
            }
        });
    }
    for (auto& t : workers) t.join();
    std::cout << "h,omega,c0,C,ratio\n";
    for (const auto& r : rows)
        std::cout << fmt(r.h) << ',' << fmt(r.omega) << ',' << fmt(r.c0) << ','
                  << fmt(r.C) << ',' << fmt(r.ratio) << "\n";
    std::cout << "ratio limit: pi = " << fmt(kPi) << "\n";
    if (!a.csv_path.empty()) io::write_sweep_csv(rows, a.csv_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability certification and simulation toolkit for damped "
                 "Hill-type oscillators, Duffing equations, and 1-D semilinear "
                 "waves"};
    app.set_config("--config", "", "Key-value config file; command-line flags override");
    app.allow_config_extras(false);  // unknown config keys are input errors
    app.require_subcommand(1);

    CertifyArgs cert_args;
    auto* certify_cmd = app.add_subcommand(
        "certify", "Evaluate the exponential-stability criteria for (b, c, C)");
    certify_cmd->add_option("--b", cert_args.b, "stiffness floor")->required();
    certify_cmd->add_option("--c", cert_args.c, "damping coefficient")->required();
    certify_cmd->add_option("--C", cert_args.C, "coefficient ceiling")->required();
    certify_cmd->add_flag("--assert-stable", cert_args.assert_stable,
                          "exit 2 when the main criterion fails");
    certify_cmd->add_option("--json", cert_args.json_path, "write certificate JSON");

    HillArgs hill_args;
    auto* hill_cmd = app.add_subcommand(
        "simulate-hill", "Propagate u'' + c u' + (b + a(t)) u = 0 and fit its decay");
    hill_cmd->add_option("--b", hill_args.b)->required();
    hill_cmd->add_option("--c", hill_args.c)->required();
    hill_cmd->add_option("--C", hill_args.C)->required();
    hill_cmd->add_option("--t-end", hill_args.t_end);
    hill_cmd->add_option("--u0", hill_args.u0);
    hill_cmd->add_option("--v0", hill_args.v0);
    hill_cmd->add_option("--seed", hill_args.seed, "seed for the random signal");
    hill_cmd->add_option("--pieces", hill_args.pieces, "pieces of the random signal");
    hill_cmd->add_option("--breakpoints", hill_args.breakpoints,
                         "explicit breakpoints (overrides the random signal)");
    hill_cmd->add_option("--values", hill_args.values, "values per interval");
    hill_cmd->add_flag("--periodic", hill_args.periodic, "extend the signal periodically");
    hill_cmd->add_option("--method", hill_args.method, "exact | rk4");
    hill_cmd->add_option("--step", hill_args.h, "RK4 step (0 = default)");
    hill_cmd->add_option("--sample-dt", hill_args.sample_dt,
                         "max sample gap for the exact method");
    hill_cmd->add_option("--fit-window", hill_args.fit_window);
    hill_cmd->add_option("--csv", hill_args.csv_path);
    hill_cmd->add_option("--json", hill_args.json_path);

    ResonanceArgs res_args;
    auto* res_cmd = app.add_subcommand(
        "resonance", "Run the two-value parametric-resonance counterexample");
    res_cmd->add_option("--omega", res_args.omega, "frequency parameter > 1")->required();
    res_cmd->add_option("--c", res_args.c, "damping");
    res_cmd->add_option("--periods", res_args.periods);
    res_cmd->add_option("--csv", res_args.csv_path, "trajectory CSV");

    DuffingArgs duf_args;
    auto* duf_cmd = app.add_subcommand(
        "duffing", "Ultimate-bound or two-solution convergence run");
    duf_cmd->add_option("--b", duf_args.b);
    duf_cmd->add_option("--c", duf_args.c);
    duf_cmd->add_option("--a-nl", duf_args.a_nl, "nonlinearity coefficient");
    duf_cmd->add_option("--p", duf_args.p, "nonlinearity exponent");
    duf_cmd->add_option("--forcing-amp", duf_args.amp);
    duf_cmd->add_option("--forcing-freq", duf_args.freq);
    duf_cmd->add_option("--forcing-phase", duf_args.phase);
    duf_cmd->add_option("--t-end", duf_args.t_end);
    duf_cmd->add_option("--step", duf_args.h, "RK4 step (0 = default)");
    duf_cmd->add_option("--mode", duf_args.mode, "bound | pair");
    duf_cmd->add_option("--u0", duf_args.u0);
    duf_cmd->add_option("--v0", duf_args.v0);
    duf_cmd->add_option("--u1", duf_args.u1);
    duf_cmd->add_option("--v1", duf_args.v1);
    duf_cmd->add_option("--stride", duf_args.stride, "sample stride");
    duf_cmd->add_option("--csv", duf_args.csv_path, "gap series CSV (pair mode)");

    WaveArgs wave_args;
    auto* wave_cmd = app.add_subcommand(
        "wave", "Sine-Galerkin simulation of u_tt - u_xx + k u^3 + c u_t = f");
    wave_cmd->add_option("--n-modes", wave_args.n_modes);
    wave_cmd->add_option("--k", wave_args.k);
    wave_cmd->add_option("--c", wave_args.c);
    wave_cmd->add_option("--t-end", wave_args.t_end);
    wave_cmd->add_option("--step", wave_args.h, "RK4 step (0 = default)");
    wave_cmd->add_option("--forcing-amp", wave_args.amp);
    wave_cmd->add_option("--forcing-freq", wave_args.freq);
    wave_cmd->add_option("--forcing-phase", wave_args.phase);
    wave_cmd->add_option("--forcing-mode", wave_args.forcing_mode);
    wave_cmd->add_option("--seed", wave_args.seed);
    wave_cmd->add_option("--init-amp", wave_args.init_amp);
    wave_cmd->add_option("--mode", wave_args.mode, "single | sync");
    wave_cmd->add_option("--stride", wave_args.stride);
    wave_cmd->add_flag("--dealias", wave_args.dealias);
    wave_cmd->add_flag("--record-modes", wave_args.record_modes);
    wave_cmd->add_option("--csv", wave_args.csv_path);

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Sharpness-ratio sweep over h (omega = 1 + h)");
    sweep_cmd->add_option("--h-values", sweep_args.h_values);
    sweep_cmd->add_option("--csv", sweep_args.csv_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (certify_cmd->parsed()) return run_certify(cert_args);
        if (hill_cmd->parsed()) return run_simulate_hill(hill_args);
        if (res_cmd->parsed()) return run_resonance(res_args);
        if (duf_cmd->parsed()) return run_duffing(duf_args);
        if (wave_cmd->parsed()) return run_wave(wave_args);
        if (sweep_cmd->parsed()) return run_sweep(sweep_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
