#include "hillstab/io.hpp"

#include "hillstab/hill_core.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace hillstab::io {

std::string format_full(Real x) {
    char buf[40];
    // %.17g round-trips every double; shorten when fewer digits suffice.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    return os;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    if (!traj.meta.params)
        throw std::domain_error("write_trajectory_csv: trajectory has no params");
    const SystemParams& p = *traj.meta.params;
    os << "t,u,v,F,G\n";
    for (const auto& s : traj.samples) {
        os << format_full(s.t) << ',' << format_full(s.u) << ',' << format_full(s.v)
           << ',' << format_full(lyapunov_F(p, s)) << ','
           << format_full(lyapunov_G(p, s)) << '\n';
    }
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    auto os = open_out(path);
    write_trajectory_csv(traj, os);
}

nlohmann::json trajectory_to_json(const Trajectory& traj) {
    nlohmann::json j;
    nlohmann::json meta;
    if (traj.meta.params) {
        meta["params"] = {{"b", traj.meta.params->b},
                          {"c", traj.meta.params->c},
                          {"C", traj.meta.params->C}};
    }
    if (traj.meta.signal) {
        nlohmann::json sig;
        sig["breakpoints"] = traj.meta.signal->breakpoints();
        sig["values"] = traj.meta.signal->values();
        if (traj.meta.signal->period())
            sig["period"] = *traj.meta.signal->period();
        meta["signal"] = sig;
    }
    meta["method"] = to_string(traj.meta.method);
    meta["step"] = traj.meta.step;
    j["meta"] = meta;
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : traj.samples) samples.push_back({s.t, s.u, s.v});
    j["samples"] = samples;
    return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
    Trajectory traj;
    const auto& meta = j.at("meta");
    if (meta.contains("params")) {
        const auto& p = meta.at("params");
        traj.meta.params.emplace(p.at("b").get<Real>(), p.at("c").get<Real>(),
                                 p.at("C").get<Real>());
    }
    if (meta.contains("signal")) {
        const auto& s = meta.at("signal");
        std::optional<Real> period;
        if (s.contains("period")) period = s.at("period").get<Real>();
        traj.meta.signal.emplace(s.at("breakpoints").get<std::vector<Real>>(),
                                 s.at("values").get<std::vector<Real>>(), period);
    }
    traj.meta.method =
        meta.at("method").get<std::string>() == "exact" ? Method::Exact : Method::Rk4;
    traj.meta.step = meta.at("step").get<Real>();
    for (const auto& s : j.at("samples"))
        traj.samples.push_back({s.at(1).get<Real>(), s.at(2).get<Real>(), s.at(0).get<Real>()});
    return traj;
}

void write_trajectory_json(const Trajectory& traj, const std::string& path) {
    auto os = open_out(path);
    os << trajectory_to_json(traj).dump(2) << '\n';
}

Trajectory read_trajectory_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open input file: " + path);
    nlohmann::json j;
    is >> j;
    return trajectory_from_json(j);
}

void write_gap_csv(const std::vector<Real>& t, const std::vector<Real>& gap,
                   std::ostream& os) {
    if (t.size() != gap.size())
        throw std::domain_error("write_gap_csv: size mismatch");
    os << "t,gap,log_gap\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        os << format_full(t[i]) << ',' << format_full(gap[i]) << ','
           << format_full(std::log(gap[i])) << '\n';
    }
}

void write_gap_csv(const std::vector<Real>& t, const std::vector<Real>& gap,
                   const std::string& path) {
    auto os = open_out(path);
    write_gap_csv(t, gap, os);
}

void write_sweep_csv(const std::vector<resonance::SweepRow>& rows, std::ostream& os) {
    os << "h,omega,c0,C,ratio\n";
    for (const auto& r : rows) {
        os << format_full(r.h) << ',' << format_full(r.omega) << ','
           << format_full(r.c0) << ',' << format_full(r.C) << ','
           << format_full(r.ratio) << '\n';
    }
}

void write_sweep_csv(const std::vector<resonance::SweepRow>& rows,
                     const std::string& path) {
    auto os = open_out(path);
    write_sweep_csv(rows, os);
}

void write_wave_csv(const evolution::WaveRun& run, std::ostream& os,
                    bool include_modes) {
    const bool modes = include_modes && run.mode_amplitudes.size() > 0;
    os << "t,energy,gap";
    if (modes)
        for (Eigen::Index n = 0; n < run.mode_amplitudes.cols(); ++n)
            os << ",m" << (n + 1);
    os << '\n';
    for (std::size_t i = 0; i < run.times.size(); ++i) {
        os << format_full(run.times[i]) << ',' << format_full(run.energy[i]) << ",0";
        if (modes && static_cast<Eigen::Index>(i) < run.mode_amplitudes.rows())
            for (Eigen::Index n = 0; n < run.mode_amplitudes.cols(); ++n)
                os << ',' << format_full(run.mode_amplitudes(static_cast<Eigen::Index>(i), n));
        os << '\n';
    }
}

void write_wave_csv(const evolution::WaveRun& run, const std::string& path,
                    bool include_modes) {
    auto os = open_out(path);
    write_wave_csv(run, os, include_modes);
}

void write_sync_csv(const evolution::SyncRun& run, std::ostream& os) {
    write_gap_csv(run.times, run.gap_energy, os);
}

void write_sync_csv(const evolution::SyncRun& run, const std::string& path) {
    auto os = open_out(path);
    write_sync_csv(run, os);
}

nlohmann::json certificate_to_json(const SystemParams& p, const Certificate& cert) {
    nlohmann::json j;
    j["params"] = {{"b", p.b}, {"c", p.c}, {"C", p.C}};
    j["holds_main"] = cert.holds_main;
    j["holds_legacy_strong"] = cert.holds_legacy_strong;
    j["holds_legacy_weak"] = cert.holds_legacy_weak;
    j["margin"] = cert.margin;
    j["delta"] = cert.delta;
    j["chosen_form"] = to_string(cert.chosen_form);
    if (cert.chosen_form != LyapunovForm::None)
        j["equivalence_ratio"] = equivalence_ratio(p, cert.chosen_form);
    return j;
}

}  // namespace hillstab::io
