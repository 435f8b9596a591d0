#pragma once

#include "hillstab/duffing.hpp"
#include "hillstab/evolution.hpp"
#include "hillstab/resonance.hpp"
#include "hillstab/trajectory.hpp"
#include "hillstab/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace hillstab::io {

/// Shortest decimal string that parses back to the same double.
std::string format_full(Real x);

/// Columns t,u,v,F,G; requires trajectory metadata with params.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

nlohmann::json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j);
void write_trajectory_json(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_json(const std::string& path);

/// Columns t,gap,log_gap.
void write_gap_csv(const std::vector<Real>& t, const std::vector<Real>& gap,
                   std::ostream& os);
void write_gap_csv(const std::vector<Real>& t, const std::vector<Real>& gap,
                   const std::string& path);

/// Columns h,omega,c0,C,ratio.
void write_sweep_csv(const std::vector<resonance::SweepRow>& rows, std::ostream& os);
void write_sweep_csv(const std::vector<resonance::SweepRow>& rows,
                     const std::string& path);

/// Columns t,energy,gap[,m1..mN]; gap is zero for single runs.
void write_wave_csv(const evolution::WaveRun& run, std::ostream& os,
                    bool include_modes = false);
void write_wave_csv(const evolution::WaveRun& run, const std::string& path,
                    bool include_modes = false);

void write_sync_csv(const evolution::SyncRun& run, std::ostream& os);
void write_sync_csv(const evolution::SyncRun& run, const std::string& path);

nlohmann::json certificate_to_json(const SystemParams& p, const Certificate& cert);

}  // namespace hillstab::io
