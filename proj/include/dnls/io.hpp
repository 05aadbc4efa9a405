#pragma once

#include "dnls/analysis.hpp"
#include "dnls/continuum.hpp"
#include "dnls/dynamics.hpp"
#include "dnls/lattice.hpp"
#include "dnls/minimizer.hpp"
#include "dnls/potential.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace dnls::io {

inline constexpr int kSchemaVersion = 1;

/// "%.16e": 17 significant digits, enough to round-trip any double.
std::string fmt(double x);

/// Writes text to path, creating parent directories. Throws InvalidArgument on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

/// j,u over |j| <= N + margin.
std::string profile_csv(const Profile& p, std::size_t margin = 2);

struct ProfileRecord {
    Profile profile;
    double beta = 0.0;
    std::string potential{};
    double energy = 0.0;
    double residual = 0.0;
};

nlohmann::ordered_json profile_json(const Profile& p, double beta, const std::string& potential,
                                    const EnergyBreakdown& e, double residual);

/// Reads a profile JSON written by profile_json. Throws MalformedInput.
ProfileRecord read_profile_json(const std::filesystem::path& path);
ProfileRecord parse_profile_json(const std::string& text);

/// step,energy,residual
std::string trace_csv(const MinimizeResult& r);

/// eta,psi,Psi with psi(eta) = Psi'(eta^2) eta on a uniform grid of [0, 1].
std::string psi_table_csv(const NormalizedPotential& np, std::size_t samples = 201);

/// j,w,kappa over the stored sites; kappa is empty on the first row and where w vanishes.
std::string decay_csv(const Profile& p);
nlohmann::ordered_json decay_json(const DecayEstimate& d, double beta);

nlohmann::ordered_json plateau_json(const PlateauReport& r);

/// xi,u_eps,u_limit,error
std::string overlay_csv(const std::vector<OverlayRow>& rows);
nlohmann::ordered_json eps_sweep_json(const EpsSweep& s, double beta);

/// n,energy,residual,steps,converged
std::string n_sweep_csv(const NSweepResult& r);

/// t,max_amp_deviation,phase_error,h_window,n_window
std::string time_series_csv(const std::vector<TimeSample>& series);
nlohmann::ordered_json conservation_json(const ConservationReport& r, double t_final, double dt);

} // namespace dnls::io
