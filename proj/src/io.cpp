#include "dnls/io.hpp"

#include "dnls/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dnls::io {

using nlohmann::ordered_json;

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
}

void write_json(const std::filesystem::path& path, const ordered_json& doc)
{
    write_text(path, doc.dump(2) + "\n");
}

std::string profile_csv(const Profile& p, std::size_t margin)
{
    std::string s = "j,u\n";
    for (const auto& site : p.full_lattice(margin))
        s += fmt(site.j) + "," + fmt(site.u) + "\n";
    return s;
}

ordered_json profile_json(const Profile& p, double beta, const std::string& potential, const EnergyBreakdown& e,
                          double residual)
{
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["setting"] = std::string(to_string(p.setting()));
    j["N"] = p.n();
    j["beta"] = beta;
    j["potential"] = potential;
    j["energy"] = {{"total", e.total}, {"f_part", e.f_part}, {"d_part", e.d_part}};
    j["residual"] = residual;
    j["values"] = std::vector<double>(p.values().begin(), p.values().end());
    return j;
}

ProfileRecord parse_profile_json(const std::string& text)
{
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("schema_version").get<int>() != kSchemaVersion)
            throw Error(ErrorCode::MalformedInput, "unsupported schema_version");
        auto values = j.at("values").get<std::vector<double>>();
        if (j.at("N").get<std::size_t>() != values.size())
            throw Error(ErrorCode::MalformedInput, "N does not match the number of values");
        ProfileRecord r{.profile = Profile(parse_setting(j.at("setting").get<std::string>()), std::move(values))};
        r.beta = j.at("beta").get<double>();
        r.potential = j.at("potential").get<std::string>();
        r.energy = j.at("energy").at("total").get<double>();
        r.residual = j.at("residual").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("profile JSON: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MalformedInput)
            throw;
        throw Error(ErrorCode::MalformedInput, std::string("profile JSON: ") + e.what());
    }
}

ProfileRecord read_profile_json(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::MalformedInput, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_profile_json(ss.str());
}

std::string trace_csv(const MinimizeResult& r)
{
    std::string s = "step,energy,residual\n";
    for (std::size_t i = 0; i < r.trace_steps.size(); ++i)
        s += std::to_string(r.trace_steps[i]) + "," + fmt(r.energy_trace[i]) + "," + fmt(r.residual_trace[i]) + "\n";
    return s;
}

std::string psi_table_csv(const NormalizedPotential& np, std::size_t samples)
{
    if (samples < 2)
        throw Error(ErrorCode::InvalidArgument, "psi table needs at least 2 samples");
    std::string s = "eta,psi,Psi\n";
    for (std::size_t i = 0; i < samples; ++i) {
        const double eta = static_cast<double>(i) / static_cast<double>(samples - 1);
        s += fmt(eta) + "," + fmt(np.psi_nonlinearity(eta)) + "," + fmt(np.psi_hat(eta * eta)) + "\n";
    }
    return s;
}

std::string decay_csv(const Profile& p)
{
    std::string s = "j,w,kappa\n";
    for (std::size_t k = 0; k < p.n(); ++k) {
        const double w = 1.0 - p[k];
        s += fmt(p.position(k)) + "," + fmt(w) + ",";
        if (k > 0 && 1.0 - p[k - 1] > 0)
            s += fmt(w / (1.0 - p[k - 1]));
        s += "\n";
    }
    return s;
}

ordered_json decay_json(const DecayEstimate& d, double beta)
{
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["beta"] = beta;
    j["delta"] = d.delta;
    j["lambda_exact"] = d.lambda_exact;
    j["kappa_inf"] = d.kappa_inf;
    if (d.fit) {
        j["lambda_fit"] = d.fit->lambda_fit;
        j["r2"] = d.fit->r2;
        j["fit_window"] = {d.fit->window.first, d.fit->window.last};
        j["relative_error"] = std::abs(d.fit->lambda_fit - d.lambda_exact) / d.lambda_exact;
    }
    return j;
}

ordered_json plateau_json(const PlateauReport& r)
{
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["tolerance"] = r.tolerance;
    j["min_run"] = r.min_run;
    j["found"] = r.found();
    ordered_json list = ordered_json::array();
    for (const auto& c : r.candidates) {
        ordered_json e;
        e["eta_star"] = c.eta_star;
        e["F"] = c.f_value;
        e["run_length"] = c.run_length;
        e["run"] = {c.run.first, c.run.last};
        e["height_error"] = c.height_error;
        list.push_back(e);
    }
    j["candidates"] = list;
    if (r.best)
        j["best"] = *r.best;
    return j;
}

std::string overlay_csv(const std::vector<OverlayRow>& rows)
{
    std::string s = "xi,u_eps,u_limit,error\n";
    for (const auto& r : rows)
        s += fmt(r.xi) + "," + fmt(r.u_eps) + "," + fmt(r.u_limit) + "," + fmt(r.error) + "\n";
    return s;
}

ordered_json eps_sweep_json(const EpsSweep& s, double beta)
{
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["beta"] = beta;
    j["errors_strictly_decreasing"] = s.errors_strictly_decreasing;
    ordered_json runs = ordered_json::array();
    for (std::size_t i = 0; i < s.runs.size(); ++i) {
        const auto& r = s.runs[i];
        const auto& e = s.energies[i];
        ordered_json row;
        row["eps"] = r.eps;
        row["N"] = r.profile.n();
        row["lattice_beta"] = r.lattice_beta;
        row["sup_error"] = r.sup_error_on_window;
        row["window"] = r.window_half_width;
        row["residual"] = r.residual;
        row["steps"] = r.steps;
        row["converged"] = r.converged;
        row["f_part"] = e.f_part;
        row["d_eps_part"] = e.d_eps_part;
        row["energy"] = e.total;
        row["competitor_energy"] = e.competitor_total;
        row["below_competitor"] = e.below_competitor;
        runs.push_back(row);
    }
    j["runs"] = runs;
    return j;
}

std::string n_sweep_csv(const NSweepResult& r)
{
    std::string s = "n,energy,residual,steps,converged\n";
    for (const auto& e : r.entries)
        s += std::to_string(e.n) + "," + fmt(e.energy) + "," + fmt(e.residual) + "," + std::to_string(e.steps) + "," +
             (e.converged ? "1" : "0") + "\n";
    return s;
}

std::string time_series_csv(const std::vector<TimeSample>& series)
{
    std::string s = "t,max_amp_deviation,phase_error,h_window,n_window\n";
    for (const auto& t : series)
        s += fmt(t.t) + "," + fmt(t.max_amp_deviation) + "," + fmt(t.phase_error) + "," + fmt(t.h_window) + "," +
             fmt(t.n_window) + "\n";
    return s;
}

ordered_json conservation_json(const ConservationReport& r, double t_final, double dt)
{
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["t_final"] = t_final;
    j["dt"] = dt;
    j["h_window"] = r.h_window;
    j["n_window"] = r.n_window;
    j["h_drift"] = r.h_drift;
    j["n_drift"] = r.n_drift;
    j["max_amp_deviation"] = r.max_amp_deviation;
    j["phase_error"] = r.phase_error;
    return j;
}

} // namespace dnls::io
