#include "cli.hpp"

#include "dnls/analysis.hpp"
#include "dnls/continuum.hpp"
#include "dnls/dynamics.hpp"
#include "dnls/error.hpp"
#include "dnls/io.hpp"
#include "dnls/lattice.hpp"
#include "dnls/minimizer.hpp"
#include "dnls/potential.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace dnls::cli {

namespace {

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* why)
{
    throw Error(ErrorCode::InvalidArgument, key + " = '" + value + "': " + why);
}

double parse_positive(const std::string& key, const std::string& value)
{
    double x = 0;
    const auto t = trim(value);
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size())
        bad(key, value, "not a number");
    if (!(x > 0) || !std::isfinite(x))
        bad(key, value, "must be positive");
    return x;
}

std::size_t parse_count(const std::string& key, const std::string& value)
{
    std::size_t x = 0;
    const auto t = trim(value);
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size())
        bad(key, value, "not a non-negative integer");
    if (x == 0)
        bad(key, value, "must be positive");
    return x;
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ','))
        if (!trim(item).empty())
            parts.push_back(trim(item));
    return parts;
}

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

std::vector<Setting> settings_of(const RunConfig& cfg)
{
    if (cfg.setting == "both")
        return {Setting::OnSite, Setting::InterSite};
    return {parse_setting(cfg.setting)};
}

std::vector<double> betas_of(const RunConfig& cfg)
{
    return cfg.beta_list.empty() ? std::vector<double>{cfg.beta} : cfg.beta_list;
}

FlowConfig flow_of(const RunConfig& cfg)
{
    FlowConfig f;
    f.tau = cfg.tau;
    f.max_steps = cfg.max_steps;
    f.residual_tol = cfg.residual_tol;
    return f;
}

std::string run_tag(Setting s, std::size_t n, double beta)
{
    return std::string(to_string(s)) + "_N" + std::to_string(n) + "_beta" + num(beta);
}

int cmd_solve(const RunConfig& cfg, std::ostream& out)
{
    const auto np = normalize(resolve_potential(cfg.potential));
    const auto dir = cfg.output_dir;
    io::write_text(dir / "psi_table.csv", io::psi_table_csv(np));
    const bool plateaus = !negative_critical_points(np).empty();

    bool all_converged = true;
    for (Setting s : settings_of(cfg)) {
        for (double beta : betas_of(cfg)) {
            const auto r = minimize(s, cfg.n, np, beta, flow_of(cfg));
            const auto tag = run_tag(s, cfg.n, beta);
            io::write_text(dir / (tag + "_profile.csv"), io::profile_csv(r.profile));
            io::write_json(dir / (tag + "_profile.json"), io::profile_json(r.profile, beta, cfg.potential, r.energy, r.residual));
            io::write_text(dir / (tag + "_trace.csv"), io::trace_csv(r));
            out << tag << ": steps " << r.steps_taken << ", residual " << sci(r.residual) << ", energy "
                << sci(r.energy.total) << (r.converged ? ", converged" : ", NOT converged") << "\n";
            if (r.tau_above_bound)
                out << tag << ": tau " << num(cfg.tau) << " exceeds the monotone-decrease bound " << sci(r.tau_bound)
                    << "\n";
            try {
                const auto d = analyze_decay(r.profile, np, beta);
                io::write_json(dir / (tag + "_decay.json"), io::decay_json(d, beta));
                io::write_text(dir / (tag + "_decay.csv"), io::decay_csv(r.profile));
                out << tag << ": lambda_fit " << sci(d.fit->lambda_fit) << " vs exact " << sci(d.lambda_exact) << "\n";
            } catch (const Error& e) {
                out << tag << ": no tail report (" << e.what() << ")\n";
            }
            if (plateaus) {
                const auto rep = plateau_diagnostics(r.profile, np);
                io::write_json(dir / (tag + "_plateaus.json"), io::plateau_json(rep));
                if (rep.found()) {
                    const auto& c = rep.candidates[*rep.best];
                    out << tag << ": plateau at +-" << sci(c.eta_star) << ", run " << c.run_length << ", height error "
                        << sci(c.height_error) << "\n";
                } else {
                    out << tag << ": no plateau\n";
                }
            }
            all_converged = all_converged && r.converged;
        }
    }
    return all_converged ? kOk : kNotConverged;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.n_list.empty() && cfg.beta_list.empty())
        throw Error(ErrorCode::InvalidArgument, "sweep needs n_list or beta_list");
    const auto np = normalize(resolve_potential(cfg.potential));
    bool all_converged = true;
    for (Setting s : settings_of(cfg)) {
        const std::string prefix = std::string(to_string(s));
        if (!cfg.n_list.empty()) {
            for (double beta : betas_of(cfg)) {
                const auto r = n_sweep(s, cfg.n_list, np, beta, flow_of(cfg));
                const auto name = prefix + "_beta" + num(beta) + "_n_sweep.csv";
                io::write_text(cfg.output_dir / name, io::n_sweep_csv(r));
                for (const auto& e : r.entries) {
                    out << prefix << " beta " << num(beta) << " N " << e.n << ": energy " << sci(e.energy) << "\n";
                    all_converged = all_converged && e.converged;
                }
                out << prefix << " beta " << num(beta) << ": energies " << (r.monotone ? "non-increasing" : "NOT monotone")
                    << " in N\n";
            }
        } else {
            std::string csv = "beta,energy,residual,steps,converged\n";
            for (double beta : cfg.beta_list) {
                const auto r = minimize(s, cfg.n, np, beta, flow_of(cfg));
                csv += io::fmt(beta) + "," + io::fmt(r.energy.total) + "," + io::fmt(r.residual) + "," +
                       std::to_string(r.steps_taken) + "," + (r.converged ? "1" : "0") + "\n";
                out << prefix << " N " << cfg.n << " beta " << num(beta) << ": energy " << sci(r.energy.total) << "\n";
                all_converged = all_converged && r.converged;
            }
            io::write_text(cfg.output_dir / (prefix + "_N" + std::to_string(cfg.n) + "_beta_sweep.csv"), csv);
        }
    }
    return all_converged ? kOk : kNotConverged;
}

int cmd_continuum(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.eps_list.empty())
        throw Error(ErrorCode::InvalidArgument, "continuum needs eps_list");
    if (cfg.setting == "both")
        throw Error(ErrorCode::InvalidArgument, "continuum runs one setting at a time");
    const auto np = normalize(resolve_potential(cfg.potential));
    const Setting s = parse_setting(cfg.setting);
    const auto limit = limit_profile(np, cfg.beta, default_u_grid());

    std::string table = "xi,u\n";
    for (std::size_t i = 0; i < limit.xi_grid().size(); ++i)
        table += io::fmt(limit.xi_grid()[i]) + "," + io::fmt(limit.u_values()[i]) + "\n";
    io::write_text(cfg.output_dir / "limit_profile.csv", table);

    EpsOptions opts;
    opts.window = cfg.window;
    const auto sweep = eps_sweep(np, cfg.beta, s, cfg.eps_list, flow_of(cfg), limit, opts);
    bool all_converged = true;
    for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
        const auto& r = sweep.runs[i];
        io::write_text(cfg.output_dir / ("overlay_eps" + num(r.eps) + ".csv"), io::overlay_csv(overlay(r, limit)));
        out << "eps " << num(r.eps) << " (N " << r.profile.n() << "): sup error " << sci(r.sup_error_on_window)
            << ", energy " << sci(sweep.energies[i].total) << ", ramp bound " << sci(sweep.energies[i].competitor_total)
            << (r.converged ? "" : ", NOT converged") << "\n";
        all_converged = all_converged && r.converged;
    }
    io::write_json(cfg.output_dir / "continuum_summary.json", io::eps_sweep_json(sweep, cfg.beta));
    out << "errors " << (sweep.errors_strictly_decreasing ? "strictly decreasing" : "NOT strictly decreasing")
        << " along the sweep\n";
    return all_converged ? kOk : kNotConverged;
}

struct Loaded {
    io::ProfileRecord rec;
    double beta;
    std::string potential;
};

Loaded load_for(const RunConfig& cfg)
{
    if (cfg.profile.empty())
        throw Error(ErrorCode::InvalidArgument, "no profile file given");
    Loaded l{io::read_profile_json(cfg.profile), 0.0, {}};
    l.beta = cfg.beta_set ? cfg.beta : l.rec.beta;
    l.potential = cfg.potential_set ? cfg.potential : l.rec.potential;
    return l;
}

int cmd_analyze(const RunConfig& cfg, const Loaded& l, std::ostream& out)
{
    const auto np = normalize(resolve_potential(l.potential));
    const auto& p = l.rec.profile;
    bool reported = false;
    std::string failure;
    try {
        const auto d = analyze_decay(p, np, l.beta);
        io::write_json(cfg.output_dir / "decay.json", io::decay_json(d, l.beta));
        io::write_text(cfg.output_dir / "decay.csv", io::decay_csv(p));
        out << "lambda_fit " << sci(d.fit->lambda_fit) << " (r2 " << sci(d.fit->r2) << ", sites " << d.fit->window.first
            << ".." << d.fit->window.last << "), exact " << sci(d.lambda_exact) << ", kappa_inf " << sci(d.kappa_inf)
            << "\n";
        reported = true;
    } catch (const Error& e) {
        failure = e.what();
        out << "no tail report (" << e.what() << ")\n";
    }
    if (!negative_critical_points(np).empty()) {
        const auto rep = plateau_diagnostics(p, np);
        io::write_json(cfg.output_dir / "plateaus.json", io::plateau_json(rep));
        for (const auto& c : rep.candidates)
            out << "plateau candidate +-" << sci(c.eta_star) << ": run " << c.run_length << ", height error "
                << sci(c.height_error) << "\n";
        reported = true;
    }
    if (!reported)
        throw Error(ErrorCode::DegenerateTail, failure);
    return kOk;
}

int cmd_evolve(const RunConfig& cfg, const Loaded& l, std::ostream& out, std::ostream& err)
{
    const auto np = normalize(resolve_potential(l.potential));
    const auto r = evolve(l.rec.profile, np, l.beta, cfg.t_final, cfg.dt);
    if (r.dt_above_stability)
        err << "warning: dt " << num(cfg.dt) << " is above the explicit stability threshold\n";
    io::write_text(cfg.output_dir / "timeseries.csv", io::time_series_csv(r.series));
    io::write_json(cfg.output_dir / "conservation.json", io::conservation_json(r.report, cfg.t_final, cfg.dt));
    const auto& c = r.report;
    out << "t " << num(cfg.t_final) << ": amplitude deviation " << sci(c.max_amp_deviation) << ", phase error "
        << sci(c.phase_error) << ", H drift " << sci(c.h_drift) << ", N drift " << sci(c.n_drift) << "\n";
    return kOk;
}

std::string normalize_key(std::string key)
{
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

} // namespace

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value)
{
    const std::string key = normalize_key(trim(raw_key));
    const std::string v = trim(value);
    if (key == "potential") {
        if (v.empty())
            bad(key, value, "empty");
        cfg.potential = v;
        cfg.potential_set = true;
    } else if (key == "setting") {
        if (v == "both")
            cfg.setting = v;
        else
            cfg.setting = std::string(to_string(parse_setting(v)));
    } else if (key == "n") {
        cfg.n = parse_count(key, v);
    } else if (key == "beta") {
        cfg.beta = parse_positive(key, v);
        cfg.beta_set = true;
    } else if (key == "tau") {
        cfg.tau = parse_positive(key, v);
    } else if (key == "steps" || key == "max_steps") {
        cfg.max_steps = parse_count(key, v);
    } else if (key == "tol" || key == "residual_tol") {
        cfg.residual_tol = parse_positive(key, v);
    } else if (key == "out" || key == "output_dir") {
        if (v.empty())
            bad(key, value, "empty");
        cfg.output_dir = v;
    } else if (key == "eps_list") {
        cfg.eps_list.clear();
        for (const auto& item : split_list(v))
            cfg.eps_list.push_back(parse_positive(key, item));
    } else if (key == "window") {
        cfg.window = parse_positive(key, v);
    } else if (key == "n_list") {
        cfg.n_list.clear();
        for (const auto& item : split_list(v))
            cfg.n_list.push_back(parse_count(key, item));
    } else if (key == "beta_list") {
        cfg.beta_list.clear();
        for (const auto& item : split_list(v))
            cfg.beta_list.push_back(parse_positive(key, item));
    } else if (key == "t_final") {
        cfg.t_final = parse_positive(key, v);
    } else if (key == "dt") {
        cfg.dt = parse_positive(key, v);
    } else if (key == "profile") {
        cfg.profile = v;
    } else if (key == "preset") {
        apply_preset(cfg, v);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown config key '" + raw_key + "'");
    }
}

void apply_config_text(RunConfig& cfg, const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key=value");
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

const std::vector<PresetInfo>& presets()
{
    static const std::vector<PresetInfo> list{
        {"fig1", "solve", "qualitative: cubic, on-site and inter-site, beta 0.25, tau 0.1, 150 steps, N 6"},
        {"fig2", "solve", "qualitative: cubic, on-site, beta 1 and 5, tau 0.01, 600 steps, N 12"},
        {"fig3", "solve", "qualitative: doublewell, inter-site, beta 0.5 and 2, tau 0.05, 1000 steps, N 40"},
        {"fig4", "continuum", "qualitative: cubic, inter-site, beta 1, eps 0.8 .. 0.05, window 6"},
    };
    return list;
}

void apply_preset(RunConfig& cfg, const std::string& name)
{
    RunConfig p;
    p.output_dir = cfg.output_dir;
    p.preset = name;
    if (name == "fig1") {
        p.setting = "both";
        p.beta = 0.25;
        p.tau = 0.1;
        p.max_steps = 150;
        p.n = 6;
    } else if (name == "fig2") {
        p.beta_list = {1.0, 5.0};
        p.tau = 0.01;
        p.max_steps = 600;
        p.n = 12;
    } else if (name == "fig3") {
        p.potential = "doublewell";
        p.setting = "intersite";
        p.beta_list = {0.5, 2.0};
        p.tau = 0.05;
        p.max_steps = 1000;
        p.n = 40;
    } else if (name == "fig4") {
        p.setting = "intersite";
        p.beta = 1.0;
        p.eps_list = {0.8, 0.4, 0.2, 0.1, 0.05};
        p.window = 6.0;
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown preset '" + name + "'");
    }
    cfg = p;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Energy-minimizing standing waves on a DNLS lattice"};
    app.require_subcommand(1, 1);

    static const std::vector<std::pair<std::string, std::string>> flag_keys{
        {"potential", "builtin name (cubic, power:d, doublewell) or table file"},
        {"setting", "onsite, intersite or both"},
        {"n", "number of stored sites N"},
        {"beta", "coupling (rescaled units)"},
        {"tau", "flow time step"},
        {"steps", "maximum number of flow steps"},
        {"tol", "residual tolerance"},
        {"out", "output directory"},
        {"eps-list", "comma separated eps values"},
        {"window", "half width L of the continuum error window"},
        {"n-list", "comma separated N values"},
        {"beta-list", "comma separated beta values"},
        {"t-final", "final time for evolve"},
        {"dt", "time step for evolve"},
        {"preset", "named preset (see the presets command)"},
    };

    std::map<std::string, std::string> flags;
    std::string config_path;
    std::string positional;
    std::map<std::string, CLI::App*> subs;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"solve", "minimize the energy and write profile, trace and tail reports"},
        {"sweep", "energies over n_list (Ritz monotonicity) or over beta_list"},
        {"continuum", "eps sweep against the continuum heteroclinic"},
        {"analyze", "decay and plateau reports for a profile JSON"},
        {"evolve", "run the time-dependent lattice equation from a profile JSON"},
        {"presets", "list presets, or run one by name"},
    };
    std::vector<std::pair<CLI::App*, std::map<std::string, CLI::Option*>>> bound;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        subs[name] = sub;
        std::map<std::string, CLI::Option*> opts;
        for (const auto& [key, desc] : flag_keys)
            opts[key] = sub->add_option("--" + key, flags[key], desc);
        sub->add_option("--config", config_path, "key=value config file");
        if (name == "analyze" || name == "evolve") {
            opts["profile"] = sub->add_option("--profile,profile", flags["profile"], "profile JSON from solve");
        }
        if (name == "presets")
            sub->add_option("name", positional, "preset to run");
        bound.emplace_back(sub, std::move(opts));
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty())
        rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kOk : kError;
    }

    try {
        RunConfig cfg;
        std::string command;
        std::map<std::string, CLI::Option*> given;
        for (auto& [sub, opts] : bound)
            if (sub->parsed()) {
                command = sub->get_name();
                given = opts;
            }

        // Precedence: preset, then config file, then explicit flags.
        auto is_set = [&](const std::string& key) { return given.count(key) && given[key]->count() > 0; };
        if (is_set("preset"))
            apply_preset(cfg, flags["preset"]);
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw Error(ErrorCode::InvalidArgument, "cannot read config file " + config_path);
            std::ostringstream ss;
            ss << in.rdbuf();
            apply_config_text(cfg, ss.str());
        }
        for (const auto& [key, opt] : given)
            if (key != "preset" && opt->count() > 0)
                apply_setting(cfg, key, flags[key]);

        if (command == "presets") {
            if (positional.empty()) {
                for (const auto& p : presets())
                    out << p.name << " (" << p.command << "): " << p.description << "\n";
                return kOk;
            }
            const auto out_dir = cfg.output_dir;
            apply_preset(cfg, positional);
            cfg.output_dir = out_dir;
            const auto it = std::find_if(presets().begin(), presets().end(),
                                         [&](const PresetInfo& p) { return p.name == positional; });
            command = it->command;
        }

        if (command == "solve")
            return cmd_solve(cfg, out);
        if (command == "sweep")
            return cmd_sweep(cfg, out);
        if (command == "continuum")
            return cmd_continuum(cfg, out);
        const auto loaded = load_for(cfg);
        if (command == "analyze")
            return cmd_analyze(cfg, loaded, out);
        return cmd_evolve(cfg, loaded, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
}

} // namespace dnls::cli
