#include "dnls/minimizer.hpp"

#include "dnls/error.hpp"
#include "dnls/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

namespace dnls {

double stable_tau_bound(const NormalizedPotential& np, double beta)
{
    return 1.0 / (0.5 * np.f_second_max() + 4.0 * beta);
}

void project_monotone(std::span<double> values)
{
    struct Block {
        double sum;
        std::size_t count;
        double mean() const { return sum / static_cast<double>(count); }
    };
    std::vector<Block> blocks;
    blocks.reserve(values.size());
    for (double v : values) {
        blocks.push_back({v, 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
            const Block top = blocks.back();
            blocks.pop_back();
            blocks.back().sum += top.sum;
            blocks.back().count += top.count;
        }
    }
    std::size_t k = 0;
    for (const Block& b : blocks) {
        const double m = b.mean();
        for (std::size_t i = 0; i < b.count; ++i)
            values[k++] = m;
    }
}

void project_ritz_set(std::span<double> values, bool clamp_to_unit, bool enforce_monotone)
{
    if (enforce_monotone)
        project_monotone(values);
    if (clamp_to_unit)
        for (double& v : values)
            v = std::clamp(v, 0.0, 1.0);
}

namespace {

void check_step_args(double beta, double tau)
{
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidArgument, "coupling beta must be finite and non-negative");
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw Error(ErrorCode::InvalidArgument, "flow time step must be finite and non-negative");
}

// Applies projections to an updated half-profile and turns it into a Profile.
Profile finish_step(Setting setting, std::vector<double>&& next, bool clamp_to_unit, bool enforce_monotone)
{
    for (double v : next)
        if (!std::isfinite(v))
            throw Error(ErrorCode::NonFiniteValue, "flow step produced a non-finite value; reduce tau");
    project_ritz_set(next, clamp_to_unit, enforce_monotone);
    double prev = 0.0;
    for (double v : next) {
        if (v < 0.0 || v > 1.0 || v < prev)
            throw Error(ErrorCode::OutOfDomain, "unprojected flow step left the Ritz set");
        prev = v;
    }
    return Profile(setting, std::move(next));
}

} // namespace

Profile flow_step(const Profile& p, const NormalizedPotential& np, double beta, double tau,
                  bool clamp_to_unit, bool enforce_monotone)
{
    check_step_args(beta, tau);
    std::vector<double> g(p.n()), next(p.n());
    kernels::omp::euler_step(
        p.values(), p.closure(), [&np](double x) { return np.f_prime_unchecked(x); }, beta, tau,
        std::span(g), std::span(next));
    return finish_step(p.setting(), std::move(next), clamp_to_unit, enforce_monotone);
}

bool is_strictly_increasing(const Profile& p)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto gap_ok = [](double lo, double hi) { return hi - lo > 10.0 * eps * std::max(1.0, std::abs(hi)); };
    const auto u = p.values();
    // on-site: u_0 = 0 < u_1; inter-site: u_{-1/2} = -u_{1/2} < u_{1/2}
    const double below = p.setting() == Setting::OnSite ? 0.0 : -u[0];
    if (!gap_ok(below, u[0]))
        return false;
    for (std::size_t k = 1; k < u.size(); ++k)
        if (!gap_ok(u[k - 1], u[k]))
            return false;
    return gap_ok(u.back(), 1.0);
}

MinimizeResult minimize_from(Profile initial, const NormalizedPotential& np, double beta, const FlowConfig& cfg)
{
    check_step_args(beta, cfg.tau);
    if (!(cfg.residual_tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "residual tolerance must be positive");
    const std::size_t every = std::max<std::size_t>(cfg.trace_every, 1);

    MinimizeResult res{.profile = std::move(initial), .energy = {}};
    res.tau_bound = stable_tau_bound(np, beta);
    res.tau_above_bound = cfg.tau > res.tau_bound;

    const std::size_t n = res.profile.n();
    const Setting setting = res.profile.setting();
    const auto fp = [&np](double x) { return np.f_prime_unchecked(x); };
    std::vector<double> g(n);

    std::size_t step = 0;
    for (;; ++step) {
        std::vector<double> next(n);
        kernels::omp::euler_step(res.profile.values(), res.profile.closure(), fp, beta, cfg.tau, std::span(g),
                                 std::span(next));
        double sup = 0.0;
        for (double v : g)
            sup = std::max(sup, std::abs(v));
        res.residual = 2.0 * sup;
        res.converged = res.residual <= cfg.residual_tol;
        const bool last = res.converged || step >= cfg.max_steps;

        if (step % every == 0 || last) {
            res.trace_steps.push_back(step);
            res.energy_trace.push_back(energy(res.profile, np, beta).total);
            res.residual_trace.push_back(res.residual);
        }
        if (last)
            break;
        res.profile = finish_step(setting, std::move(next), cfg.clamp_to_unit, cfg.enforce_monotone);
    }
    res.steps_taken = step;
    res.energy = energy(res.profile, np, beta);
    res.strictly_increasing = is_strictly_increasing(res.profile);
    return res;
}

MinimizeResult minimize(Setting setting, std::size_t n, const NormalizedPotential& np, double beta,
                        const FlowConfig& cfg)
{
    return minimize_from(shock_profile(setting, n), np, beta, cfg);
}

NSweepResult n_sweep(Setting setting, std::span<const std::size_t> n_list, const NormalizedPotential& np,
                     double beta, const FlowConfig& cfg, double tolerance)
{
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] < n_list[i - 1])
            throw Error(ErrorCode::InvalidArgument, "n_list must be non-decreasing");

    NSweepResult out;
    out.tolerance = tolerance;
    out.entries.resize(n_list.size());
    std::vector<std::exception_ptr> errors(n_list.size());

    const auto count = static_cast<std::ptrdiff_t>(n_list.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            const MinimizeResult r = minimize(setting, n_list[i], np, beta, cfg);
            out.entries[i] = {n_list[i], r.energy.total, r.residual, r.steps_taken, r.converged};
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    for (std::size_t i = 1; i < out.entries.size(); ++i) {
        const double d = out.entries[i - 1].energy - out.entries[i].energy;
        out.differences.push_back(d);
        if (d < -tolerance)
            out.monotone = false;
    }
    return out;
}

} // namespace dnls
