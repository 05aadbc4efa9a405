#include "dnls/continuum.hpp"

#include "dnls/error.hpp"

#include <cmath>
// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <exception>
#include <limits>
#include <optional>
#include <string>

namespace dnls {

namespace {

// Bisection on the fixed 31-point Kronrod rule; a panel is accepted when it
// agrees with the sum of its halves. Boost's own adaptive estimate does not
// shrink under refinement on short panels, so it is not used here.
// cond(a, b) bounds |s f'(s) / f(s)| on the panel: rounding of the abscissae
// alone moves the panel sum by about eps * cond, so differences below that are noise.
template <class Fn, class Cond>
double adaptive_kronrod(const Fn& f, double a, double b, double tol, const Cond& cond, int depth)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double m = 0.5 * (a + b);
    const double whole = GK::integrate(f, a, b, 0, 0.0);
    const double left = GK::integrate(f, a, m, 0, 0.0);
    const double right = GK::integrate(f, m, b, 0, 0.0);
    const double halves = left + right;
    const double diff = std::abs(whole - halves);
    if (diff <= std::max(tol * std::abs(halves), 64 * cond(a, b) * std::numeric_limits<double>::epsilon() *
                                                     (std::abs(left) + std::abs(right))))
        return halves;
    if (depth == 0 || !(m > a && m < b))
        throw Error(ErrorCode::QuadratureFailure,
                    "quadrature on [" + std::to_string(a) + ", " + std::to_string(b) + "] did not converge");
    return adaptive_kronrod(f, a, m, tol, cond, depth - 1) + adaptive_kronrod(f, m, b, tol, cond, depth - 1);
}

} // namespace

struct ContinuumSolution::Interp {
    boost::math::interpolators::pchip<std::vector<double>> spline;
};

ContinuumSolution::ContinuumSolution(std::vector<double> xi, std::vector<double> u, double beta, double quadrature_tol,
                                     double tail_rate)
    : xi_(std::move(xi)), u_(std::move(u)), beta_(beta), quadrature_tol_(quadrature_tol), tail_rate_(tail_rate)
{
    if (xi_.size() != u_.size() || xi_.size() < 3)
        throw Error(ErrorCode::InvalidArgument, "continuum table needs at least 3 matching points");
    for (std::size_t i = 1; i < xi_.size(); ++i)
        if (!(xi_[i] > xi_[i - 1]) || !(u_[i] > u_[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "continuum table must be strictly increasing");
    if (xi_.size() >= 4) {
        auto x = xi_;
        auto y = u_;
        interp_ = std::make_shared<const Interp>(Interp{{std::move(x), std::move(y)}});
    }
}

double ContinuumSolution::evaluate(double xi) const
{
    const double a = std::abs(xi);
    const double sign = xi < 0 ? -1.0 : 1.0;
    if (a > xi_.back()) {
        const double w_end = 1.0 - u_.back();
        return sign * (1.0 - w_end * std::exp(-tail_rate_ * (a - xi_.back())));
    }
    if (interp_)
        return sign * interp_->spline(a);
    // three-point table: piecewise linear
    const auto it = std::upper_bound(xi_.begin(), xi_.end(), a);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - xi_.begin()), xi_.size() - 1);
    const double w = (a - xi_[k - 1]) / (xi_[k] - xi_[k - 1]);
    return sign * ((1 - w) * u_[k - 1] + w * u_[k]);
}

double ContinuumSolution::xi_at(double u) const
{
    const auto it = std::lower_bound(u_.begin(), u_.end(), u);
    if (it == u_.end() || *it != u)
        throw Error(ErrorCode::InvalidArgument, "u = " + std::to_string(u) + " is not tabulated");
    return xi_[static_cast<std::size_t>(it - u_.begin())];
}

std::vector<double> default_u_grid(std::size_t points, double u_max)
{
    if (points < 2 || !(u_max > 0 && u_max < 1))
        throw Error(ErrorCode::InvalidArgument, "bad continuum grid request");
    const double t_max = std::atanh(u_max);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = std::tanh(t_max * static_cast<double>(i) / static_cast<double>(points - 1));
    grid.back() = u_max;
    return grid;
}

ContinuumSolution limit_profile(const NormalizedPotential& np, double beta, std::span<const double> u_grid,
                                const LimitOptions& options)
{
    if (!(beta > 0) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidArgument, "continuum limit needs beta > 0");

    std::vector<double> levels;
    levels.reserve(u_grid.size());
    for (double u : u_grid) {
        if (!(std::abs(u) < 1.0))
            throw Error(ErrorCode::InvalidArgument, "continuum grid values must satisfy |u| < 1");
        if (u != 0.0)
            levels.push_back(std::abs(u));
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.empty())
        throw Error(ErrorCode::InvalidArgument, "continuum grid needs a nonzero value");

    if (!(np.f_second_at_1() > 0))
        throw Error(ErrorCode::HypothesisViolated, "F''(1) must be positive for a heteroclinic with exponential tails");
    const int m = std::max(options.hypothesis_samples, 2);
    for (int i = 0; i <= m; ++i) {
        const double s = levels.back() * i / m;
        if (!(np.f(s) > 0))
            throw Error(ErrorCode::HypothesisViolated, "F(" + std::to_string(s) + ") <= 0 on the integration range");
    }

    auto integrand = [&np, beta](double s) { return std::sqrt(beta / np.f_unchecked(s)); };
    // F ~ (1 - s)^2 near 1, so the integrand is conditioned like 1 / (1 - s)
    auto cond = [](double, double b) { return 1.0 + b / (1.0 - b); };

    std::vector<double> xi_pos(levels.size());
    double acc = 0.0, lower = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        double piece = 0.0;
        try {
            piece = adaptive_kronrod(integrand, lower, levels[i], options.quadrature_tol, cond, 30);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(ErrorCode::QuadratureFailure, e.what());
        }
        if (!std::isfinite(piece))
            throw Error(ErrorCode::QuadratureFailure,
                        "non-finite quadrature on [" + std::to_string(lower) + ", " + std::to_string(levels[i]) + "]");
        acc += piece;
        xi_pos[i] = acc;
        lower = levels[i];
    }

    std::vector<double> xi, u;
    xi.reserve(2 * levels.size() + 1);
    u.reserve(2 * levels.size() + 1);
    for (std::size_t i = levels.size(); i-- > 0;) {
        xi.push_back(-xi_pos[i]);
        u.push_back(-levels[i]);
    }
    xi.push_back(0.0);
    u.push_back(0.0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        xi.push_back(xi_pos[i]);
        u.push_back(levels[i]);
    }
    const double rate = std::sqrt(np.f_second_at_1() / (2.0 * beta));
    return ContinuumSolution(std::move(xi), std::move(u), beta, options.quadrature_tol, rate);
}

ContinuumResiduals continuum_residuals(const ContinuumSolution& sol, const NormalizedPotential& np, double h,
                                       double half_width)
{
    if (!(h > 0) || !(half_width > h))
        throw Error(ErrorCode::InvalidArgument, "bad residual grid");
    const auto steps = static_cast<std::size_t>(std::floor(2 * half_width / h));
    std::vector<double> u(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        u[i] = sol.evaluate(-half_width + h * static_cast<double>(i));
    ContinuumResiduals r;
    const double beta = sol.beta();
    for (std::size_t i = 1; i < steps; ++i) {
        const double d1 = (u[i + 1] - u[i - 1]) / (2 * h);
        const double d2 = (u[i + 1] - 2 * u[i] + u[i - 1]) / (h * h);
        r.first_integral = std::max(r.first_integral, std::abs(beta * d1 * d1 - np.f(u[i])));
        r.ode = std::max(r.ode, std::abs(2 * beta * d2 - np.f_prime(u[i])));
    }
    return r;
}

std::size_t required_sites(double eps, const EpsOptions& options)
{
    if (!(eps > 0) || !std::isfinite(eps))
        throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    return static_cast<std::size_t>(std::ceil((options.window + options.margin) / eps - 1e-9));
}

EpsRun eps_solve(const NormalizedPotential& np, double beta, double eps, Setting setting, std::size_t n,
                 const FlowConfig& cfg, const ContinuumSolution& limit, const EpsOptions& options)
{
    if (!(eps > 0) || !std::isfinite(eps))
        throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    if (eps * static_cast<double>(n) < options.window + options.margin - 1e-9)
        throw Error(ErrorCode::WindowNotCovered, "eps N = " + std::to_string(eps * static_cast<double>(n)) +
                                                     " does not cover L + margin = " +
                                                     std::to_string(options.window + options.margin));
    const double lattice_beta = beta / (eps * eps);
    MinimizeResult r = minimize(setting, n, np, lattice_beta, cfg);

    EpsRun run{.eps = eps, .lattice_beta = lattice_beta, .profile = std::move(r.profile)};
    run.window_half_width = options.window;
    run.residual = r.residual;
    run.steps = r.steps_taken;
    run.converged = r.converged;
    for (std::size_t k = 0; k < run.profile.n(); ++k) {
        const double xi = eps * run.profile.position(k);
        if (xi > options.window + 1e-12)
            break;
        run.sup_error_on_window = std::max(run.sup_error_on_window, std::abs(run.profile[k] - limit.evaluate(xi)));
    }
    return run;
}

std::vector<OverlayRow> overlay(const EpsRun& run, const ContinuumSolution& limit)
{
    std::vector<OverlayRow> rows;
    for (const auto& site : run.profile.full_lattice()) {
        const double xi = run.eps * site.j;
        if (std::abs(xi) > run.window_half_width + 1e-12)
            continue;
        const double ul = limit.evaluate(xi);
        rows.push_back({xi, site.u, ul, site.u - ul});
    }
    return rows;
}

EpsEnergy energy_bound_check(const EpsRun& run, const NormalizedPotential& np, double beta)
{
    const double eps = run.eps;
    auto scaled = [&](const Profile& p, double& f_part, double& d_part) {
        const EnergyBreakdown e = energy(p, np, run.lattice_beta);
        f_part = eps * e.f_part;
        d_part = e.d_part / eps;
        return f_part + beta * d_part;
    };
    EpsEnergy out;
    out.total = scaled(run.profile, out.f_part, out.d_eps_part);

    std::vector<double> ramp(run.profile.n());
    for (std::size_t k = 0; k < ramp.size(); ++k)
        ramp[k] = std::min(eps * run.profile.position(k), 1.0);
    double cf = 0, cd = 0;
    out.competitor_total = scaled(Profile(run.profile.setting(), std::move(ramp)), cf, cd);
    out.below_competitor = out.total <= out.competitor_total + 1e-12 * std::abs(out.competitor_total);
    return out;
}

EpsSweep eps_sweep(const NormalizedPotential& np, double beta, Setting setting, std::span<const double> eps_list,
                   const FlowConfig& cfg, const ContinuumSolution& limit, const EpsOptions& options)
{
    const auto count = static_cast<std::ptrdiff_t>(eps_list.size());
    std::vector<std::optional<EpsRun>> runs(eps_list.size());
    std::vector<std::exception_ptr> errors(eps_list.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            const double eps = eps_list[i];
            FlowConfig c = cfg;
            c.tau = std::min(cfg.tau, 0.9 * stable_tau_bound(np, beta / (eps * eps)));
            runs[i] = eps_solve(np, beta, eps, setting, required_sites(eps, options), c, limit, options);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    EpsSweep sweep;
    for (auto& r : runs) {
        sweep.energies.push_back(energy_bound_check(*r, np, beta));
        sweep.runs.push_back(std::move(*r));
    }
    for (std::size_t i = 1; i < sweep.runs.size(); ++i)
        if (!(sweep.runs[i].sup_error_on_window < sweep.runs[i - 1].sup_error_on_window))
            sweep.errors_strictly_decreasing = false;
    return sweep;
}

} // namespace dnls
