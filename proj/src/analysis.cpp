#include "dnls/analysis.hpp"

#include "dnls/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dnls {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTailFloor = 100 * kEps;
constexpr double kWindowFloor = 1e-12;

double deficit(const Profile& p, std::size_t site) { return 1.0 - p[site - 1]; }

void check_range(const Profile& p, SiteRange r)
{
    if (r.first < 1 || r.last > p.n() || r.first > r.last)
        throw Error(ErrorCode::InvalidArgument, "site window [" + std::to_string(r.first) + ", " +
                                                    std::to_string(r.last) + "] outside stored range");
}

} // namespace

double acosh1p(double d)
{
    if (!(d >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "acosh1p needs a non-negative argument");
    if (d > 1e100)
        return std::log(2.0) + std::log(d);
    return std::log1p(d + std::sqrt(d * (d + 2.0)));
}

DecayEstimate decay_rate(double beta, double f_second_at_1)
{
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidArgument, "decay rate needs beta > 0");
    if (!(f_second_at_1 > 0.0))
        throw Error(ErrorCode::NoExponentialTail,
                    "F''(1) = " + std::to_string(f_second_at_1) + " admits no exponential tail");
    DecayEstimate d;
    d.delta = f_second_at_1 / (2.0 * beta);
    d.lambda_exact = acosh1p(0.5 * d.delta);
    // (2 + delta - sqrt(delta (4 + delta))) / 2, written via the product of
    // the two roots (= 1) to avoid cancellation for large delta.
    d.kappa_inf = 2.0 / (2.0 + d.delta + std::sqrt(d.delta * (4.0 + d.delta)));
    return d;
}

SiteRange default_fit_window(const Profile& p)
{
    const std::size_t n = p.n();
    const auto first = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(n))));
    std::size_t last = 0;
    for (std::size_t m = 1; m <= n; ++m)
        if (deficit(p, m) > kWindowFloor)
            last = m;
    if (last < first)
        throw Error(ErrorCode::DegenerateTail, "no tail sites with 1 - u_j > 1e-12 beyond the core");
    return {first, last};
}

std::vector<double> kappa_sequence(const Profile& p, std::optional<SiteRange> window)
{
    SiteRange r = window.value_or(SiteRange{2, p.n()});
    if (r.first < 2)
        r.first = 2;
    check_range(p, r);
    for (std::size_t m = r.first - 1; m <= r.last; ++m)
        if (!(deficit(p, m) > kTailFloor))
            throw Error(ErrorCode::DegenerateTail, "1 - u_j vanishes at site " + std::to_string(m));
    std::vector<double> kappa;
    kappa.reserve(r.size());
    for (std::size_t m = r.first; m <= r.last; ++m)
        kappa.push_back(deficit(p, m) / deficit(p, m - 1));
    return kappa;
}

TailFit fit_tail(const Profile& p, SiteRange window)
{
    check_range(p, window);
    if (window.size() < 4)
        throw Error(ErrorCode::WindowTooSmall, "tail fit needs at least 4 sites");
    std::vector<double> x, y;
    for (std::size_t m = window.first; m <= window.last; ++m) {
        const double w = deficit(p, m);
        if (!(w > kTailFloor))
            throw Error(ErrorCode::DegenerateTail, "1 - u_j at round-off level at site " + std::to_string(m));
        x.push_back(p.position(m - 1));
        y.push_back(std::log(w));
    }
    const double count = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + slope * (x[i] - mx));
        ss_res += r * r;
    }
    TailFit fit;
    fit.lambda_fit = -slope;
    fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    fit.window = window;
    return fit;
}

DecayEstimate analyze_decay(const Profile& p, const NormalizedPotential& np, double beta)
{
    DecayEstimate d = decay_rate(beta, np.f_second_at_1());
    d.fit = fit_tail(p, default_fit_window(p));
    return d;
}

PlateauReport plateau_diagnostics(const Profile& p, const NormalizedPotential& np, const PlateauOptions& options)
{
    const std::vector<double> roots = negative_critical_points(np, options.samples);
    if (roots.empty())
        throw Error(ErrorCode::NoPlateauCandidates, "F has no interior critical point with F < 0");

    PlateauReport rep;
    rep.tolerance = options.tolerance;
    rep.min_run = options.min_run;
    const auto u = p.values();
    for (double eta : roots) {
        PlateauCandidate c;
        c.eta_star = eta;
        c.f_value = np.f(eta);
        std::size_t start = 0, len = 0;
        for (std::size_t k = 0; k <= u.size(); ++k) {
            const bool in = k < u.size() && std::abs(u[k] - eta) < options.tolerance;
            if (in) {
                if (len == 0)
                    start = k;
                ++len;
            } else if (len > 0) {
                if (len > c.run_length) {
                    c.run_length = len;
                    c.run = {start + 1, start + len};
                }
                len = 0;
            }
        }
        for (std::size_t m = c.run.first; c.run_length > 0 && m <= c.run.last; ++m)
            c.height_error = std::max(c.height_error, std::abs(u[m - 1] - eta));
        rep.candidates.push_back(c);
    }
    for (std::size_t i = 0; i < rep.candidates.size(); ++i) {
        const auto& c = rep.candidates[i];
        if (c.run_length >= options.min_run && (!rep.best || c.run_length > rep.candidates[*rep.best].run_length))
            rep.best = i;
    }
    return rep;
}

EnergyBreakdown plateau_family_energy(Setting setting, const NormalizedPotential& np, double beta, double eta_star,
                                      std::size_t k)
{
    if (k < 1)
        throw Error(ErrorCode::InvalidArgument, "plateau length must be at least 1");
    return energy(Profile(setting, std::vector<double>(k, eta_star)), np, beta);
}

} // namespace dnls
