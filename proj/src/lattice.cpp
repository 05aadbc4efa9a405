#include "dnls/lattice.hpp"

#include "dnls/error.hpp"
#include "dnls/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dnls {

std::string_view to_string(Setting s)
{
    return s == Setting::OnSite ? "onsite" : "intersite";
}

Setting parse_setting(std::string_view text)
{
    if (text == "onsite" || text == "on-site" || text == "OnSite")
        return Setting::OnSite;
    if (text == "intersite" || text == "inter-site" || text == "InterSite" || text == "offsite")
        return Setting::InterSite;
    throw Error(ErrorCode::InvalidArgument, "unknown setting '" + std::string(text) + "'");
}

Profile::Profile(Setting setting, std::vector<double> values)
    : setting_(setting), values_(std::move(values))
{
    if (values_.empty())
        throw Error(ErrorCode::InvalidProfile, "profile needs at least one stored value");
    double prev = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const double v = values_[k];
        if (!(v >= 0.0 && v <= 1.0))
            throw Error(ErrorCode::InvalidProfile,
                        "value " + std::to_string(v) + " at index " + std::to_string(k) + " outside [0, 1]");
        if (v < prev)
            throw Error(ErrorCode::InvalidProfile, "profile decreases at index " + std::to_string(k));
        prev = v;
    }
}

std::vector<Profile::Site> Profile::full_lattice(std::size_t margin) const
{
    const std::size_t n = values_.size();
    std::vector<Site> out;
    out.reserve(2 * (n + margin) + 1);
    for (std::size_t m = n + margin; m-- > 0;) {
        const double u = m < n ? values_[m] : 1.0;
        out.push_back({-position(m), -u});
    }
    if (setting_ == Setting::OnSite)
        out.push_back({0.0, 0.0});
    for (std::size_t m = 0; m < n + margin; ++m)
        out.push_back({position(m), m < n ? values_[m] : 1.0});
    return out;
}

Profile shock_profile(Setting setting, std::size_t n)
{
    if (n < 1)
        throw Error(ErrorCode::InvalidArgument, "shock profile needs n >= 1");
    return Profile(setting, std::vector<double>(n, 1.0));
}

namespace {

void check_beta(double beta)
{
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidArgument, "coupling beta must be finite and non-negative");
}

} // namespace

EnergyBreakdown energy(const Profile& p, const NormalizedPotential& np, double beta)
{
    check_beta(beta);
    const auto u = p.values();
    const std::size_t n = u.size();
    std::vector<double> f_terms(n), bond_terms(n);
    kernels::omp::energy_terms(
        u, p.closure(), [&np](double x) { return np.f_unchecked(x); }, std::span(f_terms),
        std::span(bond_terms));

    CompensatedSum fsum, dsum;
    if (p.setting() == Setting::OnSite) {
        fsum.add(np.f_unchecked(0.0));
        dsum.add(2.0 * u[0] * u[0]);
    } else {
        dsum.add(4.0 * u[0] * u[0]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        fsum.add(2.0 * f_terms[k]);
        dsum.add(2.0 * bond_terms[k]);
    }

    EnergyBreakdown e;
    e.beta = beta;
    e.f_part = fsum.value();
    e.d_part = dsum.value();
    e.total = e.f_part + beta * e.d_part;
    return e;
}

GradientField gateaux_gradient(const Profile& p, const NormalizedPotential& np, double beta)
{
    check_beta(beta);
    GradientField g;
    g.values.resize(p.n());
    kernels::omp::gateaux(
        p.values(), p.closure(), [&np](double x) { return np.f_prime_unchecked(x); }, beta,
        std::span(g.values));
    for (double v : g.values)
        g.sup_norm = std::max(g.sup_norm, std::abs(v));
    return g;
}

std::vector<double> energy_gradient(const Profile& p, const NormalizedPotential& np, double beta)
{
    auto g = gateaux_gradient(p, np, beta).values;
    for (double& v : g)
        v *= 4.0;
    return g;
}

double residual_sup(const Profile& p, const NormalizedPotential& np, double beta)
{
    return 2.0 * gateaux_gradient(p, np, beta).sup_norm;
}

std::vector<double> staggering_transform(Setting setting, std::span<const double> values)
{
    std::vector<double> out(values.begin(), values.end());
    // on-site j = k + 1, inter-site j - 1/2 = k
    const std::size_t first_flip = setting == Setting::OnSite ? 0 : 1;
    for (std::size_t k = first_flip; k < out.size(); k += 2)
        out[k] = -out[k];
    return out;
}

std::vector<double> staggering_transform(const Profile& p)
{
    return staggering_transform(p.setting(), p.values());
}

} // namespace dnls
