#pragma once

#include "dnls/kernels.hpp"
#include "dnls/potential.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace dnls {

/// Index set of the lattice: Z (on-site) or 1/2 + Z (inter-site).
enum class Setting { OnSite, InterSite };

std::string_view to_string(Setting s);
Setting parse_setting(std::string_view text);

/// Odd, non-decreasing lattice profile in the Ritz set M_N.
///
/// Only the positive half is stored. Stored entry k (0-based) sits at lattice
/// position j = k + 1 on-site and j = k + 1/2 inter-site; the on-site centre
/// u_0 = 0 is implicit, negative positions are the odd reflection, and every
/// position beyond the stored range carries the asymptote +1.
class Profile {
public:
    Profile(Setting setting, std::vector<double> values);

    Setting setting() const noexcept { return setting_; }
    std::size_t n() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }

    /// Lattice position of stored entry k.
    double position(std::size_t k) const noexcept
    {
        return setting_ == Setting::OnSite ? static_cast<double>(k + 1) : static_cast<double>(k) + 0.5;
    }

    kernels::Closure closure() const noexcept
    {
        return {setting_ == Setting::OnSite ? 0.0 : -1.0, 1.0};
    }

    struct Site {
        double j;
        double u;
    };
    /// Fully reflected profile on |j| <= N + margin (tails included).
    std::vector<Site> full_lattice(std::size_t margin = 0) const;

    friend bool operator==(const Profile&, const Profile&) = default;

private:
    Setting setting_;
    std::vector<double> values_;
};

/// u_j = sgn j: the minimizer at zero coupling and the initial datum of the flow.
Profile shock_profile(Setting setting, std::size_t n);

struct EnergyBreakdown {
    double total = 0.0;
    double f_part = 0.0;
    double d_part = 0.0;
    double beta = 0.0;
};

/// E = sum_j F(u_j) + beta sum_j (u_{j+1} - u_j)^2 over the whole reflected
/// lattice, including the two bonds into the constant tails.
EnergyBreakdown energy(const Profile& p, const NormalizedPotential& np, double beta);

struct GradientField {
    std::vector<double> values;
    double sup_norm = 0.0;
};

/// G(u)_j = Psi'(u_j^2) u_j - u_j - beta (u_{j+1} + u_{j-1} - 2 u_j) on the
/// stored indices. Its zeros are the standing waves. Note that dE/du_j on the
/// full lattice is 2 G(u)_j, and 4 G(u)_j per stored (odd) coordinate.
GradientField gateaux_gradient(const Profile& p, const NormalizedPotential& np, double beta);

/// Derivative of `energy` with respect to the stored values (= 4 G).
std::vector<double> energy_gradient(const Profile& p, const NormalizedPotential& np, double beta);

/// sup_j |F'(u_j) - 2 beta (u_{j+1} + u_{j-1} - 2 u_j)| = 2 sup |G|.
double residual_sup(const Profile& p, const NormalizedPotential& np, double beta);

/// (-1)^j u_j on the stored indices. On the half-integer grid the sign is
/// (-1)^(j - 1/2), so u_{1/2} keeps its sign. The result is a raw sequence,
/// not a Profile.
std::vector<double> staggering_transform(const Profile& p);
std::vector<double> staggering_transform(Setting setting, std::span<const double> values);

} // namespace dnls
