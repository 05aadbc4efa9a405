#pragma once

#include "dnls/lattice.hpp"
#include "dnls/minimizer.hpp"
#include "dnls/potential.hpp"

#include <memory>
#include <span>
#include <vector>

namespace dnls {

/// Heteroclinic solution of 2 beta u'' = F'(u), u(+-inf) = +-1, u(0) = 0,
/// tabulated as (xi, u) pairs from the first integral beta (u')^2 = F(u):
///     xi(u) = int_0^u sqrt(beta / F(s)) ds.
/// Beyond the table the solution continues as 1 - w_end exp(-k (xi - xi_end))
/// with the linearised rate k = sqrt(F''(1) / (2 beta)).
class ContinuumSolution {
public:
    ContinuumSolution(std::vector<double> xi, std::vector<double> u, double beta, double quadrature_tol,
                      double tail_rate);

    const std::vector<double>& xi_grid() const noexcept { return xi_; }
    const std::vector<double>& u_values() const noexcept { return u_; }
    double beta() const noexcept { return beta_; }
    double quadrature_tol() const noexcept { return quadrature_tol_; }
    double tail_rate() const noexcept { return tail_rate_; }

    /// u(xi): monotone cubic (PCHIP) interpolation inside the table.
    double evaluate(double xi) const;

    /// xi at a tabulated value of u; throws InvalidArgument if u is not in the table.
    double xi_at(double u) const;

private:
    struct Interp;
    std::vector<double> xi_;
    std::vector<double> u_;
    double beta_;
    double quadrature_tol_;
    double tail_rate_;
    std::shared_ptr<const Interp> interp_;
};

struct LimitOptions {
    // Relative, per table segment; the panel test also accepts differences at
    // round-off level (64 eps).
    double quadrature_tol = 1e-12;
    int hypothesis_samples = 2001;
};

/// u = tanh(t) for t uniform in [0, artanh(u_max)]: roughly even spacing in xi.
std::vector<double> default_u_grid(std::size_t points = 2001, double u_max = 1.0 - 1e-6);

/// Tabulates the continuum heteroclinic at the given |u| < 1 values, with the
/// odd mirror image and u(0) = 0 added. Throws HypothesisViolated if F <= 0
/// somewhere on (0, max|u|] or F''(1) <= 0, and QuadratureFailure if the
/// quadrature does not reach its tolerance.
ContinuumSolution limit_profile(const NormalizedPotential& np, double beta, std::span<const double> u_grid,
                                const LimitOptions& options = {});

struct ContinuumResiduals {
    double first_integral = 0.0; ///< max |beta (u')^2 - F(u)|
    double ode = 0.0;            ///< max |2 beta u'' - F'(u)|
};

/// Centred-difference residuals of the tabulated solution on a uniform grid of
/// spacing h over |xi| <= half_width.
ContinuumResiduals continuum_residuals(const ContinuumSolution& sol, const NormalizedPotential& np, double h,
                                       double half_width);

struct EpsOptions {
    double window = 6.0;  ///< L: errors are measured on |xi| <= L
    double margin = 4.0;  ///< extra room the Ritz truncation must leave beyond L
};

/// Lattice solve at coupling beta / eps^2 with stored site j placed at xi = eps j.
struct EpsRun {
    double eps = 0.0;
    double lattice_beta = 0.0;
    Profile profile;
    double sup_error_on_window = 0.0;
    double window_half_width = 0.0;
    double residual = 0.0;
    std::size_t steps = 0;
    bool converged = false;
};

/// Smallest N with eps N >= L + margin.
std::size_t required_sites(double eps, const EpsOptions& options = {});

/// Throws WindowNotCovered if eps n < L + margin.
EpsRun eps_solve(const NormalizedPotential& np, double beta, double eps, Setting setting, std::size_t n,
                 const FlowConfig& cfg, const ContinuumSolution& limit, const EpsOptions& options = {});

struct OverlayRow {
    double xi;
    double u_eps;
    double u_limit;
    double error;
};

/// Both sides of the window, one row per lattice site with |xi| <= L.
std::vector<OverlayRow> overlay(const EpsRun& run, const ContinuumSolution& limit);

struct EpsEnergy {
    double f_part = 0.0;      ///< eps sum F(u_j)
    double d_eps_part = 0.0;  ///< (1/eps) sum (u_{j+1} - u_j)^2
    double total = 0.0;       ///< f_part + beta d_eps_part
    double competitor_total = 0.0; ///< same functional on the clamped linear ramp
    bool below_competitor = false;
};

/// Scaled energy of the minimizer against the explicit ramp v(eps j) = clamp(eps j, -1, 1).
EpsEnergy energy_bound_check(const EpsRun& run, const NormalizedPotential& np, double beta);

struct EpsSweep {
    std::vector<EpsRun> runs;
    std::vector<EpsEnergy> energies;
    bool errors_strictly_decreasing = true;
};

/// eps_solve for each eps (N from required_sites, tau capped at 0.9 of the
/// stability bound for beta / eps^2), run on the OpenMP worker pool.
EpsSweep eps_sweep(const NormalizedPotential& np, double beta, Setting setting, std::span<const double> eps_list,
                   const FlowConfig& cfg, const ContinuumSolution& limit, const EpsOptions& options = {});

} // namespace dnls
