#pragma once

#include "dnls/lattice.hpp"
#include "dnls/potential.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dnls {

struct FlowConfig {
    double tau = 0.1;
    std::size_t max_steps = 100000;
    double residual_tol = 1e-10;
    bool enforce_monotone = true;
    bool clamp_to_unit = true;
    /// Record energy and residual every this many steps (the final state is
    /// always recorded).
    std::size_t trace_every = 1;
};

/// 1 / (sup|F''|/2 + 4 beta): above this flow time step the explicit Euler
/// scheme is no longer guaranteed to decrease the energy.
double stable_tau_bound(const NormalizedPotential& np, double beta);

struct MinimizeResult {
    Profile profile;
    EnergyBreakdown energy;
    double residual = 0.0;
    std::size_t steps_taken = 0;
    std::vector<std::size_t> trace_steps{};
    std::vector<double> energy_trace{};
    std::vector<double> residual_trace{};
    bool converged = false;
    bool strictly_increasing = false;
    double tau_bound = 0.0;
    bool tau_above_bound = false;
};

/// Euclidean projection onto the non-decreasing cone (pool adjacent violators).
void project_monotone(std::span<double> values);

/// Projection onto {0 <= u_1 <= ... <= u_N <= 1}: monotone projection, then clamping.
void project_ritz_set(std::span<double> values, bool clamp_to_unit = true, bool enforce_monotone = true);

/// One explicit Euler step u_j - tau (F'(u_j) - 2 beta (u_{j+1} + u_{j-1} - 2 u_j))
/// followed by the optional projections. Throws NonFiniteValue when the step
/// blows up and OutOfDomain when, with projections off, it leaves M_N.
Profile flow_step(const Profile& p, const NormalizedPotential& np, double beta, double tau,
                  bool clamp_to_unit = true, bool enforce_monotone = true);

/// Consecutive differences (including the centre and the step into the tail)
/// all exceed 10 eps max(1, |u_j|).
bool is_strictly_increasing(const Profile& p);

/// Gradient flow from the shock profile until the residual drops below
/// cfg.residual_tol or cfg.max_steps is reached (converged = false then).
MinimizeResult minimize(Setting setting, std::size_t n, const NormalizedPotential& np, double beta,
                        const FlowConfig& cfg = {});

/// Same iteration from an arbitrary admissible starting profile.
MinimizeResult minimize_from(Profile initial, const NormalizedPotential& np, double beta,
                             const FlowConfig& cfg = {});

struct NSweepEntry {
    std::size_t n = 0;
    double energy = 0.0;
    double residual = 0.0;
    std::size_t steps = 0;
    bool converged = false;
};

struct NSweepResult {
    std::vector<NSweepEntry> entries;
    /// energies[i] - energies[i+1]; non-negative up to `tolerance`.
    std::vector<double> differences{};
    bool monotone = true;
    double tolerance = 1e-12;
};

/// Minimum energies on the nested Ritz sets M_N for the given N (non-decreasing
/// list). Independent solves run on the OpenMP worker pool.
NSweepResult n_sweep(Setting setting, std::span<const std::size_t> n_list, const NormalizedPotential& np,
                     double beta, const FlowConfig& cfg = {}, double tolerance = 1e-12);

} // namespace dnls
