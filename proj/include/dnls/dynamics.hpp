#pragma once

#include "dnls/lattice.hpp"
#include "dnls/potential.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace dnls {

/// Complex amplitudes on |j| <= N + margin, ordered by position. Sites with
/// |j| <= N evolve; the margin sites are the tails, held at e^{i sigma t} sgn j.
struct LatticeState {
    Setting setting = Setting::OnSite;
    std::size_t n = 0;
    std::size_t tail_margin = 1;
    std::vector<double> positions;
    std::vector<std::complex<double>> amplitudes;
    double time = 0.0;
    double beta = 0.0;
    double sigma = 1.0;

    std::size_t first_dynamic() const noexcept { return tail_margin; }
    std::size_t end_dynamic() const noexcept { return amplitudes.size() - tail_margin; }
};

/// The profile as a real state at t = 0 (tail_margin >= 1).
LatticeState initial_state(const Profile& p, double beta, std::size_t tail_margin = 2);

/// One classical fourth-order Runge-Kutta step of
///     i dA_j/dt = beta (A_{j+1} + A_{j-1} - 2 A_j) - Psi'(|A_j|^2) A_j
/// with the tails driven at every stage time.
void advance(LatticeState& state, const NormalizedPotential& np, double dt);

/// Windowed H = sum Psi(|A_j|^2) + beta sum |A_{j+1} - A_j|^2 and N = sum |A_j|^2
/// over the sites with |j| <= half_width and the bonds between them.
struct WindowedQuantities {
    double h = 0.0;
    double n = 0.0;
};
WindowedQuantities conserved_quantities(const LatticeState& state, const NormalizedPotential& np, double half_width);

struct ConservationReport {
    double h_window = 0.0;
    double n_window = 0.0;
    double h_drift = 0.0;
    double n_drift = 0.0;
    double max_amp_deviation = 0.0;
    double phase_error = 0.0;
};

struct TimeSample {
    double t;
    double max_amp_deviation;
    double phase_error;
    double h_window;
    double n_window;
};

struct EvolveOptions {
    std::size_t tail_margin = 2;
    std::size_t record_every = 100;
    /// |j| <= window for H and N; negative means the whole simulated range.
    double window = -1.0;
    /// dt (4 beta + max Psi') above this exceeds the RK4 stability interval.
    double stability_limit = 2.8;
};

struct EvolveResult {
    LatticeState state;
    ConservationReport report;
    std::vector<TimeSample> series;
    bool dt_above_stability = false;
};

/// Evolves the profile and measures how far it is from a standing wave: the
/// amplitude deviation sup ||A_j(t)| - |u_j||, the gauge phase error
/// |arg(A_j e^{-i sigma t} / u_j)| over |u_j| > 0.1, and the drift of the
/// windowed H and N. All figures are maxima over the recorded samples.
EvolveResult evolve(const Profile& initial, const NormalizedPotential& np, double beta, double t_final, double dt,
                    const EvolveOptions& options = {});

} // namespace dnls
