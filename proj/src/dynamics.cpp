#include "dnls/dynamics.hpp"

#include "dnls/error.hpp"
#include "dnls/kernels.hpp"
#include "dnls/summation.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

namespace dnls {

namespace {

using cplx = std::complex<double>;

void drive_tails(std::span<cplx> a, const LatticeState& s, double t)
{
    const cplx phase = std::polar(1.0, s.sigma * t);
    for (std::size_t i = 0; i < s.tail_margin; ++i) {
        a[i] = -phase;
        a[a.size() - 1 - i] = phase;
    }
}

// Slice handed to the RHS kernel: the dynamic sites plus one boundary entry on each side.
std::span<const cplx> stencil(const std::vector<cplx>& a, const LatticeState& s)
{
    return std::span<const cplx>(a).subspan(s.first_dynamic() - 1, s.end_dynamic() - s.first_dynamic() + 2);
}

std::span<cplx> stencil(std::vector<cplx>& a, const LatticeState& s)
{
    return std::span<cplx>(a).subspan(s.first_dynamic() - 1, s.end_dynamic() - s.first_dynamic() + 2);
}

} // namespace

LatticeState initial_state(const Profile& p, double beta, std::size_t tail_margin)
{
    if (tail_margin < 1)
        throw Error(ErrorCode::InvalidArgument, "need at least one tail site on each side");
    if (!(beta >= 0) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidArgument, "coupling beta must be finite and non-negative");
    LatticeState s;
    s.setting = p.setting();
    s.n = p.n();
    s.tail_margin = tail_margin;
    s.beta = beta;
    for (const auto& site : p.full_lattice(tail_margin)) {
        s.positions.push_back(site.j);
        s.amplitudes.emplace_back(site.u, 0.0);
    }
    return s;
}

void advance(LatticeState& s, const NormalizedPotential& np, double dt)
{
    const auto psi1 = [&np](double x) { return np.psi_hat_prime(x); };
    const std::size_t size = s.amplitudes.size();
    const std::size_t lo = s.first_dynamic(), hi = s.end_dynamic();
    const double t = s.time;

    std::vector<cplx> k1(size), k2(size), k3(size), k4(size), y(s.amplitudes);
    auto rhs = [&](std::vector<cplx>& state, std::vector<cplx>& out) {
        kernels::omp::dnls_rhs(stencil(std::as_const(state), s), psi1, s.beta, stencil(out, s));
    };
    auto stage = [&](const std::vector<cplx>& k, double c, double t_stage) {
        for (std::size_t j = lo; j < hi; ++j)
            y[j] = s.amplitudes[j] + c * dt * k[j];
        drive_tails(y, s, t_stage);
    };

    rhs(s.amplitudes, k1);
    stage(k1, 0.5, t + 0.5 * dt);
    rhs(y, k2);
    stage(k2, 0.5, t + 0.5 * dt);
    rhs(y, k3);
    stage(k3, 1.0, t + dt);
    rhs(y, k4);

    for (std::size_t j = lo; j < hi; ++j) {
        s.amplitudes[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        if (!std::isfinite(s.amplitudes[j].real()) || !std::isfinite(s.amplitudes[j].imag()))
            throw Error(ErrorCode::NonFiniteValue, "DNLS integration blew up at t = " + std::to_string(t + dt));
    }
    s.time = t + dt;
    drive_tails(s.amplitudes, s, s.time);
}

WindowedQuantities conserved_quantities(const LatticeState& s, const NormalizedPotential& np, double half_width)
{
    CompensatedSum h, n;
    bool prev_in = false;
    for (std::size_t i = 0; i < s.amplitudes.size(); ++i) {
        const bool in = std::abs(s.positions[i]) <= half_width + 1e-12;
        if (in) {
            const double x = std::norm(s.amplitudes[i]);
            h.add(np.psi_hat(x));
            n.add(x);
            if (prev_in)
                h.add(s.beta * std::norm(s.amplitudes[i] - s.amplitudes[i - 1]));
        }
        prev_in = in;
    }
    return {h.value(), n.value()};
}

EvolveResult evolve(const Profile& initial, const NormalizedPotential& np, double beta, double t_final, double dt,
                    const EvolveOptions& options)
{
    if (!(dt > 0) || !(t_final > 0) || !std::isfinite(dt) || !std::isfinite(t_final))
        throw Error(ErrorCode::InvalidArgument, "t_final and dt must be positive");

    EvolveResult res;
    res.state = initial_state(initial, beta, options.tail_margin);
    LatticeState& s = res.state;

    double max_psi1 = 0.0;
    for (int i = 0; i <= 100; ++i)
        max_psi1 = std::max(max_psi1, std::abs(np.psi_hat_prime(i / 100.0)));
    res.dt_above_stability = dt * (4 * beta + max_psi1) > options.stability_limit;

    const double window = options.window < 0 ? s.positions.back() : options.window;
    const WindowedQuantities q0 = conserved_quantities(s, np, window);

    std::vector<double> ref(s.amplitudes.size());
    for (std::size_t i = 0; i < ref.size(); ++i)
        ref[i] = s.amplitudes[i].real();

    ConservationReport& rep = res.report;
    auto record = [&] {
        const WindowedQuantities q = conserved_quantities(s, np, window);
        const cplx gauge = std::polar(1.0, -s.sigma * s.time);
        TimeSample ts{s.time, 0.0, 0.0, q.h, q.n};
        for (std::size_t j = s.first_dynamic(); j < s.end_dynamic(); ++j) {
            ts.max_amp_deviation = std::max(ts.max_amp_deviation, std::abs(std::abs(s.amplitudes[j]) - std::abs(ref[j])));
            if (std::abs(ref[j]) > 0.1)
                ts.phase_error = std::max(ts.phase_error, std::abs(std::arg(s.amplitudes[j] * gauge / ref[j])));
        }
        rep.max_amp_deviation = std::max(rep.max_amp_deviation, ts.max_amp_deviation);
        rep.phase_error = std::max(rep.phase_error, ts.phase_error);
        rep.h_drift = std::max(rep.h_drift, std::abs(q.h - q0.h));
        rep.n_drift = std::max(rep.n_drift, std::abs(q.n - q0.n));
        rep.h_window = q.h;
        rep.n_window = q.n;
        res.series.push_back(ts);
    };

    record();
    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
    const std::size_t every = std::max<std::size_t>(options.record_every, 1);
    for (std::size_t step = 1; step <= steps; ++step) {
        advance(s, np, dt);
        if (step % every == 0 || step == steps)
            record();
    }
    return res;
}

} // namespace dnls
