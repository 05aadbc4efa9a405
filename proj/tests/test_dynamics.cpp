#include "dnls/dynamics.hpp"
#include "dnls/minimizer.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace dnls;
using doctest::Approx;
using testutil::code_of;

namespace {

const NormalizedPotential& cubic()
{
    static const auto np = normalize(builtin_potential("cubic"));
    return np;
}

LatticeState run(const Profile& p, double beta, double t_final, double dt)
{
    auto s = initial_state(p, beta);
    const auto steps = static_cast<int>(std::lround(t_final / dt));
    for (int i = 0; i < steps; ++i)
        advance(s, cubic(), dt);
    return s;
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("uncoupled sites rotate at their own frequency")
{
    const Profile p(Setting::OnSite, {0.3, 0.6, 0.9});
    const auto s = run(p, 0.0, 1.0, 1e-3);
    // i A' = -Psi'(|A|^2) A with Psi'(x) = x: A = u exp(i u^2 t)
    const std::size_t centre = s.tail_margin + 3;
    CHECK(s.positions[centre] == 0.0);
    CHECK(s.amplitudes[centre] == std::complex<double>(0, 0));
    for (std::size_t k = 0; k < 3; ++k) {
        const double u = p[k];
        const auto expect = std::polar(u, u * u * s.time);
        CHECK(std::abs(s.amplitudes[centre + 1 + k] - expect) < 1e-12);
        CHECK(std::abs(s.amplitudes[centre - 1 - k] + expect) < 1e-12);
    }
}

TEST_CASE("tails follow exp(i t) sgn j")
{
    const auto s = run(shock_profile(Setting::InterSite, 4), 0.8, 0.5, 1e-2);
    const auto phase = std::polar(1.0, s.time);
    for (std::size_t i = 0; i < s.tail_margin; ++i) {
        CHECK(s.amplitudes[i] == -phase);
        CHECK(s.amplitudes[s.amplitudes.size() - 1 - i] == phase);
    }
    CHECK(s.time == Approx(0.5));
}

TEST_CASE("odd symmetry is preserved")
{
    const auto s = run(Profile(Setting::OnSite, {0.2, 0.5, 0.7, 0.95}), 0.6, 2.0, 1e-2);
    const std::size_t m = s.amplitudes.size();
    for (std::size_t i = 0; i < m; ++i)
        CHECK(std::abs(s.amplitudes[i] + s.amplitudes[m - 1 - i]) < 1e-14);
}

TEST_CASE("H - N at t = 0 is the lattice energy")
{
    for (auto st : {Setting::OnSite, Setting::InterSite}) {
        const Profile p(st, {0.1, 0.45, 0.8, 0.97});
        const auto s = initial_state(p, 0.7);
        const auto q = conserved_quantities(s, cubic(), 1e9);
        CHECK(q.h - q.n == Approx(energy(p, cubic(), 0.7).total).epsilon(1e-14));
    }
}

TEST_CASE("RK4 is fourth order")
{
    const auto p = shock_profile(Setting::OnSite, 6);
    const auto ref = run(p, 1.0, 0.4, 1e-4);
    auto err = [&](double dt) {
        const auto s = run(p, 1.0, 0.4, dt);
        double e = 0;
        for (std::size_t i = 0; i < s.amplitudes.size(); ++i)
            e = std::max(e, std::abs(s.amplitudes[i] - ref.amplitudes[i]));
        return e;
    };
    const double ratio = err(0.04) / err(0.02);
    CHECK(ratio == Approx(16.0).epsilon(0.15));
}

TEST_CASE("minimizer is a standing wave, the shock is not")
{
    FlowConfig cfg;
    cfg.residual_tol = 1e-12;
    const auto r = minimize(Setting::InterSite, 12, cubic(), 1.0, cfg);
    EvolveOptions opts;
    opts.record_every = 50;
    const auto wave = evolve(r.profile, cubic(), 1.0, 2.0, 1e-3, opts);
    CHECK(wave.report.max_amp_deviation < 1e-9);
    CHECK(wave.report.phase_error < 1e-9);
    CHECK(wave.report.h_drift < 1e-10);
    CHECK(wave.report.n_drift < 1e-10);
    CHECK_FALSE(wave.dt_above_stability);
    CHECK(wave.series.front().t == 0.0);
    CHECK(wave.series.back().t == Approx(2.0));
    const auto shock = evolve(shock_profile(Setting::InterSite, 12), cubic(), 1.0, 2.0, 1e-3, opts);
    CHECK(shock.report.max_amp_deviation > 1e-2);
}

TEST_CASE("blow-up and bad arguments")
{
    EvolveOptions opts;
    const auto r = [&] { evolve(shock_profile(Setting::OnSite, 3), cubic(), 1.0, 1000.0, 5.0, opts); };
    CHECK(code_of(r) == ErrorCode::NonFiniteValue);
    CHECK(code_of([] { evolve(shock_profile(Setting::OnSite, 3), cubic(), 1.0, 1.0, 0.0); })
          == ErrorCode::InvalidArgument);
    CHECK(code_of([] { initial_state(shock_profile(Setting::OnSite, 3), 1.0, 0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { initial_state(shock_profile(Setting::OnSite, 3), -1.0); }) == ErrorCode::InvalidArgument);
}

}
