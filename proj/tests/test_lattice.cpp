#include "dnls/lattice.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace dnls;
using doctest::Approx;
using testutil::code_of;

namespace {

const NormalizedPotential& cubic()
{
    static const auto np = normalize(builtin_potential("cubic"));
    return np;
}

std::vector<double> random_profile(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v)
        x = dist(rng);
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_SUITE("lattice") {

TEST_CASE("shock energies")
{
    // on-site: F(0) = 1/2 plus two unit bonds; inter-site: one bond of length 2.
    CHECK(energy(shock_profile(Setting::OnSite, 1), cubic(), 0.25).total == Approx(1.0).epsilon(1e-15));
    CHECK(energy(shock_profile(Setting::InterSite, 1), cubic(), 0.25).total == Approx(1.0).epsilon(1e-15));
    CHECK(energy(shock_profile(Setting::OnSite, 5), cubic(), 0.0).total == Approx(0.5).epsilon(1e-15));
    const auto e = energy(shock_profile(Setting::OnSite, 3), cubic(), 0.25);
    CHECK(e.f_part == Approx(0.5));
    CHECK(e.d_part == Approx(2.0));
    CHECK(e.beta == 0.25);
}

TEST_CASE("energy matches the reflected brute-force sum")
{
    std::mt19937_64 rng(7);
    for (auto s : {Setting::OnSite, Setting::InterSite}) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto v = random_profile(rng, 1 + trial % 13);
            const double beta = 0.1 + 0.07 * trial;
            const double ref = oracle::energy(s, v, beta);
            CHECK(energy(Profile(s, v), cubic(), beta).total == Approx(ref).epsilon(1e-13));
        }
    }
}

TEST_CASE("gateaux gradient of the on-site shock")
{
    const double beta = 0.7;
    const auto g = gateaux_gradient(shock_profile(Setting::OnSite, 4), cubic(), beta);
    // u_1 = 1 between u_0 = 0 and u_2 = 1: F'(1) = 0 and Delta u = -1.
    CHECK(g.values[0] == Approx(beta));
    for (std::size_t k = 1; k < 4; ++k)
        CHECK(g.values[k] == 0.0);
    CHECK(g.sup_norm == Approx(beta));
    CHECK(residual_sup(shock_profile(Setting::OnSite, 4), cubic(), 0.25) == Approx(0.5));
}

TEST_CASE("constant raw sequence is a zero of the kernel")
{
    std::vector<double> u(6, 1.0), g(6, -1.0);
    kernels::serial::gateaux(std::span<const double>(u), kernels::Closure{1.0, 1.0},
                             [](double x) { return oracle::cubic_fp(x); }, 2.0, std::span<double>(g));
    for (double x : g)
        CHECK(x == 0.0);
}

TEST_CASE("gradient agrees with the reflected field and with finite differences")
{
    std::mt19937_64 rng(11);
    for (auto s : {Setting::OnSite, Setting::InterSite}) {
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 2 + trial % 9;
            auto v = random_profile(rng, n);
            const double beta = 0.05 + 0.1 * trial;
            const Profile p(s, v);
            const auto g = gateaux_gradient(p, cubic(), beta);
            const auto full = oracle::reflect(s, v);
            const auto gf = oracle::full_gateaux(full, beta);
            const std::size_t pos0 = (full.u.size() - (s == Setting::OnSite ? 1 : 0)) / 2 + (s == Setting::OnSite ? 1 : 0);
            double sup = 0;
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(g.values[k] == Approx(gf[pos0 + k]).epsilon(1e-12).scale(1e-14));
                // odd symmetry of the reflected field
                CHECK(gf[pos0 - 1 - k - (s == Setting::OnSite ? 1 : 0)] == Approx(-gf[pos0 + k]).scale(1e-14));
                sup = std::max(sup, std::abs(gf[pos0 + k]));
            }
            CHECK(residual_sup(p, cubic(), beta) == Approx(2 * sup).epsilon(1e-12));

            // directional derivative along a random direction, with the profile kept interior
            for (auto& x : v)
                x = 0.05 + 0.9 * x;
            std::vector<double> dir(n);
            std::normal_distribution<double> nd;
            for (auto& d : dir)
                d = nd(rng);
            const auto grad = energy_gradient(Profile(s, v), cubic(), beta);
            double analytic = 0;
            for (std::size_t k = 0; k < n; ++k)
                analytic += grad[k] * dir[k];
            const double h = 1e-6;
            auto shifted = [&](double sign) {
                std::vector<double> w(v);
                for (std::size_t k = 0; k < n; ++k)
                    w[k] += sign * h * dir[k];
                return oracle::energy(s, w, beta);
            };
            const double fd = (shifted(1) - shifted(-1)) / (2 * h);
            CHECK(analytic == Approx(fd).epsilon(1e-6).scale(1e-6));
        }
    }
}

TEST_CASE("energy_gradient is four times the Gateaux field")
{
    const Profile p(Setting::InterSite, {0.2, 0.5, 0.9});
    const auto g = gateaux_gradient(p, cubic(), 0.4);
    const auto d = energy_gradient(p, cubic(), 0.4);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(d[k] == Approx(4 * g.values[k]));
}

TEST_CASE("full lattice layout")
{
    const Profile on(Setting::OnSite, {0.3, 0.8});
    const auto f = on.full_lattice(1);
    REQUIRE(f.size() == 7);
    CHECK(f[0].j == -3.0);
    CHECK(f[0].u == -1.0);
    CHECK(f[3].j == 0.0);
    CHECK(f[3].u == 0.0);
    CHECK(f[4].u == 0.3);
    const Profile off(Setting::InterSite, {0.3, 0.8});
    const auto g = off.full_lattice(0);
    REQUIRE(g.size() == 4);
    CHECK(g[1].j == -0.5);
    CHECK(g[1].u == -0.3);
    CHECK(g[2].j == 0.5);
}

TEST_CASE("staggering")
{
    const Profile on(Setting::OnSite, {0.1, 0.2, 0.3});
    const auto a = staggering_transform(on);
    CHECK(a == std::vector<double>{-0.1, 0.2, -0.3});
    const Profile off(Setting::InterSite, {0.1, 0.2, 0.3});
    const auto b = staggering_transform(off);
    CHECK(b == std::vector<double>{0.1, -0.2, 0.3});
}

TEST_CASE("invalid profiles")
{
    CHECK(code_of([] { Profile(Setting::OnSite, {}); }) == ErrorCode::InvalidProfile);
    CHECK(code_of([] { Profile(Setting::OnSite, {0.5, 0.4}); }) == ErrorCode::InvalidProfile);
    CHECK(code_of([] { Profile(Setting::OnSite, {-0.1}); }) == ErrorCode::InvalidProfile);
    CHECK(code_of([] { Profile(Setting::OnSite, {1.5}); }) == ErrorCode::InvalidProfile);
    CHECK(code_of([] { Profile(Setting::OnSite, {std::nan("")}); }) == ErrorCode::InvalidProfile);
    CHECK(code_of([] { energy(shock_profile(Setting::OnSite, 2), cubic(), -1.0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { parse_setting("diagonal"); }) == ErrorCode::InvalidArgument);
    CHECK(parse_setting("inter-site") == Setting::InterSite);
}

}
