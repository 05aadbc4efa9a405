#include "dnls/kernels.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <omp.h>

#include <complex>
#include <random>
#include <vector>

using namespace dnls;

TEST_SUITE("kernels") {

TEST_CASE("serial and OpenMP kernels agree bit for bit")
{
    omp_set_num_threads(4);
    const std::size_t n = 3 * static_cast<std::size_t>(kernels::kParallelThreshold) + 17;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> u(n);
    for (auto& x : u)
        x = dist(rng);
    const kernels::Closure c{-1.0, 1.0};
    const auto fp = [](double x) { return oracle::cubic_fp(x); };
    const auto f = [](double x) { return oracle::cubic_f(x); };
    std::span<const double> us(u);

    std::vector<double> g1(n), g2(n), o1(n), o2(n);
    kernels::serial::gateaux(us, c, fp, 0.3, std::span<double>(g1));
    kernels::omp::gateaux(us, c, fp, 0.3, std::span<double>(g2));
    CHECK(g1 == g2);

    kernels::serial::euler_step(us, c, fp, 0.3, 0.05, std::span<double>(g1), std::span<double>(o1));
    kernels::omp::euler_step(us, c, fp, 0.3, 0.05, std::span<double>(g2), std::span<double>(o2));
    CHECK(g1 == g2);
    CHECK(o1 == o2);

    kernels::serial::energy_terms(us, c, f, std::span<double>(g1), std::span<double>(o1));
    kernels::omp::energy_terms(us, c, f, std::span<double>(g2), std::span<double>(o2));
    CHECK(g1 == g2);
    CHECK(o1 == o2);

    std::vector<std::complex<double>> a(n), d1(n), d2(n);
    for (auto& z : a)
        z = {dist(rng), dist(rng)};
    const auto psi1 = [](double x) { return x; };
    kernels::serial::dnls_rhs(std::span<const std::complex<double>>(a), psi1, 0.7,
                              std::span<std::complex<double>>(d1));
    kernels::omp::dnls_rhs(std::span<const std::complex<double>>(a), psi1, 0.7,
                           std::span<std::complex<double>>(d2));
    CHECK(d1 == d2);
}

TEST_CASE("closure handling at both ends")
{
    std::vector<double> u{0.5, 0.75}, g(2);
    const auto fp = [](double) { return 0.0; };
    kernels::serial::gateaux(std::span<const double>(u), kernels::Closure{0.0, 1.0}, fp, 1.0, std::span<double>(g));
    // lower neighbour 0, upper neighbour 1
    CHECK(g[0] == -(0.75 + 0.0 - 1.0));
    CHECK(g[1] == -(1.0 + 0.5 - 1.5));
    kernels::serial::gateaux(std::span<const double>(u), kernels::Closure{-1.0, 1.0}, fp, 1.0, std::span<double>(g));
    CHECK(g[0] == -(0.75 - 0.5 - 1.0));
}

TEST_CASE("DNLS right-hand side for a single plane-wave site")
{
    // constant field A = 1: lap = 0, dA/dt = i Psi'(1) A
    std::vector<std::complex<double>> a(5, {1.0, 0.0}), d(5);
    kernels::serial::dnls_rhs(std::span<const std::complex<double>>(a), [](double) { return 1.0; }, 2.0,
                              std::span<std::complex<double>>(d));
    CHECK(d[0] == std::complex<double>(0, 0));
    CHECK(d[4] == std::complex<double>(0, 0));
    for (int j = 1; j < 4; ++j)
        CHECK(d[j] == std::complex<double>(0, 1));
}

}
