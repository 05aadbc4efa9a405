// Serial reference kernels against their OpenMP counterparts.
// usage: kernel_bench [max_n]   (default 4000000)

#include "dnls/kernels.hpp"
#include "dnls/potential.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <omp.h>
#include <vector>

using namespace dnls;
using clk = std::chrono::steady_clock;

namespace {

template <class Fn>
double best_of(int reps, Fn&& fn)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clk::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(clk::now() - t0).count());
    }
    return best;
}

void row(const char* name, std::size_t n, double ts, double tp, double diff)
{
    std::printf("%-12s %9zu %12.3e %12.3e %8.2f %10.1e\n", name, n, ts, tp, ts / tp, diff);
}

} // namespace

int main(int argc, char** argv)
{
    const std::size_t max_n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000000;
    const auto np = normalize(builtin_potential("cubic"));
    const auto fp = [&np](double e) { return np.f_prime_unchecked(e); };
    const auto f = [&np](double e) { return np.f_unchecked(e); };
    const auto psi1 = [&np](double x) { return np.psi_hat_prime(x); };
    const kernels::Closure c{0.0, 1.0};

    std::printf("threads %d\n", omp_get_max_threads());
    std::printf("%-12s %9s %12s %12s %8s %10s\n", "kernel", "n", "serial[s]", "omp[s]", "speedup", "max|diff|");
    for (std::size_t n = 10000; n <= max_n; n *= 20) {
        std::vector<double> u(n), g1(n), g2(n), o1(n), o2(n), b1(n), b2(n);
        for (std::size_t k = 0; k < n; ++k)
            u[k] = std::tanh(8.0 * static_cast<double>(k + 1) / static_cast<double>(n));
        const int reps = n > 1000000 ? 3 : 10;

        double ts = best_of(reps, [&] { kernels::serial::euler_step<decltype(fp)>(u, c, fp, 1.0, 0.01, g1, o1); });
        double tp = best_of(reps, [&] { kernels::omp::euler_step<decltype(fp)>(u, c, fp, 1.0, 0.01, g2, o2); });
        double diff = 0;
        for (std::size_t k = 0; k < n; ++k)
            diff = std::max(diff, std::abs(o1[k] - o2[k]));
        row("euler_step", n, ts, tp, diff);

        ts = best_of(reps, [&] { kernels::serial::energy_terms<decltype(f)>(u, c, f, g1, b1); });
        tp = best_of(reps, [&] { kernels::omp::energy_terms<decltype(f)>(u, c, f, g2, b2); });
        diff = 0;
        for (std::size_t k = 0; k < n; ++k)
            diff = std::max({diff, std::abs(g1[k] - g2[k]), std::abs(b1[k] - b2[k])});
        row("energy_terms", n, ts, tp, diff);

        std::vector<std::complex<double>> a(n + 2), d1(n + 2), d2(n + 2);
        for (std::size_t j = 0; j < a.size(); ++j)
            a[j] = std::polar(std::tanh(static_cast<double>(j) / 50.0), 0.001 * static_cast<double>(j));
        ts = best_of(reps, [&] { kernels::serial::dnls_rhs<decltype(psi1)>(a, psi1, 0.25, d1); });
        tp = best_of(reps, [&] { kernels::omp::dnls_rhs<decltype(psi1)>(a, psi1, 0.25, d2); });
        diff = 0;
        for (std::size_t j = 0; j < a.size(); ++j)
            diff = std::max(diff, std::abs(d1[j] - d2[j]));
        row("dnls_rhs", n, ts, tp, diff);
    }
    return 0;
}
