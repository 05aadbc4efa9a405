#pragma once

// Inner loops of the solver. Every kernel exists twice with identical
// signatures: `serial` is the reference and `omp` the OpenMP version used by
// the library. Both perform the same floating-point operations per entry, so
// their outputs agree bit for bit; reductions are left to the caller, which
// sums the per-entry terms in a fixed order.

#include <complex>
#include <cstddef>
#include <span>

namespace dnls::kernels {

/// Neighbour closure of the stored half-profile u_1..u_N. The lower neighbour
/// of u_1 is lower_sign * u_1 (0 for on-site, -1 for inter-site), the upper
/// neighbour of u_N is `upper`.
struct Closure {
    double lower_sign = 0.0;
    double upper = 1.0;
};

/// Below this length the OpenMP kernels run on the calling thread only.
inline constexpr std::ptrdiff_t kParallelThreshold = 4096;

namespace detail {

inline double lower_of(std::span<const double> u, std::ptrdiff_t k, const Closure& c)
{
    return k == 0 ? c.lower_sign * u[0] : u[k - 1];
}

inline double upper_of(std::span<const double> u, std::ptrdiff_t k, const Closure& c)
{
    return k + 1 == static_cast<std::ptrdiff_t>(u.size()) ? c.upper : u[k + 1];
}

template <class FPrime>
inline double gateaux_entry(std::span<const double> u, std::ptrdiff_t k, const Closure& c,
                            const FPrime& fp, double beta)
{
    const double lap = upper_of(u, k, c) + lower_of(u, k, c) - 2.0 * u[k];
    return 0.5 * fp(u[k]) - beta * lap;
}

template <class Psi1>
inline std::complex<double> dnls_entry(std::span<const std::complex<double>> a, std::ptrdiff_t j,
                                       const Psi1& psi1, double beta)
{
    // dA/dt = -i [ beta (A_{j+1} + A_{j-1} - 2 A_j) - Psi'(|A_j|^2) A_j ]
    const std::complex<double> lap = a[j + 1] + a[j - 1] - 2.0 * a[j];
    const std::complex<double> w = beta * lap - psi1(std::norm(a[j])) * a[j];
    return {w.imag(), -w.real()};
}

} // namespace detail

namespace serial {

/// g_k = F'(u_k)/2 - beta (u_{k+1} + u_{k-1} - 2 u_k)
template <class FPrime>
void gateaux(std::span<const double> u, const Closure& c, const FPrime& fp, double beta,
             std::span<double> g)
{
    const auto n = static_cast<std::ptrdiff_t>(u.size());
    for (std::ptrdiff_t k = 0; k < n; ++k)
        g[k] = detail::gateaux_entry(u, k, c, fp, beta);
}

/// out_k = u_k - 2 tau g_k, and g is filled as in `gateaux`.
template <class FPrime>
void euler_step(std::span<const double> u, const Closure& c, const FPrime& fp, double beta,
                double tau, std::span<double> g, std::span<double> out)
{
    const auto n = static_cast<std::ptrdiff_t>(u.size());
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        g[k] = detail::gateaux_entry(u, k, c, fp, beta);
        out[k] = u[k] - 2.0 * tau * g[k];
    }
}

/// Per-site F(u_k) and per-bond (u_{k+1} - u_k)^2 for k = 0..N-1, where the
/// bond of the last site closes to `c.upper`.
template <class F>
void energy_terms(std::span<const double> u, const Closure& c, const F& f, std::span<double> f_terms,
                  std::span<double> bond_terms)
{
    const auto n = static_cast<std::ptrdiff_t>(u.size());
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        f_terms[k] = f(u[k]);
        const double d = detail::upper_of(u, k, c) - u[k];
        bond_terms[k] = d * d;
    }
}

/// Right-hand side of the DNLS on the interior entries [1, size-2] of `a`;
/// the first and last entries are boundary values and dadt there is zeroed.
template <class Psi1>
void dnls_rhs(std::span<const std::complex<double>> a, const Psi1& psi1, double beta,
              std::span<std::complex<double>> dadt)
{
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    dadt[0] = dadt[n - 1] = 0.0;
    for (std::ptrdiff_t j = 1; j < n - 1; ++j)
        dadt[j] = detail::dnls_entry(a, j, psi1, beta);
}

} // namespace serial

namespace omp {

template <class FPrime>
void gateaux(std::span<const double> u, const Closure& c, const FPrime& fp, double beta,
             std::span<double> g)
{
    const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t k = 0; k < n; ++k)
        g[k] = detail::gateaux_entry(u, k, c, fp, beta);
}

template <class FPrime>
void euler_step(std::span<const double> u, const Closure& c, const FPrime& fp, double beta,
                double tau, std::span<double> g, std::span<double> out)
{
    const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        g[k] = detail::gateaux_entry(u, k, c, fp, beta);
        out[k] = u[k] - 2.0 * tau * g[k];
    }
}

template <class F>
void energy_terms(std::span<const double> u, const Closure& c, const F& f, std::span<double> f_terms,
                  std::span<double> bond_terms)
{
    const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        f_terms[k] = f(u[k]);
        const double d = detail::upper_of(u, k, c) - u[k];
        bond_terms[k] = d * d;
    }
}

template <class Psi1>
void dnls_rhs(std::span<const std::complex<double>> a, const Psi1& psi1, double beta,
              std::span<std::complex<double>> dadt)
{
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    dadt[0] = dadt[n - 1] = 0.0;
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::ptrdiff_t j = 1; j < n - 1; ++j)
        dadt[j] = detail::dnls_entry(a, j, psi1, beta);
}

} // namespace omp

} // namespace dnls::kernels
