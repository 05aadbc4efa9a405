#pragma once

// Brute-force references built from the fully reflected lattice. They share
// no code with the library beyond the Setting enum.

#include "dnls/lattice.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double cubic_f(double u) { return 0.5 * (u * u - 1) * (u * u - 1); }
inline double cubic_fp(double u) { return 2 * u * (u * u - 1); }
inline double doublewell_f(double u) { return 0.5 * (u * u - 1) * (u * u - 1) * (u * u - 0.25); }

struct Full {
    std::vector<double> j;
    std::vector<double> u;
};

// Reflected profile with `pad` constant sites beyond each end.
inline Full reflect(dnls::Setting s, const std::vector<double>& half, int pad = 3)
{
    Full f;
    const double off = s == dnls::Setting::OnSite ? 1.0 : 0.5;
    const int n = static_cast<int>(half.size());
    for (int k = n - 1 + pad; k >= 0; --k) {
        f.j.push_back(-(k + off));
        f.u.push_back(k < n ? -half[k] : -1.0);
    }
    if (s == dnls::Setting::OnSite) {
        f.j.push_back(0.0);
        f.u.push_back(0.0);
    }
    for (int k = 0; k < n + pad; ++k) {
        f.j.push_back(k + off);
        f.u.push_back(k < n ? half[k] : 1.0);
    }
    return f;
}

inline double energy(dnls::Setting s, const std::vector<double>& half, double beta,
                     const std::function<double(double)>& f = cubic_f)
{
    const Full full = reflect(s, half);
    long double e = 0;
    for (double v : full.u)
        e += f(v);
    for (std::size_t i = 1; i < full.u.size(); ++i)
        e += beta * (full.u[i] - full.u[i - 1]) * (full.u[i] - full.u[i - 1]);
    return static_cast<double>(e);
}

// G_j = F'(u_j)/2 - beta (Delta u)_j on every non-boundary site of the reflected array.
inline std::vector<double> full_gateaux(const Full& full, double beta,
                                        const std::function<double(double)>& fp = cubic_fp)
{
    std::vector<double> g(full.u.size(), 0.0);
    for (std::size_t i = 1; i + 1 < full.u.size(); ++i)
        g[i] = 0.5 * fp(full.u[i]) - beta * (full.u[i + 1] + full.u[i - 1] - 2 * full.u[i]);
    return g;
}

} // namespace oracle
