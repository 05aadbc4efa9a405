#pragma once

#include "dnls/lattice.hpp"
#include "dnls/potential.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace dnls {

/// arccosh(1 + d) for d >= 0 without the cancellation of acosh near 1.
double acosh1p(double d);

/// Inclusive range of stored sites, counted from 1: site m sits at lattice
/// position j = m on-site and j = m - 1/2 inter-site.
struct SiteRange {
    std::size_t first = 1;
    std::size_t last = 1;
    std::size_t size() const noexcept { return last >= first ? last - first + 1 : 0; }
};

struct TailFit {
    double lambda_fit = 0.0;
    double r2 = 0.0;
    SiteRange window;
};

/// Exponential tail rate of standing waves: lambda solves
/// 4 beta (cosh lambda - 1) = F''(1), and kappa_inf = exp(-lambda) is the
/// limit of the ratios w_j / w_{j-1} with w_j = 1 - u_j.
struct DecayEstimate {
    double lambda_exact = 0.0;
    double kappa_inf = 0.0;
    double delta = 0.0;
    std::optional<TailFit> fit;
};

DecayEstimate decay_rate(double beta, double f_second_at_1);

/// Tail sites whose ratios are trusted: from ceil(0.3 N) to the last site with
/// w_j > 1e-12. Throws DegenerateTail when that range is empty.
SiteRange default_fit_window(const Profile& p);

/// kappa_m = w_m / w_{m-1} for the sites m of `window` (first >= 2). Without a
/// window the whole stored range is used. Throws DegenerateTail if any w in
/// use is below 100 eps.
std::vector<double> kappa_sequence(const Profile& p, std::optional<SiteRange> window = std::nullopt);

/// Least-squares slope of ln w_j against j over the window.
TailFit fit_tail(const Profile& p, SiteRange window);

/// decay_rate plus fit_tail over the default window.
DecayEstimate analyze_decay(const Profile& p, const NormalizedPotential& np, double beta);

struct PlateauCandidate {
    double eta_star = 0.0;
    double f_value = 0.0;
    std::size_t run_length = 0;
    SiteRange run;
    double height_error = 0.0;
};

struct PlateauReport {
    std::vector<PlateauCandidate> candidates;
    /// Index into candidates of the longest run, if any run reaches min_run.
    std::optional<std::size_t> best;
    double tolerance = 1e-3;
    std::size_t min_run = 3;

    bool found() const noexcept { return best.has_value(); }
};

struct PlateauOptions {
    double tolerance = 1e-3;
    std::size_t min_run = 3;
    int samples = 10001;
};

/// Runs of the profile locked to a height eta* where F'(eta*) = 0 and
/// F(eta*) < 0. Throws NoPlateauCandidates when F has no such point.
PlateauReport plateau_diagnostics(const Profile& p, const NormalizedPotential& np,
                                  const PlateauOptions& options = {});

/// Energy of u_j = eta* sgn j for |j| <= K and sgn j beyond; linear in K with
/// slope 2 F(eta*).
EnergyBreakdown plateau_family_energy(Setting setting, const NormalizedPotential& np, double beta,
                                      double eta_star, std::size_t k);

} // namespace dnls
