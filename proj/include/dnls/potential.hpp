#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace dnls {

using ScalarFn = std::function<double(double)>;

enum class PotentialMode { FromPsi, FromF };

/// User-facing description of an oscillator potential.
///
/// In FromPsi mode Psi, Psi' and Psi'' are functions of the intensity
/// x = |A|^2 >= 0 and u_inf is the asymptotic amplitude of the wave. In FromF
/// mode the reduced energy density F(eta) and its first two derivatives are
/// supplied directly on [-1, 1], already normalized (u_inf is ignored).
struct PotentialSpec {
    PotentialMode mode = PotentialMode::FromPsi;
    std::string name;

    ScalarFn psi;
    ScalarFn psi_prime;
    ScalarFn psi_second;
    double u_inf = 1.0;

    ScalarFn f;
    ScalarFn f_prime;
    ScalarFn f_second;
};

PotentialSpec spec_from_psi(ScalarFn psi, ScalarFn psi_prime, ScalarFn psi_second,
                            double u_inf, std::string name = "custom");
PotentialSpec spec_from_f(ScalarFn f, ScalarFn f_prime, ScalarFn f_second,
                          std::string name = "custom-F");

/// Built-in potentials: "cubic", "power:<d>" and "doublewell".
PotentialSpec builtin_potential(std::string_view name);
bool is_builtin_potential_name(std::string_view name);

/// Plain-text table with rows "eta F F'" covering at least [0, 1]. F is
/// extended evenly and F' oddly to negative eta; values between rows are
/// linearly interpolated.
PotentialSpec load_potential_table(const std::filesystem::path& path);

/// Resolves a CLI potential argument: a built-in name, "table:<path>", or a
/// path to an existing table file.
PotentialSpec resolve_potential(std::string_view name_or_path);

struct NormalizeOptions {
    double domain_slack = 1e-6;
    int consistency_samples = 33;
    double fd_rel_tol = 1e-5;
};

/// Potential after rescaling to sigma = Psi(1) = Psi'(1) = 1 and u_inf = 1.
///
/// F(eta) = Psi(eta^2) - eta^2 in the rescaled variables. The checked
/// accessors reject |eta| > 1 + domain_slack; the *_unchecked variants are
/// for hot loops whose inputs are already known to lie in [-1, 1].
class NormalizedPotential {
public:
    double f(double eta) const;
    double f_prime(double eta) const;
    double f_second_at_1() const noexcept { return f_second_at_1_; }
    double psi_nonlinearity(double eta) const;

    double f_unchecked(double eta) const { return f_(eta); }
    double f_prime_unchecked(double eta) const { return f_prime_(eta); }

    // Rescaled Psi as a function of the intensity x >= 0.
    double psi_hat(double x) const;
    double psi_hat_prime(double x) const;

    /// Sampled sup |F''| over [-1, 1]; feeds the explicit-Euler step bound.
    double f_second_max() const noexcept { return f_second_max_; }

    double scale_eta() const noexcept { return scale_eta_; }
    double scale_tau() const noexcept { return scale_tau_; }
    double shift_delta() const noexcept { return shift_delta_; }
    double sigma() const noexcept { return 1.0; }
    /// Multiplier taking the caller's coupling to the rescaled one.
    double beta_factor() const noexcept { return scale_tau_; }
    double domain_slack() const noexcept { return domain_slack_; }
    PotentialMode mode() const noexcept { return mode_; }
    const std::string& name() const noexcept { return name_; }

    /// The rescaled potential as a FromPsi (or FromF) spec with u_inf = 1.
    PotentialSpec as_spec() const;

private:
    friend NormalizedPotential normalize(const PotentialSpec&, const NormalizeOptions&);
    NormalizedPotential() = default;

    void check_domain(double eta) const;

    PotentialMode mode_ = PotentialMode::FromPsi;
    std::string name_;
    ScalarFn f_;
    ScalarFn f_prime_;
    ScalarFn psi_hat_;
    ScalarFn psi_hat_prime_;
    ScalarFn psi_hat_second_;
    double f_second_at_1_ = 0.0;
    double f_second_max_ = 0.0;
    double scale_eta_ = 1.0;
    double scale_tau_ = 1.0;
    double shift_delta_ = 0.0;
    double domain_slack_ = 1e-6;
};

NormalizedPotential normalize(const PotentialSpec& spec, const NormalizeOptions& options = {});

inline double eval_F(const NormalizedPotential& np, double eta) { return np.f(eta); }
inline double eval_F_prime(const NormalizedPotential& np, double eta) { return np.f_prime(eta); }
inline double eval_F_second_at_1(const NormalizedPotential& np) { return np.f_second_at_1(); }
inline double psi_nonlinearity(const NormalizedPotential& np, double eta)
{
    return np.psi_nonlinearity(eta);
}

struct HypothesisReport {
    bool f_positive_interior = false;
    bool f_second_at_1_positive = false;
    double min_f_interior = 0.0;
    double argmin_eta = 0.0;
    // Non-negative interior critical points of F with F < 0 (mirror is -eta).
    std::vector<double> eta_star_roots;

    bool holds() const noexcept { return f_positive_interior && f_second_at_1_positive; }
};

struct HypothesisOptions {
    int samples = 10001;
    double positive_floor = 1e-6;
};

HypothesisReport check_hypotheses(const NormalizedPotential& np, const HypothesisOptions& options = {});

/// Interior zeros of F' on [0, 1) with F < 0, located by bisection between
/// sign changes of F' on a uniform grid of `samples` points.
std::vector<double> negative_critical_points(const NormalizedPotential& np, int samples = 10001);

} // namespace dnls
