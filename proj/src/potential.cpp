#include "dnls/potential.hpp"

#include "dnls/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace dnls {

namespace {

constexpr double kNearOne = 0.25;

bool finite(double x) { return std::isfinite(x); }

void require_fn(const ScalarFn& fn, const char* what)
{
    if (!fn)
        throw Error(ErrorCode::InvalidPotential, std::string("missing function ") + what);
}

// Psi, Psi' and Psi'' finite on [0, x_inf] (Psi'' only away from 0, where
// power laws with 0 < d < 2 are allowed to blow up) and Psi', Psi'' consistent
// with central differences of Psi, Psi'.
void validate_psi(const PotentialSpec& spec, const NormalizeOptions& opt)
{
    require_fn(spec.psi, "psi");
    require_fn(spec.psi_prime, "psi_prime");
    require_fn(spec.psi_second, "psi_second");
    if (!(spec.u_inf > 0.0) || !finite(spec.u_inf))
        throw Error(ErrorCode::InvalidPotential, "u_inf must be positive and finite");

    const double x_inf = spec.u_inf * spec.u_inf;
    const int m = std::max(opt.consistency_samples, 3);
    for (int i = 0; i < m; ++i) {
        const double x = x_inf * i / (m - 1);
        if (!finite(spec.psi(x)) || !finite(spec.psi_prime(x)) || (i > 0 && !finite(spec.psi_second(x))))
            throw Error(ErrorCode::InvalidPotential, "non-finite potential value at x = " + std::to_string(x));
    }

    double scale1 = 0.0, scale2 = 0.0;
    for (int i = 1; i < m; ++i) {
        const double x = x_inf * i / (m - 1);
        scale1 = std::max(scale1, std::abs(spec.psi_prime(x)));
        scale2 = std::max(scale2, std::abs(spec.psi_second(x)));
    }
    scale1 = std::max(scale1, std::numeric_limits<double>::min());
    scale2 = std::max(scale2, std::numeric_limits<double>::min());

    const double h = 1e-5 * x_inf;
    for (int i = 1; i < m; ++i) {
        // stay strictly inside (0, x_inf] for the stencil
        const double x = x_inf * (i - 0.5) / (m - 1);
        const double d1 = (spec.psi(x + h) - spec.psi(x - h)) / (2 * h);
        const double d2 = (spec.psi_prime(x + h) - spec.psi_prime(x - h)) / (2 * h);
        if (std::abs(d1 - spec.psi_prime(x)) > opt.fd_rel_tol * scale1)
            throw Error(ErrorCode::InvalidPotential,
                        "psi_prime inconsistent with psi at x = " + std::to_string(x));
        if (std::abs(d2 - spec.psi_second(x)) > opt.fd_rel_tol * scale2)
            throw Error(ErrorCode::InvalidPotential,
                        "psi_second inconsistent with psi_prime at x = " + std::to_string(x));
    }
}

void validate_f(const PotentialSpec& spec)
{
    require_fn(spec.f, "f");
    require_fn(spec.f_prime, "f_prime");
    require_fn(spec.f_second, "f_second");
    constexpr double tol = 1e-12;
    for (double s : {-1.0, 1.0}) {
        if (!(std::abs(spec.f(s)) <= tol) || !(std::abs(spec.f_prime(s)) <= tol))
            throw Error(ErrorCode::InvalidPotential, "F and F' must vanish at eta = +-1");
    }
    for (int i = 0; i <= 64; ++i) {
        const double eta = i / 64.0;
        const double a = spec.f(eta), b = spec.f(-eta);
        if (!finite(a) || !finite(b) || !finite(spec.f_prime(eta)))
            throw Error(ErrorCode::InvalidPotential, "non-finite F at eta = " + std::to_string(eta));
        if (std::abs(a - b) > tol * std::max(1.0, std::abs(a)))
            throw Error(ErrorCode::InvalidPotential, "F must be even");
    }
}

double sampled_f_second_max(const ScalarFn& f_prime, double f2_at_1)
{
    constexpr int m = 2000;
    double prev = f_prime(-1.0);
    double best = std::abs(f2_at_1);
    for (int i = 1; i <= m; ++i) {
        const double eta = -1.0 + 2.0 * i / m;
        const double cur = f_prime(eta);
        best = std::max(best, std::abs(cur - prev) * m / 2.0);
        prev = cur;
    }
    return best;
}

double bisect_root(const ScalarFn& g, double a, double b)
{
    double ga = g(a);
    for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon(); ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (gm == 0.0)
            return mid;
        if ((gm < 0) == (ga < 0)) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

PotentialSpec spec_from_psi(ScalarFn psi, ScalarFn psi_prime, ScalarFn psi_second, double u_inf,
                            std::string name)
{
    PotentialSpec s;
    s.mode = PotentialMode::FromPsi;
    s.name = std::move(name);
    s.psi = std::move(psi);
    s.psi_prime = std::move(psi_prime);
    s.psi_second = std::move(psi_second);
    s.u_inf = u_inf;
    return s;
}

PotentialSpec spec_from_f(ScalarFn f, ScalarFn f_prime, ScalarFn f_second, std::string name)
{
    PotentialSpec s;
    s.mode = PotentialMode::FromF;
    s.name = std::move(name);
    s.f = std::move(f);
    s.f_prime = std::move(f_prime);
    s.f_second = std::move(f_second);
    s.u_inf = 1.0;
    return s;
}

bool is_builtin_potential_name(std::string_view name)
{
    return name == "cubic" || name == "doublewell" || name.starts_with("power:");
}

PotentialSpec builtin_potential(std::string_view name)
{
    if (name == "cubic") {
        return spec_from_psi([](double x) { return 0.5 * x * x + 0.5; },
                             [](double x) { return x; },
                             [](double) { return 1.0; }, 1.0, "cubic");
    }
    if (name == "doublewell") {
        // F = (eta^2 - 1)^2 (eta^2 - 1/4) / 2
        return spec_from_f(
            [](double e) {
                const double s = e * e;
                return 0.5 * (s - 1) * (s - 1) * (s - 0.25);
            },
            [](double e) {
                const double s = e * e;
                return 1.5 * e * (2 * s - 1) * (s - 1);
            },
            [](double e) {
                const double s = e * e;
                return 15 * s * s - 13.5 * s + 1.5;
            },
            "doublewell");
    }
    if (name.starts_with("power:")) {
        const std::string arg(name.substr(6));
        double d = 0;
        try {
            std::size_t used = 0;
            d = std::stod(arg, &used);
            if (used != arg.size())
                throw std::invalid_argument(arg);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "bad exponent in potential '" + std::string(name) + "'");
        }
        if (!(d > 0) || !finite(d))
            throw Error(ErrorCode::InvalidArgument, "power exponent must be positive");
        // psi(eta) = eta^(1+d) / (1+d), i.e. Psi'(x) = x^(d/2) / (1+d)
        const double p = 0.5 * d;
        return spec_from_psi([d, p](double x) { return std::pow(x, p + 1) / ((1 + d) * (p + 1)); },
                             [d, p](double x) { return std::pow(x, p) / (1 + d); },
                             [d, p](double x) { return p * std::pow(x, p - 1) / (1 + d); }, 1.0,
                             std::string(name));
    }
    throw Error(ErrorCode::InvalidArgument, "unknown potential '" + std::string(name) + "'");
}

PotentialSpec load_potential_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::MalformedInput, "cannot open potential table " + path.string());

    struct Row {
        double eta, f, fp;
    };
    std::vector<Row> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        Row r{};
        if (!(ss >> r.eta))
            continue;
        std::string rest;
        if (!(ss >> r.f >> r.fp) || (ss >> rest))
            throw Error(ErrorCode::MalformedInput,
                        path.string() + ":" + std::to_string(lineno) + ": expected 'eta F F''");
        rows.push_back(r);
    }
    // only |eta| matters; keep the non-negative half
    std::erase_if(rows, [](const Row& r) { return r.eta < 0; });
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.eta < b.eta; });
    if (rows.size() < 2 || rows.front().eta != 0.0 || rows.back().eta < 1.0)
        throw Error(ErrorCode::MalformedInput, "potential table must cover eta in [0, 1]");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].eta > rows[i - 1].eta))
            throw Error(ErrorCode::MalformedInput, "duplicate eta in potential table");

    auto table = std::make_shared<const std::vector<Row>>(std::move(rows));
    // segment index k with eta in [eta_k, eta_{k+1}]
    auto segment = [table](double a) {
        const auto& t = *table;
        auto it = std::upper_bound(t.begin(), t.end(), a, [](double v, const Row& r) { return v < r.eta; });
        std::size_t k = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
        return std::min(k, t.size() - 2);
    };
    auto lerp = [table, segment](double a, double Row::*field) {
        const auto& t = *table;
        const std::size_t k = segment(a);
        const double w = (a - t[k].eta) / (t[k + 1].eta - t[k].eta);
        return (1 - w) * t[k].*field + w * t[k + 1].*field;
    };
    auto slope = [table, segment](double a) {
        const auto& t = *table;
        // left derivative at a segment boundary so that F''(1) uses the last
        // segment that ends at 1
        std::size_t k = segment(a);
        if (k > 0 && a == t[k].eta)
            --k;
        return (t[k + 1].fp - t[k].fp) / (t[k + 1].eta - t[k].eta);
    };

    return spec_from_f([lerp](double e) { return lerp(std::abs(e), &Row::f); },
                       [lerp](double e) {
                           const double v = lerp(std::abs(e), &Row::fp);
                           return e < 0 ? -v : v;
                       },
                       [slope](double e) { return slope(std::abs(e)); }, "table:" + path.string());
}

PotentialSpec resolve_potential(std::string_view name_or_path)
{
    if (is_builtin_potential_name(name_or_path))
        return builtin_potential(name_or_path);
    if (name_or_path.starts_with("table:"))
        return load_potential_table(std::filesystem::path(name_or_path.substr(6)));
    const std::filesystem::path p(name_or_path);
    if (std::filesystem::exists(p))
        return load_potential_table(p);
    throw Error(ErrorCode::InvalidArgument, "unknown potential '" + std::string(name_or_path) + "'");
}

void NormalizedPotential::check_domain(double eta) const
{
    if (!(std::abs(eta) <= 1.0 + domain_slack_))
        throw Error(ErrorCode::OutOfDomain, "|eta| = " + std::to_string(std::abs(eta)) + " exceeds 1");
}

double NormalizedPotential::f(double eta) const
{
    check_domain(eta);
    return f_(eta);
}

double NormalizedPotential::f_prime(double eta) const
{
    check_domain(eta);
    return f_prime_(eta);
}

double NormalizedPotential::psi_nonlinearity(double eta) const
{
    check_domain(eta);
    return psi_hat_prime(eta * eta) * eta;
}

double NormalizedPotential::psi_hat(double x) const { return psi_hat_(x); }

double NormalizedPotential::psi_hat_prime(double x) const { return psi_hat_prime_(x); }

PotentialSpec NormalizedPotential::as_spec() const
{
    if (mode_ == PotentialMode::FromF) {
        const double f2 = f_second_at_1_;
        auto fp = f_prime_;
        // F'' is only needed at 1 downstream; a central difference elsewhere
        return spec_from_f(f_, f_prime_,
                           [fp, f2](double e) {
                               if (std::abs(e) == 1.0)
                                   return f2;
                               constexpr double h = 1e-6;
                               return (fp(e + h) - fp(e - h)) / (2 * h);
                           },
                           name_);
    }
    return spec_from_psi(psi_hat_, psi_hat_prime_, psi_hat_second_, 1.0, name_);
}

NormalizedPotential normalize(const PotentialSpec& spec, const NormalizeOptions& options)
{
    NormalizedPotential np;
    np.mode_ = spec.mode;
    np.name_ = spec.name;
    np.domain_slack_ = options.domain_slack;

    if (spec.mode == PotentialMode::FromF) {
        validate_f(spec);
        np.f_ = spec.f;
        np.f_prime_ = spec.f_prime;
        np.f_second_at_1_ = spec.f_second(1.0);
        auto f = spec.f;
        auto fp = spec.f_prime;
        auto f2 = spec.f_second;
        // Psi(x) = F(sqrt x) + x
        np.psi_hat_ = [f](double x) { return f(std::sqrt(x)) + x; };
        np.psi_hat_prime_ = [fp, f2](double x) {
            const double e = std::sqrt(x);
            if (e < 1e-8)
                return 0.5 * f2(0.0) + 1.0;
            return fp(e) / (2 * e) + 1.0;
        };
        np.psi_hat_second_ = [fp, f2](double x) {
            const double e = std::sqrt(x);
            if (e < 1e-4)
                return 0.0;
            return (f2(e) - fp(e) / e) / (4 * x);
        };
    } else {
        validate_psi(spec, options);
        const double x_inf = spec.u_inf * spec.u_inf;
        const double sigma = spec.psi_prime(x_inf);
        if (!(sigma > 0))
            throw Error(ErrorCode::NonPositiveFrequency,
                        "Psi'(u_inf^2) = " + std::to_string(sigma) + " must be positive");
        const double tau = 1.0 / sigma;
        const double delta = 1.0 - tau * spec.psi(x_inf) / x_inf;
        np.scale_eta_ = spec.u_inf;
        np.scale_tau_ = tau;
        np.shift_delta_ = delta;

        auto psi = spec.psi;
        auto psi1 = spec.psi_prime;
        auto psi2 = spec.psi_second;
        const double psi_at_inf = spec.psi(x_inf);
        // F(eta) = tau/x_inf [Psi(x_inf eta^2) - Psi(x_inf) - Psi'(x_inf) x_inf (eta^2 - 1)],
        // which vanishes exactly (with F') at eta = +-1.
        // Near |eta| = 1 the bracket cancels to second order; there it is the
        // Taylor remainder d^2 int_0^1 (1 - t) Psi''(x_inf + t d) dt, d = x_inf (eta^2 - 1).
        using GL = boost::math::quadrature::gauss<double, 10>;
        np.f_ = [=](double e) {
            const double s = e * e;
            const double d = x_inf * (e - 1) * (e + 1);
            if (std::abs(s - 1) < kNearOne)
                return tau / x_inf * d * d * GL::integrate([&](double t) { return (1 - t) * psi2(x_inf + t * d); }, 0.0, 1.0);
            return tau / x_inf * (psi(x_inf * s) - psi_at_inf - sigma * x_inf * (s - 1));
        };
        np.f_prime_ = [=](double e) {
            const double d = x_inf * (e - 1) * (e + 1);
            if (std::abs(e * e - 1) < kNearOne)
                return 2 * tau * e * d * GL::integrate([&](double t) { return psi2(x_inf + t * d); }, 0.0, 1.0);
            return 2 * tau * e * (psi1(x_inf * e * e) - sigma);
        };
        np.psi_hat_ = [=](double x) { return tau / x_inf * psi(x_inf * x) + delta; };
        np.psi_hat_prime_ = [=](double x) { return tau * psi1(x_inf * x); };
        np.psi_hat_second_ = [=](double x) { return tau * x_inf * psi2(x_inf * x); };
        np.f_second_at_1_ = 4 * tau * x_inf * spec.psi_second(x_inf);
    }
    np.f_second_max_ = sampled_f_second_max(np.f_prime_, np.f_second_at_1_);
    return np;
}

std::vector<double> negative_critical_points(const NormalizedPotential& np, int samples)
{
    if (samples < 3)
        throw Error(ErrorCode::InvalidArgument, "need at least 3 samples");
    const ScalarFn fp = [&np](double e) { return np.f_prime_unchecked(e); };
    std::vector<double> roots;
    auto push = [&](double r) {
        if (np.f_unchecked(r) < 0 && (roots.empty() || std::abs(roots.back() - r) > 1e-12))
            roots.push_back(r);
    };
    const int m = samples - 1;
    double prev = fp(0.0);
    for (int i = 0; i < m - 1; ++i) {
        const double a = static_cast<double>(i) / m;
        const double b = static_cast<double>(i + 1) / m;
        const double cur = fp(b);
        if (prev == 0.0)
            push(a);
        else if ((prev < 0 && cur > 0) || (prev > 0 && cur < 0))
            push(bisect_root(fp, a, b));
        prev = cur;
    }
    return roots;
}

HypothesisReport check_hypotheses(const NormalizedPotential& np, const HypothesisOptions& options)
{
    if (options.samples < 3)
        throw Error(ErrorCode::InvalidArgument, "need at least 3 samples");
    HypothesisReport rep;
    const int m = options.samples - 1;
    const double h = 2.0 / m;
    rep.min_f_interior = std::numeric_limits<double>::infinity();
    for (int i = 1; i < m; ++i) {
        const double eta = -1.0 + h * i;
        const double v = np.f_unchecked(eta);
        if (v < rep.min_f_interior) {
            rep.min_f_interior = v;
            rep.argmin_eta = eta;
        }
    }
    rep.f_positive_interior = rep.min_f_interior > options.positive_floor * h * h;
    rep.f_second_at_1_positive = np.f_second_at_1() > 0;
    rep.eta_star_roots = negative_critical_points(np, options.samples);
    return rep;
}

} // namespace dnls
