#include "dkp/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "dkp/errors.hpp"

namespace dkp::oracle {

namespace odeint = boost::numeric::odeint;

char const* to_string(Variant v)
{
    return v == Variant::approx ? "approx" : "exact";
}

double rhs(Variant variant, NaturalParams const& np, unsigned J, double E, double r)
{
    if (!(r > 0.0)) {
        throw DomainError("oracle coefficient needs r > 0");
    }
    double const a = np.a;
    double const g = np.g;
    double const jj = static_cast<double>(J) * (J + 1.0);
    double const eps2 = (np.m - E) * (np.m + E);
    if (variant == Variant::exact) {
        double const e1 = std::exp(-a * r);
        return jj / (r * r) - g * g * e1 * e1 / (r * r) - 2.0 * E * g * e1 / r + eps2;
    }
    // q = exp(-2ar) / (1 - exp(-2ar))
    double const q = 1.0 / std::expm1(2.0 * a * r);
    return 4.0 * a * a * (jj * q * (1.0 + q) - g * g * q * q) - 4.0 * a * E * g * q + eps2;
}

namespace {

using State = std::array<double, 2>;

constexpr double kRenormalizeAbove = 1e100;

struct Segment
{
    State y;
    unsigned nodes{0};
    bool ok{true};
};

/// Integrates y' = f(t, y) on [0, length] with relative error control only,
/// counting sign changes of y[0] and rescaling on growth.
template <class System>
Segment integrate(System const& system, State y, double length, double dt, double rel_error)
{
    auto stepper = odeint::make_controlled(0.0, rel_error, odeint::runge_kutta_dopri5<State>());
    Segment out;
    double t = 0.0;
    constexpr unsigned kMaxSteps = 200000;
    unsigned steps = 0;
    while (t < length) {
        if (++steps > kMaxSteps || dt < 1e-15 * std::max(length, 1e-300)) {
            out.ok = false;
            break;
        }
        bool const last = dt >= length - t;
        double const h = last ? length - t : dt;
        double const before = y[0];
        double t_try = t;
        double h_try = h;
        if (stepper.try_step(system, y, t_try, h_try) == odeint::success) {
            if ((before < 0.0 && y[0] > 0.0) || (before > 0.0 && y[0] < 0.0)) {
                ++out.nodes;
            }
            t = last ? length : t_try;
            if (!last) {
                dt = h_try;
            }
            double const mag = std::abs(y[0]) + std::abs(y[1]);
            if (mag > kRenormalizeAbove) {
                y[0] /= mag;
                y[1] /= mag;
            }
            if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
                out.ok = false;
                break;
            }
        } else {
            dt = h_try;
        }
    }
    out.y = y;
    return out;
}

} // namespace

ShootResult shoot(NaturalParams const& np, unsigned J, double E, OracleConfig const& cfg)
{
    double const eps2 = (np.m - E) * (np.m + E);
    if (!(eps2 > 0.0)) {
        throw DomainError("shooting needs |E| < m");
    }
    double const eps = std::sqrt(eps2);
    double const lambda = 0.5 + effective_index(np, J);

    double const r_min = cfg.r_min > 0.0 ? cfg.r_min : 1e-6 / np.a;
    double const r_max = cfg.r_max > 0.0 ? cfg.r_max : 30.0 / eps;
    double const r_match = cfg.match_point > 0.0 ? cfg.match_point : 1.0 / eps;
    if (!(r_min < r_match && r_match < r_max)) {
        throw DomainError("oracle needs r_min < match_point < r_max");
    }

    auto W = [&](double r) { return rhs(cfg.variant, np, J, E, r); };

    // Frobenius start F ~ r^lambda (1 + c r), lambda (lambda - 1) = J (J + 1) - g^2.
    // Both variants share the 1/r coefficient w1 = 2 a g^2 - 2 E g of W.
    double const w1 = 2.0 * np.a * np.g * np.g - 2.0 * E * np.g;
    double const c = w1 / (2.0 * lambda);
    double const scale = cfg.initial_scale;
    State out0{scale * std::pow(r_min, lambda) * (1.0 + c * r_min),
               scale * std::pow(r_min, lambda - 1.0) * (lambda + (lambda + 1.0) * c * r_min)};

    auto outward = [&](State const& y, State& dy, double t) {
        double const r = r_min + t;
        dy[0] = y[1];
        dy[1] = W(r) * y[0];
    };
    Segment const o = integrate(outward, out0, r_match - r_min, 1e-2 * r_min, cfg.rel_error);

    State in0{scale * std::exp(-eps * r_max), -eps * scale * std::exp(-eps * r_max)};
    // t runs from r_max inward: y = (F, F') with d/dt = -d/dr
    auto inward = [&](State const& y, State& dy, double t) {
        double const r = r_max - t;
        dy[0] = -y[1];
        dy[1] = -W(r) * y[0];
    };
    Segment const i = integrate(inward, in0, r_max - r_match, 1e-3 / eps, cfg.rel_error);

    ShootResult res;
    res.node_count = o.nodes + i.nodes;
    res.mismatch = o.y[1] / o.y[0] - i.y[1] / i.y[0];
    res.converged = o.ok && i.ok && !std::isnan(res.mismatch);
    return res;
}

std::vector<double> find_levels(NaturalParams const& np, unsigned J, unsigned n_max, OracleConfig const& cfg)
{
    std::vector<double> levels;
    if (np.g <= 0.0) {
        return levels;
    }
    effective_index(np, J);

    double const m = np.m;
    std::size_t const points = std::max<std::size_t>(cfg.scan_points, 3);
    double const h = 2.0 * m / static_cast<double>(points);

    OracleConfig scan_cfg = cfg;
    scan_cfg.rel_error = cfg.scan_rel_error;
    auto index = [&](double E, OracleConfig const& c) { return shoot(np, J, E, c).level_index(); };

    std::vector<double> energies;
    energies.reserve(points + cfg.threshold_points);
    for (std::size_t k = 1; k < points; ++k) {
        energies.push_back(-m + h * static_cast<double>(k));
    }
    double step = h;
    for (unsigned k = 0; k < cfg.threshold_points; ++k) {
        step *= 0.25;
        if (m - step <= energies.back()) {
            break;
        }
        energies.push_back(m - step);
    }
    std::vector<unsigned> counts;
    counts.reserve(energies.size());
    for (double E : energies) {
        counts.push_back(index(E, scan_cfg));
    }

    double const tol = cfg.energy_tol * m;
    for (unsigned n = 0; n <= n_max; ++n) {
        auto const it = std::find_if(counts.begin(), counts.end(), [n](unsigned c) { return c > n; });
        if (it == counts.end() || it == counts.begin()) {
            break;
        }
        std::size_t const k = static_cast<std::size_t>(it - counts.begin());
        double lo = energies[k - 1];
        double hi = energies[k];
        for (unsigned b = 0; b < cfg.max_bisections && hi - lo > tol; ++b) {
            double const mid = 0.5 * (lo + hi);
            if (index(mid, cfg) > n) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        levels.push_back(0.5 * (lo + hi));
    }
    return levels;
}

double find_level(NaturalParams const& np, QuantumNumbers qn, OracleConfig const& cfg)
{
    std::vector<double> const levels = find_levels(np, qn.J, qn.n, cfg);
    if (levels.size() <= qn.n) {
        throw NoBoundState("oracle found no level n = " + std::to_string(qn.n) + " at J = " + std::to_string(qn.J) +
                           " (" + to_string(cfg.variant) + " variant)");
    }
    return levels[qn.n];
}

double ode_residual(Variant variant, RadialEvaluator const& F, NaturalParams const& np, unsigned J, double E,
                    std::span<double const> grid)
{
    double defect = 0.0;
    double scale = 0.0;
    for (double r : grid) {
        RadialSample const f = F(r);
        defect = std::max(defect, std::abs(f.second - rhs(variant, np, J, E, r) * f.value));
        scale = std::max(scale, std::abs(f.second));
    }
    return scale > 0.0 ? defect / scale : 0.0;
}

double system_residual(SpinorSet const& spinors, NaturalParams const& np, unsigned J, double E,
                       std::span<double const> grid)
{
    double const alpha = spinors.alpha_J();
    double const sigma = spinors.sigma_J();
    double const m = np.m;
    double const jd = J;

    // five-point central difference
    auto derivative = [&](double r, auto component) {
        double const h = 1e-3 * r;
        double const f2 = component(spinors.sample_natural(r + 2.0 * h));
        double const f1 = component(spinors.sample_natural(r + h));
        double const b1 = component(spinors.sample_natural(r - h));
        double const b2 = component(spinors.sample_natural(r - 2.0 * h));
        return (-f2 + 8.0 * f1 - 8.0 * b1 + b2) / (12.0 * h);
    };
    auto h_plus = [](SpinorSample const& s) { return s.H_plus; };
    auto h_minus = [](SpinorSample const& s) { return s.H_minus; };

    double defect = 0.0;
    double scale = 0.0;
    for (double r : grid) {
        SpinorSample const s = spinors.sample_natural(r);
        double const u_true = -np.g * std::exp(-np.a * r) / r;
        double const dhp = derivative(r, h_plus);
        double const dhm = derivative(r, h_minus);
        // The H_{-1} term enters with the sign that makes the system reduce to
        // the radial Klein-Gordon equation for every J.
        double const d = -alpha * (dhp + (jd + 1.0) * s.H_plus / r) - sigma * (dhm - jd * s.H_minus / r) - m * s.F +
                         (E - u_true) * s.G;
        defect = std::max(defect, std::abs(d));
        scale = std::max(scale, std::abs(spinors.radial()(r).second) / m);
    }
    return scale > 0.0 ? defect / scale : 0.0;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g;
    if (n == 0) {
        return g;
    }
    if (n == 1) {
        return {lo};
    }
    double const ratio = std::log(hi / lo) / static_cast<double>(n - 1);
    g.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        g.push_back(k + 1 == n ? hi : lo * std::exp(ratio * static_cast<double>(k)));
    }
    return g;
}

} // namespace dkp::oracle
