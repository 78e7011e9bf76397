#include "dkp/dkp_yukawa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dkp/errors.hpp"
#include "dkp/specfun.hpp"

namespace dkp {

void PhysicalParams::validate() const
{
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(mass_mev) || mass_mev <= 0.0) {
        throw DomainError("mass must be positive, got " + std::to_string(mass_mev));
    }
    if (!finite(screening_inv_fm) || screening_inv_fm <= 0.0) {
        throw DomainError("screening must be positive, got " + std::to_string(screening_inv_fm));
    }
    if (!finite(hbar_c) || hbar_c <= 0.0) {
        throw DomainError("hbar_c must be positive, got " + std::to_string(hbar_c));
    }
    if (!finite(coupling_mev_fm) || coupling_mev_fm < 0.0) {
        throw DomainError("coupling must be non-negative, got " + std::to_string(coupling_mev_fm));
    }
}

NaturalParams natural_units(PhysicalParams const& p)
{
    p.validate();
    return {p.mass_mev, p.screening_inv_fm * p.hbar_c, p.coupling_mev_fm / p.hbar_c};
}

PhysicalParams physical_units(NaturalParams const& np, double hbar_c)
{
    return {np.m, np.g * hbar_c, np.a / hbar_c, hbar_c};
}

char const* branch_label(Branch b)
{
    return b == kPaperBranch ? "paper" : "physical";
}

double effective_index(NaturalParams const& np, unsigned J)
{
    double const j = J + 0.5;
    double const d2 = j * j - np.g * np.g;
    if (d2 < 0.0) {
        throw SupercriticalCoupling("g = " + std::to_string(np.g) + " exceeds J + 1/2 = " + std::to_string(j));
    }
    return std::sqrt(d2);
}

nu::NUProblem nu_problem(NaturalParams const& np, unsigned J, double E)
{
    double const eps2 = (np.m - E) * (np.m + E);
    double const x2 = eps2 / (4.0 * np.a * np.a);
    double const eg = E * np.g / np.a;
    double const jj = static_cast<double>(J) * (J + 1.0);
    nu::NUProblem p;
    p.c1 = 1.0;
    p.c2 = 1.0;
    p.c3 = 1.0;
    p.p2 = -np.g * np.g + eg + x2;
    p.p1 = -jj + eg + 2.0 * x2;
    p.p0 = x2;
    return p;
}

namespace {

// Both branches reduce to the same quadratic
//     (1 + B^2) E^2 - 2 A B E + A^2 - m^2 = 0,   A = a (nu^2 + g^2) / nu,  B = g / nu,
// and differ in the sign of eps they accept: eps = A - B E (paper) or
// eps = B E - A (physical).
EnergyLevel closed_form_level(NaturalParams const& np, QuantumNumbers qn, Branch branch)
{
    if (np.m <= 0.0 || np.a <= 0.0 || np.g < 0.0) {
        throw DomainError("natural parameters need m > 0, a > 0, g >= 0");
    }
    double const delta = effective_index(np, qn.J);
    double const nu = qn.n + 0.5 + delta;
    double const A = np.a * (nu * nu + np.g * np.g) / nu;
    double const B = np.g / nu;
    double const sign = branch == kPaperBranch ? 1.0 : -1.0;
    double const m = np.m;

    double const disc = m * m * (1.0 + B * B) - A * A;
    if (disc < 0.0) {
        throw NoBoundState("no real energy for n = " + std::to_string(qn.n) + ", J = " + std::to_string(qn.J) +
                           " on the " + branch_label(branch) + " branch");
    }
    double const root = std::sqrt(disc);
    double const denom = 1.0 + B * B;
    double const candidates[2] = {(A * B - root) / denom, (A * B + root) / denom};

    int accepted = 0;
    EnergyLevel level;
    for (double E : candidates) {
        double const eps_linear = sign * (A - B * E);
        if (!(eps_linear > 0.0) || !(std::abs(E) < m)) {
            continue;
        }
        double const eps = std::sqrt((m - E) * (m + E));
        nu::NUConstants const k = nu::derive_constants(nu_problem(np, qn.J, E), branch);
        double const residual = nu::quantization_residual(k, qn.n);
        double const scale = std::max({1.0, std::abs(k.c7), k.c8});
        if (std::abs(eps - eps_linear) > 1e-9 * std::max(eps, 1.0) || std::abs(residual) > 1e-9 * scale) {
            continue;
        }
        ++accepted;
        level = EnergyLevel{qn, branch, E, eps, nu, delta, residual};
    }
    if (accepted != 1) {
        throw NoBoundState(std::string(accepted == 0 ? "no" : "ambiguous") + " bound state for n = " +
                           std::to_string(qn.n) + ", J = " + std::to_string(qn.J) + " on the " +
                           branch_label(branch) + " branch",
                           accepted == 0 ? NoBoundState::Reason::none : NoBoundState::Reason::ambiguous);
    }
    return level;
}

} // namespace

EnergyLevel energy_paper(NaturalParams const& np, QuantumNumbers qn)
{
    return closed_form_level(np, qn, kPaperBranch);
}

EnergyLevel energy_physical(NaturalParams const& np, QuantumNumbers qn)
{
    return closed_form_level(np, qn, kPhysicalBranch);
}

EnergyLevel energy(NaturalParams const& np, QuantumNumbers qn, Branch branch)
{
    return closed_form_level(np, qn, branch);
}

unsigned level_count(NaturalParams const& np, unsigned J, Branch branch)
{
    constexpr unsigned kMaxLevels = 1000000;
    unsigned n = 0;
    try {
        while (n < kMaxLevels) {
            closed_form_level(np, {n, J}, branch);
            ++n;
        }
    } catch (NoBoundState const&) {
    } catch (SupercriticalCoupling const&) {
    }
    return n;
}

double potential_yukawa(NaturalParams const& np, double r)
{
    if (!(r > 0.0)) {
        throw DomainError("potential needs r > 0");
    }
    return -np.g * std::exp(-np.a * r) / r;
}

double potential_approx(NaturalParams const& np, double r)
{
    if (!(r > 0.0)) {
        throw DomainError("potential needs r > 0");
    }
    return -2.0 * np.a * np.g / std::expm1(2.0 * np.a * r);
}

RadialFunction::RadialFunction(double a, double s_exponent, double one_minus_s_exponent, unsigned n, double alpha,
                               double beta, double norm)
  : a_(a)
  , s_exponent_(s_exponent)
  , one_minus_s_exponent_(one_minus_s_exponent)
  , n_(n)
  , alpha_(alpha)
  , beta_(beta)
  , norm_(norm)
{
}

RadialSample RadialFunction::operator()(double r) const
{
    if (!(r > 0.0)) {
        throw DomainError("radial function needs r > 0");
    }
    double const a = a_;
    double const two_ar = 2.0 * a * r;
    double const s = std::exp(-two_ar);
    // q = s / (1 - s) without cancellation for small ar
    double const q = 1.0 / std::expm1(two_ar);
    double const log_one_minus_s = std::log(-std::expm1(-two_ar));

    double const prefactor = norm_ * std::exp(-two_ar * s_exponent_ + one_minus_s_exponent_ * log_one_minus_s);

    // d ln(prefactor)/dr and its derivative
    double const L1 = -2.0 * a * s_exponent_ + 2.0 * a * one_minus_s_exponent_ * q;
    double const dL1 = -4.0 * a * a * one_minus_s_exponent_ * q * (1.0 + q);

    double const x = 1.0 - 2.0 * s;
    double const dx = 4.0 * a * s;
    double const d2x = -8.0 * a * a * s;
    double const P = specfun::jacobi(n_, alpha_, beta_, x);
    double const dP = specfun::jacobi_derivative(n_, alpha_, beta_, x, 1);
    double const d2P = specfun::jacobi_derivative(n_, alpha_, beta_, x, 2);
    double const y1 = dP * dx;
    double const y2 = d2P * dx * dx + dP * d2x;

    RadialSample out;
    out.value = prefactor * P;
    out.first = prefactor * (L1 * P + y1);
    out.second = prefactor * ((L1 * L1 + dL1) * P + 2.0 * L1 * y1 + y2);
    return out;
}

RadialFunction RadialFunction::scaled(double factor) const
{
    RadialFunction out = *this;
    out.norm_ *= factor;
    return out;
}

RadialFunction radial_function(EnergyLevel const& level, NaturalParams const& np, RadialOptions const& opts)
{
    nu::NUConstants const k = nu::derive_constants(nu_problem(np, level.qn.J, level.energy), level.branch);
    if (opts.strict && !k.valid()) {
        throw ConstraintViolation(std::string(branch_label(level.branch)) +
                                  " branch violates the NU admissibility constraints (c10 = " +
                                  std::to_string(k.c10) + ", c12 = " + std::to_string(k.c12) + ")");
    }
    if (!k.roots_real) {
        throw InvalidConstants("radial function needs real NU square roots");
    }
    // Same values as c10..c13, taken from eps and delta: c9 is a difference of
    // terms of size eps^2/4a^2 and loses most of its digits.
    double const sign = level.branch == nu::Branch::one ? 1.0 : -1.0;
    double const c10 = sign * level.epsilon / np.a;
    double const c11 = 2.0 * level.delta;
    double const c12 = 0.5 * c10;
    double const c13 = 0.5 + level.delta;
    if (level.branch == kPaperBranch && opts.paper_form == PaperForm::printed_closed_form) {
        // exp(-eps r) = s^{+eps/2a}, the opposite sign of the NU exponent c12 = -eps/2a
        RadialFunction f(np.a, -c12, c13, level.qn.n, c10, c11);
        f.mark_inconsistent();
        return f;
    }
    return RadialFunction(np.a, c12, c13, level.qn.n, c10, c11);
}

double normalize(RadialEvaluator const& f, double decay_rate)
{
    if (!(decay_rate > 0.0)) {
        throw DivergentNorm("normalization needs a positive decay rate");
    }
    double const r_max = 27.7 / decay_rate;
    double const tail = std::abs(f(r_max).value);
    double const mid = std::abs(f(0.5 * r_max).value);
    if (!std::isfinite(tail) || (tail > 0.0 && tail >= mid)) {
        throw DivergentNorm("radial function does not decay (|F(r_max)| = " + std::to_string(tail) + ")");
    }
    auto density = [&](double r) {
        if (r <= 0.0) {
            return 0.0;
        }
        double const v = f(r).value;
        return v * v;
    };
    double error = 0.0;
    double const integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, 0.0, r_max, 20, 1e-12, &error);
    if (!std::isfinite(integral) || !(integral > 0.0)) {
        throw DivergentNorm("square integral is not finite and positive");
    }
    return 1.0 / std::sqrt(integral);
}

RadialFunction radial_F(EnergyLevel const& level, NaturalParams const& np, RadialOptions const& opts)
{
    RadialFunction f = radial_function(level, np, opts);
    double const N = normalize([&](double r) { return f(r); }, level.epsilon);
    return f.scaled(N);
}

SpinorSet::SpinorSet(EnergyLevel level, NaturalParams np, RadialFunction F, double hbar_c)
  : level_(level)
  , np_(np)
  , F_(std::move(F))
  , hbar_c_(hbar_c)
{
    double const J = level_.qn.J;
    alpha_J_ = std::sqrt((J + 1.0) / (2.0 * J + 1.0));
    sigma_J_ = std::sqrt(J / (2.0 * J + 1.0));
}

SpinorSample SpinorSet::sample_natural(double r) const
{
    RadialSample const f = F_(r);
    double const m = np_.m;
    double const J = level_.qn.J;
    SpinorSample out;
    out.F = f.value;
    out.G = (level_.energy - potential_approx(np_, r)) * f.value / m;
    out.H_plus = -(alpha_J_ / m) * (f.first - (J + 1.0) * f.value / r);
    out.H_minus = -(sigma_J_ / m) * (f.first + J * f.value / r);
    return out;
}

SpinorSample SpinorSet::sample(double r_fm) const
{
    SpinorSample s = sample_natural(r_fm / hbar_c_);
    double const k = 1.0 / std::sqrt(hbar_c_);
    s.F *= k;
    s.G *= k;
    s.H_plus *= k;
    s.H_minus *= k;
    return s;
}

SpinorSet spinors(EnergyLevel const& level, NaturalParams const& np, RadialOptions const& opts, double hbar_c)
{
    return SpinorSet(level, np, radial_F(level, np, opts), hbar_c);
}

} // namespace dkp
