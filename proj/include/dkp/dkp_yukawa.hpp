#pragma once

/** \file dkp_yukawa.hpp
 *
 *  \brief Spin-0 DKP bound states in a vector Yukawa potential.
 *
 *  The radial DKP system with a pure time-like vector potential reduces to a
 *  Klein-Gordon equation for the large component F(r). Replacing 1/r by
 *  a/sinh(ar) turns the Yukawa problem into a Hulthen-type problem that the
 *  parametric NU method solves in closed form (variable s = exp(-2ar),
 *  c1 = c2 = c3 = 1).
 *
 *  The two NU branches give two distinct spectra:
 *
 *  - paper branch (nu::Branch::two): eps = a nu + g (a g - E) / nu, negative
 *    energies, s-exponent -eps/2a (not normalizable);
 *  - physical branch (nu::Branch::one): eps = -a nu + g (E - a g) / nu,
 *    positive energies, s-exponent +eps/2a (decays as exp(-eps r)).
 *
 *  Everything below works in natural units (MeV, MeV^-1) unless a name says
 *  otherwise.
 */

#include <functional>
#include <vector>

#include "dkp/nu_engine.hpp"

namespace dkp {

inline constexpr double kHbarC = 197.3269804; // MeV fm

/// User-facing parameters.
struct PhysicalParams
{
    double mass_mev{938.0};
    /// Strength U0 of -U0 exp(-a r) / r, MeV fm.
    double coupling_mev_fm{67.54};
    double screening_inv_fm{0.005};
    double hbar_c{kHbarC};

    /// Throws DomainError on a non-physical combination.
    void validate() const;
};

/// m and a in MeV, g dimensionless.
struct NaturalParams
{
    double m{0.0};
    double a{0.0};
    double g{0.0};
};

NaturalParams natural_units(PhysicalParams const& p);
PhysicalParams physical_units(NaturalParams const& np, double hbar_c = kHbarC);

struct QuantumNumbers
{
    unsigned n{0};
    unsigned J{0};
};

using nu::Branch;
inline constexpr Branch kPhysicalBranch = Branch::one;
inline constexpr Branch kPaperBranch = Branch::two;

/// "physical" or "paper".
char const* branch_label(Branch b);

struct EnergyLevel
{
    QuantumNumbers qn;
    Branch branch{kPhysicalBranch};
    double energy{0.0};
    /// sqrt(m^2 - E^2)
    double epsilon{0.0};
    /// n + 1/2 + delta
    double nu{0.0};
    /// sqrt((J + 1/2)^2 - g^2)
    double delta{0.0};
    /// Branch quantization residual at `energy`.
    double residual{0.0};
};

/// delta = sqrt((J + 1/2)^2 - g^2). Throws SupercriticalCoupling if g > J + 1/2.
double effective_index(NaturalParams const& np, unsigned J);

/// Coefficients of the s-equation at energy E.
nu::NUProblem nu_problem(NaturalParams const& np, unsigned J, double E);

EnergyLevel energy_paper(NaturalParams const& np, QuantumNumbers qn);
EnergyLevel energy_physical(NaturalParams const& np, QuantumNumbers qn);
EnergyLevel energy(NaturalParams const& np, QuantumNumbers qn, Branch branch);

/// Number of consecutive levels n = 0, 1, ... that exist.
unsigned level_count(NaturalParams const& np, unsigned J, Branch branch);

/// -g exp(-a r) / r
double potential_yukawa(NaturalParams const& np, double r);
/// -2 a g exp(-2ar) / (1 - exp(-2ar)), equal to potential_yukawa * (ar / sinh(ar)).
double potential_approx(NaturalParams const& np, double r);

/// Value and first two r-derivatives of a radial function.
struct RadialSample
{
    double value{0.0};
    double first{0.0};
    double second{0.0};
};

using RadialEvaluator = std::function<RadialSample(double)>;

/// Which closed form to use for the paper branch.
enum class PaperForm
{
    /// exp(-eps r) (1 - s)^(1/2 + delta) P_n^{(-eps/a, 2 delta)}(1 - 2s), as printed.
    printed_closed_form,
    /// s^(-eps/2a) (1 - s)^(1/2 + delta) P_n^{(-eps/a, 2 delta)}(1 - 2s), the NU exponent.
    nu_exponent
};

struct RadialOptions
{
    /// Reject configurations whose NU validity flags fail.
    bool strict{false};
    PaperForm paper_form{PaperForm::printed_closed_form};
};

/// N s^p (1 - s)^q P_n^{(alpha, beta)}(1 - 2s) with s = exp(-2ar).
class RadialFunction
{
  public:
    RadialFunction(double a, double s_exponent, double one_minus_s_exponent, unsigned n, double alpha, double beta,
                   double norm = 1.0);

    RadialSample operator()(double r) const;

    double value(double r) const
    {
        return (*this)(r).value;
    }

    RadialFunction scaled(double factor) const;

    double norm_constant() const
    {
        return norm_;
    }

    double s_exponent() const
    {
        return s_exponent_;
    }

    double jacobi_alpha() const
    {
        return alpha_;
    }

    double jacobi_beta() const
    {
        return beta_;
    }

    /// The printed paper-branch form pairs an s-exponent and a Jacobi parameter
    /// from different NU branches.
    bool inconsistent() const
    {
        return inconsistent_;
    }

    void mark_inconsistent()
    {
        inconsistent_ = true;
    }

  private:
    double a_;
    double s_exponent_;
    double one_minus_s_exponent_;
    unsigned n_;
    double alpha_;
    double beta_;
    double norm_;
    bool inconsistent_{false};
};

/// Unnormalized closed-form F for `level`.
RadialFunction radial_function(EnergyLevel const& level, NaturalParams const& np, RadialOptions const& opts = {});

/// N such that the integral of (N F)^2 over (0, inf) is 1.
/** Integrates to 27.7 / decay_rate. Throws DivergentNorm for growing input. */
double normalize(RadialEvaluator const& f, double decay_rate);

/// Normalized closed-form F.
RadialFunction radial_F(EnergyLevel const& level, NaturalParams const& np, RadialOptions const& opts = {});

struct SpinorSample
{
    double F{0.0};
    double G{0.0};
    double H_plus{0.0};
    double H_minus{0.0};
};

/// Radial components F, G, H_{+1}, H_{-1} built from F through the first-order system.
class SpinorSet
{
  public:
    SpinorSet(EnergyLevel level, NaturalParams np, RadialFunction F, double hbar_c);

    /// r in MeV^-1, components in MeV^(1/2).
    SpinorSample sample_natural(double r) const;
    /// r in fm, components in fm^(-1/2) (unit L2 norm in fm).
    SpinorSample sample(double r_fm) const;

    double alpha_J() const
    {
        return alpha_J_;
    }

    double sigma_J() const
    {
        return sigma_J_;
    }

    double norm_constant() const
    {
        return F_.norm_constant();
    }

    RadialFunction const& radial() const
    {
        return F_;
    }

    EnergyLevel const& level() const
    {
        return level_;
    }

  private:
    EnergyLevel level_;
    NaturalParams np_;
    RadialFunction F_;
    double hbar_c_;
    double alpha_J_;
    double sigma_J_;
};

SpinorSet spinors(EnergyLevel const& level, NaturalParams const& np, RadialOptions const& opts = {},
                  double hbar_c = kHbarC);

} // namespace dkp
