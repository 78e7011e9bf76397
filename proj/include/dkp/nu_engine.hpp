#pragma once

/** \file nu_engine.hpp
 *
 *  \brief Parametric Nikiforov-Uvarov solver.
 *
 *  Handles equations of the form
 *
 *      psi'' + (c1 - c2 s) / (s (1 - c3 s)) psi'
 *            + (-p2 s^2 + p1 s - p0) / (s^2 (1 - c3 s)^2) psi = 0.
 *
 *  The two roots of the NU k-equation give two quantization conditions with
 *  different exponent sets. Neither is preferred here; callers pick one.
 */

#include <cstddef>
#include <functional>
#include <vector>

namespace dkp::nu {

struct NUProblem
{
    double c1{0.0};
    double c2{0.0};
    double c3{0.0};
    double p0{0.0};
    double p1{0.0};
    double p2{0.0};
};

/// Root of the k-equation.
/** `one`: k = -(c7 + 2 c3 c8) - 2 sqrt(c8 c9), exponent c12 = c4 + sqrt(c8).
 *  `two`: k = -(c7 + 2 c3 c8) + 2 sqrt(c8 c9), exponent c12 = c4 - sqrt(c8). */
enum class Branch
{
    one,
    two
};

char const* to_string(Branch b);

struct NUConstants
{
    Branch branch{Branch::one};
    NUProblem problem;
    double c4{0.0}, c5{0.0}, c6{0.0}, c7{0.0}, c8{0.0}, c9{0.0};
    /// Branch-dependent set. For c3 == 0, c11 and c13 are NaN (the Laguerre
    /// limit has no (1 - c3 s) factor).
    double c10{0.0}, c11{0.0}, c12{0.0}, c13{0.0};

    /// c8 >= 0 and c9 >= 0.
    bool roots_real{true};
    /// c12 > 0 and c13 > 0 (for c3 == 0: sqrt(c9) - c5 > 0 in place of c13).
    bool exponents_positive{true};
    /// c10 > -1 and c11 > -1.
    bool polynomial_params_admissible{true};

    bool valid() const
    {
        return roots_real && exponents_positive && polynomial_params_admissible;
    }
};

NUConstants derive_constants(NUProblem const& problem, Branch branch);

/// Left-hand side of the branch's quantization condition for radial number n.
/** Throws InvalidConstants if c8 or c9 is negative. */
double quantization_residual(NUConstants const& consts, unsigned n);

struct RootSearchOptions
{
    std::size_t samples{2000};
    double tolerance{1e-12};
    unsigned max_bisections{200};
};

/// Energy-dependent problem family E -> NUProblem.
using ProblemFamily = std::function<NUProblem(double)>;

/// All roots of the quantization residual in [lo, hi], ascending.
/** Uniform scan for sign changes, then bisection. Throws NoRoot if none. */
std::vector<double> solve_quantization(ProblemFamily const& family, Branch branch, unsigned n, double lo,
                                       double hi, RootSearchOptions const& opts = {});

enum class EigenfunctionMode
{
    /// Throws ConstraintViolation unless every validity flag holds.
    strict,
    /// Builds the formula as written whatever the flags say.
    as_printed
};

/// Unnormalized eigenfunction s -> psi(s).
/** c3 != 0: s^c12 (1 - c3 s)^c13 P_n^{(c10,c11)}(1 - 2 c3 s).
 *  c3 == 0: s^c12 exp(-(sqrt(c9) - c5) s) L_n^{c10}(2 sqrt(c9) s). */
class NUEigenfunction
{
  public:
    NUEigenfunction(NUConstants const& consts, unsigned n);

    double operator()(double s) const;

    NUConstants const& constants() const
    {
        return consts_;
    }

    unsigned degree() const
    {
        return n_;
    }

  private:
    NUConstants consts_;
    unsigned n_;
};

NUEigenfunction build_eigenfunction(NUConstants const& consts, unsigned n,
                                    EigenfunctionMode mode = EigenfunctionMode::strict);

} // namespace dkp::nu
