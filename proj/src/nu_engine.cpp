#include "dkp/nu_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dkp/errors.hpp"
#include "dkp/specfun.hpp"

namespace dkp::nu {

char const* to_string(Branch b)
{
    return b == Branch::one ? "one" : "two";
}

NUConstants derive_constants(NUProblem const& problem, Branch branch)
{
    NUConstants k;
    k.branch = branch;
    k.problem = problem;

    double const c3 = problem.c3;
    k.c4 = 0.5 * (1.0 - problem.c1);
    k.c5 = 0.5 * (problem.c2 - 2.0 * c3);
    k.c6 = k.c5 * k.c5 + problem.p2;
    k.c7 = 2.0 * k.c4 * k.c5 - problem.p1;
    k.c8 = k.c4 * k.c4 + problem.p0;
    k.c9 = c3 * (k.c7 + c3 * k.c8) + k.c6;

    k.roots_real = k.c8 >= 0.0 && k.c9 >= 0.0;
    double const nan = std::numeric_limits<double>::quiet_NaN();
    if (!k.roots_real) {
        k.c10 = k.c11 = k.c12 = k.c13 = nan;
        k.exponents_positive = false;
        k.polynomial_params_admissible = false;
        return k;
    }

    double const r8 = std::sqrt(k.c8);
    double const r9 = std::sqrt(k.c9);
    double const sign = branch == Branch::one ? 1.0 : -1.0;

    k.c10 = sign * 2.0 * r8;
    k.c12 = k.c4 + sign * r8;
    if (c3 != 0.0) {
        k.c11 = 2.0 * r9 / c3;
        k.c13 = -k.c4 + (r9 - k.c5) / c3;
        k.exponents_positive = k.c12 > 0.0 && k.c13 > 0.0;
        k.polynomial_params_admissible = k.c10 > -1.0 && k.c11 > -1.0;
    } else {
        k.c11 = nan;
        k.c13 = nan;
        k.exponents_positive = k.c12 > 0.0 && (r9 - k.c5) > 0.0;
        k.polynomial_params_admissible = k.c10 > -1.0;
    }
    return k;
}

double quantization_residual(NUConstants const& k, unsigned n)
{
    if (!k.roots_real) {
        throw InvalidConstants("quantization residual needs c8 >= 0 and c9 >= 0 (c8 = " + std::to_string(k.c8) +
                               ", c9 = " + std::to_string(k.c9) + ")");
    }
    double const c2 = k.problem.c2;
    double const c3 = k.problem.c3;
    double const r8 = std::sqrt(k.c8);
    double const r9 = std::sqrt(k.c9);
    double const nn = n;
    double const sign = k.branch == Branch::one ? 1.0 : -1.0;

    return nn * c2 - (2.0 * nn + 1.0) * k.c5 + (2.0 * nn + 1.0) * (r9 + sign * c3 * r8) + nn * (nn - 1.0) * c3 +
           k.c7 + 2.0 * c3 * k.c8 + sign * 2.0 * std::sqrt(k.c8 * k.c9);
}

std::vector<double> solve_quantization(ProblemFamily const& family, Branch branch, unsigned n, double lo,
                                       double hi, RootSearchOptions const& opts)
{
    auto residual = [&](double e) {
        try {
            return quantization_residual(derive_constants(family(e), branch), n);
        } catch (InvalidConstants const&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    std::size_t const samples = opts.samples < 2 ? 2 : opts.samples;
    double const h = (hi - lo) / static_cast<double>(samples - 1);

    std::vector<double> roots;
    double e_prev = lo;
    double f_prev = residual(lo);
    if (f_prev == 0.0) {
        roots.push_back(lo);
    }
    for (std::size_t i = 1; i < samples; ++i) {
        double const e = (i + 1 == samples) ? hi : lo + h * static_cast<double>(i);
        double const f = residual(e);
        if (f == 0.0) {
            roots.push_back(e);
        } else if (std::isfinite(f) && std::isfinite(f_prev) && f_prev != 0.0 && std::signbit(f) != std::signbit(f_prev)) {
            double a = e_prev;
            double b = e;
            double fa = f_prev;
            double mid = 0.5 * (a + b);
            for (unsigned it = 0; it < opts.max_bisections; ++it) {
                mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) {
                    break;
                }
                double const fm = residual(mid);
                bool const narrow = (b - a) <= opts.tolerance * std::max(1.0, std::abs(mid));
                if (fm == 0.0 || (narrow && std::abs(fm) <= opts.tolerance)) {
                    break;
                }
                if (std::signbit(fm) == std::signbit(fa)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(mid);
        }
        e_prev = e;
        f_prev = f;
    }
    if (roots.empty()) {
        throw NoRoot("no sign change of the branch-" + std::string(to_string(branch)) +
                     " residual in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return roots;
}

NUEigenfunction::NUEigenfunction(NUConstants const& consts, unsigned n)
  : consts_(consts)
  , n_(n)
{
}

double NUEigenfunction::operator()(double s) const
{
    auto const& k = consts_;
    double const c3 = k.problem.c3;
    if (c3 != 0.0) {
        double const u = 1.0 - c3 * s;
        return std::pow(s, k.c12) * std::pow(u, k.c13) * specfun::jacobi(n_, k.c10, k.c11, 1.0 - 2.0 * c3 * s);
    }
    double const r9 = std::sqrt(k.c9);
    return std::pow(s, k.c12) * std::exp(-(r9 - k.c5) * s) * specfun::laguerre(n_, k.c10, 2.0 * r9 * s);
}

NUEigenfunction build_eigenfunction(NUConstants const& consts, unsigned n, EigenfunctionMode mode)
{
    if (mode == EigenfunctionMode::strict && !consts.valid()) {
        std::string why;
        if (!consts.roots_real) {
            why += " imaginary square roots;";
        }
        if (!consts.exponents_positive) {
            why += " non-positive exponent (c12 = " + std::to_string(consts.c12) +
                   ", c13 = " + std::to_string(consts.c13) + ");";
        }
        if (!consts.polynomial_params_admissible) {
            why += " polynomial parameter <= -1 (c10 = " + std::to_string(consts.c10) +
                   ", c11 = " + std::to_string(consts.c11) + ");";
        }
        throw ConstraintViolation("branch-" + std::string(to_string(consts.branch)) + " eigenfunction rejected:" + why);
    }
    if (!consts.roots_real) {
        throw InvalidConstants("eigenfunction needs c8 >= 0 and c9 >= 0");
    }
    return NUEigenfunction(consts, n);
}

} // namespace dkp::nu
