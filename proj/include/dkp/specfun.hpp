#pragma once

/** \file specfun.hpp
 *
 *  \brief Terminating hypergeometric sums and the classical polynomials built on them.
 *
 *  Every routine here evaluates a finite sum, so the parameters may be any
 *  finite reals, including values at or below -1 that fall outside the
 *  orthogonality region. Only vanishing denominators are rejected.
 */

namespace dkp::specfun {

/// Degree and parameter pair of a Jacobi or Laguerre polynomial.
struct PolyParams
{
    unsigned degree{0};
    double alpha{0.0};
    /// Unused for Laguerre.
    double beta{0.0};
};

/// Rising factorial (x)_k = x (x+1) ... (x+k-1), with (x)_0 = 1.
double pochhammer_rising(double x, unsigned k);

/// Terminating Gauss series 2F1(-n, b; c; x).
/** Throws PoleInDenominator if c is one of 0, -1, ..., -(n-1). */
double hyp2f1_terminating(unsigned n, double b, double c, double x);

/// Jacobi polynomial P_n^{(alpha,beta)}(x) from its hypergeometric representation
///     ((alpha+1)_n / n!) 2F1(-n, alpha+beta+1+n; alpha+1; (1-x)/2).
double jacobi(unsigned n, double alpha, double beta, double x);

inline double jacobi(PolyParams const& p, double x)
{
    return jacobi(p.degree, p.alpha, p.beta, x);
}

/// k-th derivative in x, via d/dx P_n^{(a,b)} = ((n+a+b+1)/2) P_{n-1}^{(a+1,b+1)}.
double jacobi_derivative(unsigned n, double alpha, double beta, double x, unsigned order = 1);

/// Associated Laguerre polynomial L_n^{alpha}(x).
double laguerre(unsigned n, double alpha, double x);

inline double laguerre(PolyParams const& p, double x)
{
    return laguerre(p.degree, p.alpha, x);
}

/// k-th derivative in x, via d/dx L_n^{a} = -L_{n-1}^{a+1}.
double laguerre_derivative(unsigned n, double alpha, double x, unsigned order = 1);

} // namespace dkp::specfun
