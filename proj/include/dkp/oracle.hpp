#pragma once

/** \file oracle.hpp
 *
 *  \brief Shooting-method eigenvalue solver for the radial Klein-Gordon equation.
 *
 *  Solves F'' = W(r) F with either the exact Yukawa coefficient or its
 *  a/sinh(ar) surrogate. Levels are located through a counting function
 *
 *      N(E) = nodes(outward) + nodes(inward) + [mismatch(E) < 0],
 *
 *  which steps by one at every eigenvalue and is insensitive to the poles of
 *  the log-derivative mismatch.
 */

#include <cstddef>
#include <span>
#include <vector>

#include "dkp/dkp_yukawa.hpp"

namespace dkp::oracle {

enum class Variant
{
    /// Greene-Aldrich surrogate, solvable in closed form.
    approx,
    /// The Yukawa radial equation itself.
    exact
};

char const* to_string(Variant v);

/// Zero-valued lengths are replaced per energy by the stated defaults.
struct OracleConfig
{
    Variant variant{Variant::approx};
    /// Default 1e-6 / a.
    double r_min{0.0};
    /// Default 30 / eps(E).
    double r_max{0.0};
    /// Default 1 / eps(E).
    double match_point{0.0};
    double rel_error{1e-12};
    /// Error target while scanning for level windows; only node counts are
    /// needed there.
    double scan_rel_error{1e-8};
    /// Extra scan points at m - h 4^-k, k = 1..threshold_points (h the grid step).
    unsigned threshold_points{10};
    /// Bisection stops once the bracket is below energy_tol * m.
    double energy_tol{1e-10};
    unsigned max_bisections{200};
    std::size_t scan_points{4000};
    /// Multiplies both initial conditions.
    double initial_scale{1.0};
};

struct ShootResult
{
    /// (F'/F)_out - (F'/F)_in at the match point.
    double mismatch{0.0};
    unsigned node_count{0};
    bool converged{false};

    /// Number of eigenvalues below the shooting energy.
    unsigned level_index() const
    {
        return node_count + (mismatch < 0.0 ? 1u : 0u);
    }
};

/// W(r) in F'' = W(r) F. Throws DomainError for r <= 0.
double rhs(Variant variant, NaturalParams const& np, unsigned J, double E, double r);

ShootResult shoot(NaturalParams const& np, unsigned J, double E, OracleConfig const& cfg = {});

/// Energy of level n at angular momentum J. Throws NoBoundState if absent.
double find_level(NaturalParams const& np, QuantumNumbers qn, OracleConfig const& cfg = {});

/// Levels n = 0 .. n_max from a single scan; stops early at the last bound level.
std::vector<double> find_levels(NaturalParams const& np, unsigned J, unsigned n_max, OracleConfig const& cfg = {});

/// max |F'' - W F| / max |F''| over `grid`; 0 when F'' vanishes everywhere.
double ode_residual(Variant variant, RadialEvaluator const& F, NaturalParams const& np, unsigned J, double E,
                    std::span<double const> grid);

/// Scaled defect of the fourth first-order equation (the one coupling H_{+1},
/// H_{-1}, F and G), evaluated with the true Yukawa potential and true 1/r.
double system_residual(SpinorSet const& spinors, NaturalParams const& np, unsigned J, double E,
                       std::span<double const> grid);

/// n points geometrically spaced on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

} // namespace dkp::oracle
