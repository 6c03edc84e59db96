#pragma once

#include "qdom/matrix.hpp"
#include "qdom/rational.hpp"
#include "qdom/report.hpp"
#include "qdom/rng.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qdom::cex {

using mat::Matrix;

// Continuous piecewise-linear function on [0,1] with exact rational
// breakpoints and values; continuity holds by construction, so no member of
// this type can ever equal the discontinuous pointwise supremum of the
// chain below.
class PiecewiseLinear {
public:
    // Breakpoints strictly increasing, starting at 0 and ending at 1.
    PiecewiseLinear(std::vector<Rat> breakpoints, std::vector<Rat> values);

    static PiecewiseLinear constant(Rat v);
    // 0 on [0, 1/2 - delta], linear up to 1 at 1/2, then 1; delta in (0, 1/2].
    static PiecewiseLinear ramp(const Rat& delta);

    const std::vector<Rat>& breakpoints() const { return xs_; }
    const std::vector<Rat>& values() const { return ys_; }

    Rat operator()(const Rat& x) const;  // exact evaluation

    bool operator==(const PiecewiseLinear& o) const;

    std::string to_string() const;

private:
    std::vector<Rat> xs_, ys_;
};

// Pointwise min/max on the merged breakpoint set plus crossing points.
PiecewiseLinear pointwise_min(const PiecewiseLinear& f, const PiecewiseLinear& g);
PiecewiseLinear pointwise_max(const PiecewiseLinear& f, const PiecewiseLinear& g);

// f <= g everywhere (exact, checked on merged breakpoints).
bool pl_leq(const PiecewiseLinear& f, const PiecewiseLinear& g);

// A rational x with f(x) < g(x), if one exists.
std::optional<Rat> strictly_below_at(const PiecewiseLinear& f, const PiecewiseLinear& g);

// Member n of the increasing chain: 0 up to 1/2, linear to 1 on
// [1/2, 1/2 + 2^-(n+1)], then 1. Exact breakpoints, n <= 40.
PiecewiseLinear chain_member(unsigned n);

// g dominates every chain member iff g >= 0 on [0,1/2] and g >= 1 on
// [1/2,1]; the finite criterion deciding the infinite quantification.
//
// Why the criterion is equivalent: g >= f_n for all n iff g dominates the
// pointwise supremum, which is 0 on [0,1/2] and 1 on (1/2,1]. Sufficiency
// is immediate (each f_n is 0 on [0,1/2] and at most 1 elsewhere). For
// necessity, g >= 1 on the open interval (1/2,1] forces g(1/2) >= 1 by
// continuity, which is where the closed-interval form comes from; both
// conditions are then decided exactly on the breakpoint grid because g is
// linear in between.
bool dominates_chain(const PiecewiseLinear& g);

struct WitnessResult {
    PiecewiseLinear improved;    // still an upper bound, <= g, != g
    Rat used_delta;              // after any halving
    Rat strict_point;            // improved(x) < g(x) here
};

// Produces a strictly smaller continuous upper bound of the chain than g:
// min(g, ramp(delta)), halving delta until the min actually bites. Hence no
// upper bound is least. Rejects g that is not an upper bound.
WitnessResult no_least_upper_bound_witness(const PiecewiseLinear& g, Rat delta);

// Random continuous PL upper bounds of the chain (for property tests).
PiecewiseLinear random_chain_upper_bound(Rng& rng);

// --- projection lattice --------------------------------------------------------

struct Projection {
    Matrix p;
    // Valid iff ||p - p*|| <= tol and ||p - p^2|| <= tol.
};

bool is_projection(const Matrix& p, double tol = 1e-9);

struct LatticeOps {
    Matrix meet;                 // projection onto ran(p) ^ ran(q)
    Matrix join;                 // projection onto span(ran(p) u ran(q))
    bool leq;                    // p <= q, via qp = p
    std::vector<Matrix> atoms_of_join;  // rank-one constituents of the join
};

// Meet via the null space of (1-p) + (1-q); join via orthonormalizing the
// union of ranges; order via the product criterion.
LatticeOps projection_lattice_ops(const Matrix& p, const Matrix& q, double tol = 1e-9);

// Orthonormal basis of the range of a (near-)projection.
std::vector<std::vector<mat::Complex>> range_basis(const Matrix& p, double tol = 1e-9);

// Rank-one projector onto a unit vector.
Matrix rank_one(const std::vector<mat::Complex>& v);

// --- truncated ell^2 family ------------------------------------------------------

struct Ell2Row {
    unsigned n;          // truncation size
    double distance;     // dist(e_1, ran join(p_2..p_n))
    bool p1_below_join;  // always false
};

// Projections p_k onto span{e_k / k + e_1} inside C^N; the join of
// p_2..p_N approaches e_1 (distance 1/sqrt(1 + sum k^2)) yet never
// dominates p_1.
Ell2Row ell2_truncation_demo(unsigned n);

// Closed form 1/sqrt(1 + sum_{k=2}^n k^2).
double ell2_distance_closed_form(unsigned n);

}  // namespace qdom::cex
