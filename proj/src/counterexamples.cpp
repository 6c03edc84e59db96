#include "qdom/counterexamples.hpp"

#include "qdom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdom::cex {

// --- PiecewiseLinear -----------------------------------------------------------

PiecewiseLinear::PiecewiseLinear(std::vector<Rat> breakpoints, std::vector<Rat> values)
    : xs_(std::move(breakpoints)), ys_(std::move(values)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
        throw DomainError("piecewise-linear function needs matching breakpoint/value lists");
    if (xs_.front() != 0 || xs_.back() != 1)
        throw DomainError("breakpoints must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
        if (xs_[i] >= xs_[i + 1]) throw DomainError("breakpoints must be strictly increasing");
}

PiecewiseLinear PiecewiseLinear::constant(Rat v) {
    return PiecewiseLinear({Rat(0), Rat(1)}, {v, std::move(v)});
}

PiecewiseLinear PiecewiseLinear::ramp(const Rat& delta) {
    if (delta <= 0 || delta > Rat(1, 2)) throw DomainError("ramp delta must lie in (0, 1/2]");
    const Rat half(1, 2);
    if (delta == half)
        return PiecewiseLinear({Rat(0), half, Rat(1)}, {Rat(0), Rat(1), Rat(1)});
    return PiecewiseLinear({Rat(0), half - delta, half, Rat(1)},
                           {Rat(0), Rat(0), Rat(1), Rat(1)});
}

Rat PiecewiseLinear::operator()(const Rat& x) const {
    if (x < 0 || x > 1) throw DomainError("evaluation outside [0,1]");
    auto hi = std::lower_bound(xs_.begin(), xs_.end(), x);
    if (hi != xs_.end() && *hi == x) return ys_[static_cast<std::size_t>(hi - xs_.begin())];
    const auto i = static_cast<std::size_t>(hi - xs_.begin()) - 1;
    const Rat t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return ys_[i] + t * (ys_[i + 1] - ys_[i]);
}

bool PiecewiseLinear::operator==(const PiecewiseLinear& o) const {
    // Functional equality: agree at both breakpoint sets.
    for (const auto& x : xs_)
        if ((*this)(x) != o(x)) return false;
    for (const auto& x : o.xs_)
        if ((*this)(x) != o(x)) return false;
    return true;
}

std::string PiecewiseLinear::to_string() const {
    std::string out = "PL[";
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (i) out += " ";
        out += "(" + rat_to_string(xs_[i]) + "," + rat_to_string(ys_[i]) + ")";
    }
    return out + "]";
}

namespace {

std::vector<Rat> merged_grid(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    std::vector<Rat> xs = f.breakpoints();
    xs.insert(xs.end(), g.breakpoints().begin(), g.breakpoints().end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// Grid refined with the crossing point inside every segment where f - g
// changes sign; on the result, min/max are linear per segment.
std::vector<Rat> grid_with_crossings(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    const auto base = merged_grid(f, g);
    std::vector<Rat> xs;
    for (std::size_t i = 0; i < base.size(); ++i) {
        xs.push_back(base[i]);
        if (i + 1 == base.size()) break;
        const Rat d0 = f(base[i]) - g(base[i]);
        const Rat d1 = f(base[i + 1]) - g(base[i + 1]);
        if ((d0 > 0 && d1 < 0) || (d0 < 0 && d1 > 0)) {
            const Rat t = d0 / (d0 - d1);
            xs.push_back(base[i] + t * (base[i + 1] - base[i]));
        }
    }
    return xs;
}

PiecewiseLinear combine(const PiecewiseLinear& f, const PiecewiseLinear& g, bool take_min) {
    const auto xs = grid_with_crossings(f, g);
    std::vector<Rat> ys;
    ys.reserve(xs.size());
    for (const auto& x : xs) {
        const Rat a = f(x), b = g(x);
        ys.push_back(take_min ? std::min(a, b) : std::max(a, b));
    }
    return PiecewiseLinear(xs, std::move(ys));
}

}  // namespace

PiecewiseLinear pointwise_min(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    return combine(f, g, true);
}

PiecewiseLinear pointwise_max(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    return combine(f, g, false);
}

bool pl_leq(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    for (const auto& x : merged_grid(f, g))
        if (f(x) > g(x)) return false;
    return true;
}

std::optional<Rat> strictly_below_at(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    for (const auto& x : grid_with_crossings(f, g))
        if (f(x) < g(x)) return x;
    // Strict inequality can also live mid-segment; probe midpoints.
    const auto xs = grid_with_crossings(f, g);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const Rat mid = (xs[i] + xs[i + 1]) / 2;
        if (f(mid) < g(mid)) return mid;
    }
    return std::nullopt;
}

PiecewiseLinear chain_member(unsigned n) {
    if (n > 40) throw SizeError("chain_member: n <= 40 (denominators 2^{n+1})");
    const Rat half(1, 2);
    const Rat knee = half + pow2_inv(n + 1);
    if (knee == 1)  // n = 0: the knee sits on the right endpoint
        return PiecewiseLinear({Rat(0), half, Rat(1)}, {Rat(0), Rat(0), Rat(1)});
    return PiecewiseLinear({Rat(0), half, knee, Rat(1)}, {Rat(0), Rat(0), Rat(1), Rat(1)});
}

bool dominates_chain(const PiecewiseLinear& g) {
    // g >= sup f_n pointwise iff g >= 0 before 1/2 and g >= 1 from 1/2 on:
    // checking the breakpoint grid plus the two half-interval endpoints is
    // exact for piecewise-linear g.
    const Rat half(1, 2);
    std::vector<Rat> xs = g.breakpoints();
    xs.push_back(half);
    for (const auto& x : xs) {
        if (x <= half && g(x) < 0) return false;
        if (x >= half && g(x) < 1) return false;
    }
    return true;
}

WitnessResult no_least_upper_bound_witness(const PiecewiseLinear& g, Rat delta) {
    if (delta <= 0 || delta > Rat(1, 2))
        throw DomainError("no_least_upper_bound_witness: delta must lie in (0, 1/2]");
    if (!dominates_chain(g)) {
        // Name a point where domination fails.
        const Rat half(1, 2);
        std::vector<Rat> xs = g.breakpoints();
        xs.push_back(half);
        for (const auto& x : xs) {
            if (x <= half && g(x) < 0)
                throw DomainError("g is not an upper bound: g(" + rat_to_string(x) + ") = " +
                                  rat_to_string(g(x)) + " < 0");
            if (x >= half && g(x) < 1)
                throw DomainError("g is not an upper bound: g(" + rat_to_string(x) + ") = " +
                                  rat_to_string(g(x)) + " < 1");
        }
    }
    // min(g, ramp) stays an upper bound; halve delta until it bites. A PL
    // upper bound has g > 0 somewhere left of 1/2 (continuity at g(1/2) >= 1),
    // so the halving terminates.
    for (;;) {
        const PiecewiseLinear ramp = PiecewiseLinear::ramp(delta);
        PiecewiseLinear improved = pointwise_min(g, ramp);
        if (const auto pt = strictly_below_at(improved, g))
            return {std::move(improved), delta, *pt};
        delta /= 2;
        if (denominator(delta) > Int(1) << 200)
            throw NumericError("witness search failed to terminate");  // unreachable for PL bounds
    }
}

PiecewiseLinear random_chain_upper_bound(Rng& rng) {
    // Piece together: nonnegative on [0,1/2], >= 1 on [1/2,1].
    std::vector<Rat> xs{Rat(0)};
    std::vector<Rat> ys{rng.unit_rat(8)};
    const Rat half(1, 2);
    const int left = static_cast<int>(rng.range(0, 2));
    for (int i = 1; i <= left; ++i) {
        xs.push_back(Rat(i, 2 * (left + 1)));
        ys.push_back(rng.unit_rat(8) * 2);
    }
    xs.push_back(half);
    ys.push_back(Rat(1) + rng.unit_rat(8));
    const int right = static_cast<int>(rng.range(0, 2));
    for (int i = 1; i <= right; ++i) {
        xs.push_back(half + Rat(i, 2 * (right + 1)));
        ys.push_back(Rat(1) + rng.unit_rat(8) * 2);
    }
    xs.push_back(Rat(1));
    ys.push_back(Rat(1) + rng.unit_rat(8));
    return PiecewiseLinear(std::move(xs), std::move(ys));
}

// --- projection lattice -----------------------------------------------------------

bool is_projection(const Matrix& p, double tol) {
    if (!p.square()) return false;
    if (!mat::is_selfadjoint(p, tol).selfadjoint) return false;
    return mat::frobenius_norm(p - p * p) <= tol * 10;
}

std::vector<std::vector<mat::Complex>> range_basis(const Matrix& p, double tol) {
    const auto dec = mat::hermitian_eigen(p, std::max(tol, 1e-7));
    std::vector<std::vector<mat::Complex>> basis;
    const std::size_t n = p.dim();
    for (std::size_t k = 0; k < n; ++k) {
        if (dec.eigenvalues[k] < 0.5) continue;  // projection spectra sit near {0,1}
        std::vector<mat::Complex> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = dec.vectors.at(i, k);
        basis.push_back(std::move(v));
    }
    return basis;
}

Matrix rank_one(const std::vector<mat::Complex>& v) {
    Matrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m.at(i, j) = v[i] * std::conj(v[j]);
    return m;
}

namespace {

// Modified Gram-Schmidt with a second pass; drops dependent vectors.
std::vector<std::vector<mat::Complex>> orthonormalize(
    std::vector<std::vector<mat::Complex>> vs, double rel_tol = 1e-10) {
    std::vector<std::vector<mat::Complex>> basis;
    for (auto& v : vs) {
        const double scale = std::max(1.0, mat::vec_norm(v));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                const auto c = mat::vec_inner(b, v);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
            }
        const double nv = mat::vec_norm(v);
        if (nv <= rel_tol * scale) continue;
        for (auto& z : v) z /= nv;
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

LatticeOps projection_lattice_ops(const Matrix& p, const Matrix& q, double tol) {
    if (p.dim() != q.dim()) throw DomainError("projection dimensions differ");
    if (!is_projection(p, tol) || !is_projection(q, tol))
        throw DomainError("operand fails the projection invariant (p = p* = p^2)");
    const std::size_t n = p.dim();

    LatticeOps out{Matrix(n, n), Matrix(n, n), false, {}};

    // Join: orthonormalize the union of the ranges.
    auto vectors = range_basis(p, tol);
    for (auto& v : range_basis(q, tol)) vectors.push_back(std::move(v));
    const auto join_basis = orthonormalize(std::move(vectors));
    for (const auto& v : join_basis) {
        out.join += rank_one(v);
        out.atoms_of_join.push_back(rank_one(v));
    }

    // Meet: vectors killed by both 1-p and 1-q, i.e. the null space of
    // (1-p) + (1-q) (PSD, kernel = ran p ^ ran q).
    const Matrix gap = (Matrix::identity(n) - p) + (Matrix::identity(n) - q);
    const auto dec = mat::hermitian_eigen(gap, std::max(tol, 1e-7));
    for (std::size_t k = 0; k < n; ++k) {
        if (dec.eigenvalues[k] > 1e-8) continue;
        std::vector<mat::Complex> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = dec.vectors.at(i, k);
        out.meet += rank_one(v);
    }

    out.leq = mat::frobenius_norm(q * p - p) <= tol * 100;
    return out;
}

// --- truncated ell^2 family ----------------------------------------------------------

Ell2Row ell2_truncation_demo(unsigned n) {
    if (n < 2 || n > 64) throw DomainError("ell2_truncation_demo: 2 <= n <= 64");
    // Coordinates 1..n map to indices 0..n-1; e'_k = e_k / k + e_1.
    std::vector<std::vector<mat::Complex>> spanning;
    for (unsigned k = 2; k <= n; ++k) {
        std::vector<mat::Complex> v(n);
        v[0] = 1.0;
        v[k - 1] = 1.0 / static_cast<double>(k);
        spanning.push_back(std::move(v));
    }
    const auto basis = orthonormalize(std::move(spanning));
    Matrix join(n, n);
    for (const auto& v : basis) join += rank_one(v);

    std::vector<mat::Complex> e1(n);
    e1[0] = 1.0;
    const auto proj = mat::apply_vec(join, e1);
    double dist2 = 0;
    for (unsigned i = 0; i < n; ++i) dist2 += std::norm(e1[i] - proj[i]);

    Matrix p1(n, n);
    p1.at(0, 0) = 1.0;
    const bool below = mat::frobenius_norm(join * p1 - p1) <= 1e-9;

    return {n, std::sqrt(dist2), below};
}

double ell2_distance_closed_form(unsigned n) {
    double s = 1;
    for (unsigned k = 2; k <= n; ++k) s += static_cast<double>(k) * static_cast<double>(k);
    return 1.0 / std::sqrt(s);
}

}  // namespace qdom::cex
