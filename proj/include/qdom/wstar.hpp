#pragma once

#include "qdom/effect_algebra.hpp"
#include "qdom/matrix.hpp"
#include "qdom/rational.hpp"
#include "qdom/report.hpp"
#include "qdom/rng.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qdom::wstar {

using mat::Complex;
using mat::Matrix;

// A finite-dimensional W*-algebra: a direct sum of full matrix blocks,
// described by its block dimensions. "blocks 2" is a qubit, "blocks 1 1" a
// classical bit, "blocks 2 1 1" a qubit next to a bit.
class AlgebraSignature {
public:
    explicit AlgebraSignature(std::vector<std::size_t> blocks);

    std::size_t num_blocks() const { return blocks_.size(); }
    std::size_t block_dim(std::size_t b) const { return blocks_[b]; }
    const std::vector<std::size_t>& blocks() const { return blocks_; }

    // Dimension of the algebra as a vector space: sum of n_b^2.
    std::size_t entry_dim() const;
    std::size_t entry_offset(std::size_t b) const;  // start of block b in a stack

    bool operator==(const AlgebraSignature& o) const = default;

    std::string to_string() const;  // "blocks 2 1 1"
    static AlgebraSignature parse(const std::string& text);

private:
    std::vector<std::size_t> blocks_;
};

inline const AlgebraSignature kQubit{std::vector<std::size_t>{2}};
inline const AlgebraSignature kBit{std::vector<std::size_t>{1, 1}};

// One element of the algebra: a square matrix per block.
class AlgebraElement {
public:
    explicit AlgebraElement(AlgebraSignature sig);  // zero element
    AlgebraElement(AlgebraSignature sig, std::vector<Matrix> blocks);

    static AlgebraElement unit(const AlgebraSignature& sig);

    const AlgebraSignature& signature() const { return sig_; }
    const Matrix& block(std::size_t b) const { return blocks_[b]; }
    Matrix& block(std::size_t b) { return blocks_[b]; }

    AlgebraElement adjoint() const;
    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);
    AlgebraElement& operator*=(Complex s);
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);  // blockwise

private:
    AlgebraSignature sig_;
    std::vector<Matrix> blocks_;
};

// Row-major entries per block, blocks concatenated: the coordinate stack all
// transfer matrices act on.
std::vector<Complex> stack(const AlgebraElement& x);
AlgebraElement unstack(const AlgebraSignature& sig, const std::vector<Complex>& v);

// Matrix units of every block, in stack order; a linear basis of the algebra.
std::vector<AlgebraElement> basis_elements(const AlgebraSignature& sig);

double norm(const AlgebraElement& x);        // max block operator norm
double stack_norm(const AlgebraElement& x);  // Frobenius over all blocks

bool is_selfadjoint(const AlgebraElement& x, double tol = 1e-9);
bool is_positive(const AlgebraElement& x, double tol = 1e-9);
bool loewner_leq(const AlgebraElement& a, const AlgebraElement& b, double tol = 1e-9);
bool is_effect(const AlgebraElement& x, double tol = 1e-9);

// Blockwise PSD square root.
AlgebraElement psd_sqrt(const AlgebraElement& x, double tol = 1e-9);

// A normal (sub)state: PSD density blocks with total trace <= 1 + tol.
class NormalState {
public:
    NormalState(AlgebraSignature sig, std::vector<Matrix> rho, double tol = 1e-9);
    static NormalState zero(const AlgebraSignature& sig);
    static NormalState maximally_mixed(const AlgebraSignature& sig);

    const AlgebraSignature& signature() const { return sig_; }
    const Matrix& rho(std::size_t b) const { return rho_[b]; }
    double total_trace() const;

private:
    AlgebraSignature sig_;
    std::vector<Matrix> rho_;
};

// <s, x> = sum_b tr(rho_b x_b): linear in x, real on self-adjoint x, in
// [0,1] on effects.
Complex pairing(const NormalState& s, const AlgebraElement& x);

// Normal states built from matrix units: E_jj plus the two rank-one states
// reading off Re/Im of each off-diagonal entry. Separates the algebra.
std::vector<NormalState> canonical_separating_family(const AlgebraSignature& sig);

// For each probe pair (x, y): find a separating state in `family`, then in
// the canonical family (which must always succeed on distinct probes).
Report separating_check(const AlgebraSignature& sig, const std::vector<NormalState>& family,
                        const std::vector<std::pair<AlgebraElement, AlgebraElement>>& probes,
                        double tol = 1e-9);

// --- commutant --------------------------------------------------------------

struct CommutantBasis {
    std::vector<Matrix> basis;  // orthonormal in the Frobenius inner product
    std::size_t dim() const { return basis.size(); }
};

// {T | TS = ST for all generators S}, as the null space of the stacked
// commutator equations. Generators live in a single M_n with n <= 16.
CommutantBasis commutant(const std::vector<Matrix>& generators);

// Orthonormal basis of the *-algebra generated by `generators` (unit and
// adjoints adjoined when close_input, multiplicative closure always).
CommutantBasis star_algebra_span(const std::vector<Matrix>& generators, bool close_input);

struct BicommutantResult {
    Report report;
    std::size_t span_dim = 0;
    std::size_t commutant_dim = 0;
    std::size_t bicommutant_dim = 0;
};

// The algebraic double-commutant identity A = A'' for the *-algebra span of
// the generators: dimension match plus mutual span containment within tol.
// Rejects a non-*-closed input unless close_input is set.
BicommutantResult bicommutant_check(const std::vector<Matrix>& generators, bool close_input,
                                    double tol = 1e-8);

// Residual of v against the span of an orthonormal set (Frobenius).
double span_residual(const std::vector<Matrix>& basis, const Matrix& v);

// --- monotone effect sequences ------------------------------------------------

// At finite dimension the norm, strong, and weak operator topologies
// coincide, so entrywise limits are the only limit notion needed, and
// bounded monotone sequences stand in for the nets of the general theory.
struct LubOptions {
    double residual = 1e-12;      // Cauchy stopping threshold
    long max_iterations = 1000000;
    double order_tol = 1e-9;      // Loewner comparisons
    long monotone_checks = 64;    // verify x_k <= x_{k+1} for k below this
};

struct EffectLubResult {
    AlgebraElement lub;
    long iterations;
    double residual;
};

// Entrywise limit of a monotone, bounded sequence of effects. Throws
// OrderViolation when a checked step decreases, NumericError when the
// Cauchy residual never falls below the threshold.
EffectLubResult lub_monotone_effects(const std::function<AlgebraElement(long)>& seq,
                                     const AlgebraSignature& sig, const LubOptions& opt = {});

// --- [0,1]_A as an effect-algebra carrier --------------------------------------

// Effects of an algebra with tolerance-based equality; plugs into the
// generic law suites (definedness x # y iff x + y <= 1 in the Loewner order).
class EffectCarrier {
public:
    using Elem = AlgebraElement;

    explicit EffectCarrier(AlgebraSignature sig, double tol = 1e-9)
        : sig_(std::move(sig)), tol_(tol) {}

    const AlgebraSignature& signature() const { return sig_; }

    bool eq(const Elem& a, const Elem& b) const;
    bool defined(const Elem& a, const Elem& b) const;
    Elem sum(const Elem& a, const Elem& b) const { return a + b; }
    Elem zero() const { return AlgebraElement(sig_); }
    std::optional<Elem> one() const { return AlgebraElement::unit(sig_); }
    std::optional<Elem> perp(const Elem& a) const { return AlgebraElement::unit(sig_) - a; }
    bool leq(const Elem& a, const Elem& b) const { return loewner_leq(a, b, tol_); }
    std::optional<Elem> diff(const Elem& y, const Elem& x) const;
    std::optional<Elem> scale(const Rat& r, const Elem& x) const;
    bool finite() const { return false; }
    std::vector<Elem> sample(Rng& rng, std::size_t n) const;
    std::vector<Elem> sample_below(Rng& rng, const Elem& t, std::size_t n) const;
    std::string show(const Elem& a) const;

private:
    AlgebraSignature sig_;
    double tol_;
};

// --- random generators -----------------------------------------------------------

Matrix random_matrix(Rng& rng, std::size_t n, double scale = 1.0);
Matrix random_hermitian(Rng& rng, std::size_t n, double scale = 1.0);
Matrix random_psd(Rng& rng, std::size_t n, double scale = 1.0);
Matrix random_effect_matrix(Rng& rng, std::size_t n);
Matrix random_unitary(Rng& rng, std::size_t n);
Matrix random_projector(Rng& rng, std::size_t n);  // possibly 0 or I

AlgebraElement random_element(Rng& rng, const AlgebraSignature& sig, double scale = 1.0);
AlgebraElement random_hermitian_element(Rng& rng, const AlgebraSignature& sig, double scale = 1.0);
AlgebraElement random_psd_element(Rng& rng, const AlgebraSignature& sig, double scale = 1.0);
AlgebraElement random_effect(Rng& rng, const AlgebraSignature& sig);
NormalState random_state(Rng& rng, const AlgebraSignature& sig);

// --- element text format (consecutive matrix blocks) ---------------------------

std::string to_text(const AlgebraElement& x);
AlgebraElement read_element(std::istream& in, const AlgebraSignature& sig,
                            std::size_t* line_counter = nullptr);

}  // namespace qdom::wstar
