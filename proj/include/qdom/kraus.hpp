#pragma once

#include "qdom/report.hpp"
#include "qdom/rng.hpp"
#include "qdom/wstar.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qdom::cp {

using mat::Complex;
using mat::Matrix;
using wstar::AlgebraElement;
using wstar::AlgebraSignature;
using wstar::NormalState;

// One Kraus item: contributes K* x_s K to output block t. K has shape
// dim(s) x dim(t).
struct KrausItem {
    std::size_t src_block;
    std::size_t dst_block;
    Matrix k;
};

// Completely positive map between algebras in Heisenberg-picture Kraus form:
// predicates flow source -> target, states flow target -> source. Maps are
// compared through their transfer matrices, never through the (non-unique)
// item lists.
class KrausMap {
public:
    KrausMap(AlgebraSignature source, AlgebraSignature target, std::vector<KrausItem> items);

    static KrausMap identity(const AlgebraSignature& sig);
    static KrausMap zero(const AlgebraSignature& source, const AlgebraSignature& target);
    // x -> U* x U per block; U unitary per block of sig.
    static KrausMap unitary_conjugation(const AlgebraSignature& sig,
                                        const std::vector<Matrix>& unitaries);

    const AlgebraSignature& source() const { return source_; }
    const AlgebraSignature& target() const { return target_; }
    const std::vector<KrausItem>& items() const { return items_; }

    AlgebraElement apply(const AlgebraElement& x) const;
    AlgebraElement unit_image() const;  // f(1) = sum K*K

    bool sub_unital(double tol = 1e-9) const;  // 0 <= f(1) <= 1
    bool unital(double tol = 1e-9) const;      // f(1) = 1

    KrausMap scaled(double factor) const;  // factor * f, factor >= 0
    static KrausMap convex_sum(double p, const KrausMap& a, const KrausMap& b);

private:
    AlgebraSignature source_, target_;
    std::vector<KrausItem> items_;
};

// The map's action as one matrix on entry stacks: rows indexed by target
// entries, columns by source entries. The canonical form for equality,
// limits, and fixed points.
class Transfer {
public:
    Transfer(AlgebraSignature source, AlgebraSignature target);
    Transfer(AlgebraSignature source, AlgebraSignature target, Matrix m);

    static Transfer from_kraus(const KrausMap& f);
    static Transfer from_action(const std::function<AlgebraElement(const AlgebraElement&)>& act,
                                const AlgebraSignature& source, const AlgebraSignature& target);
    static Transfer identity(const AlgebraSignature& sig);

    const AlgebraSignature& source() const { return source_; }
    const AlgebraSignature& target() const { return target_; }
    const Matrix& matrix() const { return m_; }

    AlgebraElement apply(const AlgebraElement& x) const;
    AlgebraElement unit_image() const;

    Transfer& operator+=(const Transfer& o);
    Transfer& operator-=(const Transfer& o);
    Transfer& operator*=(Complex s);
    friend Transfer operator+(Transfer a, const Transfer& b) { return a += b; }
    friend Transfer operator-(Transfer a, const Transfer& b) { return a -= b; }
    friend Transfer operator*(Complex s, Transfer a) { return a *= s; }

private:
    AlgebraSignature source_, target_;
    Matrix m_;
};

double distance(const Transfer& a, const Transfer& b);  // Frobenius

// x -> g(f(x)); f: A -> B, g: B -> C.
KrausMap compose(const KrausMap& f, const KrausMap& g);
Transfer compose(const Transfer& f, const Transfer& g);

// Choi block of the (s,t) component read off the transfer columns; the map
// is CP iff every block is PSD.
std::vector<Matrix> choi_blocks(const Transfer& t);
bool is_completely_positive(const Transfer& t, double tol = 1e-9);

struct MapClass {
    bool psu = false;
    bool pu = false;
    bool miu = false;
};

// Flags are monotone by construction: miu => pu => psu.
MapClass classify(const KrausMap& f, double tol = 1e-9, Rng* rng = nullptr);

enum class OrderMode { choi, sampled };

struct MapOrderVerdict {
    bool leq;
    OrderMode mode;
    // choi: CP difference is sufficient for the pointwise order, not
    // necessary. sampled: a sound falsifier, not a verifier.
    std::string note;
};

MapOrderVerdict loewner_leq_maps(const KrausMap& f, const KrausMap& g, double tol = 1e-9,
                                 OrderMode mode = OrderMode::choi, Rng* rng = nullptr,
                                 std::size_t samples = 24);
MapOrderVerdict loewner_leq_transfers(const Transfer& f, const Transfer& g, double tol = 1e-9,
                                      OrderMode mode = OrderMode::choi, Rng* rng = nullptr,
                                      std::size_t samples = 24);

struct MapLubOptions {
    double residual = 1e-12;
    long max_iterations = 1000000;
    long monotone_checks = 64;  // choi-mode step checks for k below this
};

struct MapLubResult {
    Transfer lub;
    long iterations;
    double residual;
};

// Entrywise transfer limit of a Loewner-monotone sequence of sub-unital
// maps; checks monotonicity (choi mode) and sub-unitality along the way and
// that the limit dominates the consumed prefix. Limits are taken on the
// matrix-unit basis directly; at finite dimension this agrees with taking
// normalized pointwise limits over the positive cone.
MapLubResult lub_monotone_maps(const std::function<KrausMap(long)>& seq, double tol = 1e-9,
                               const MapLubOptions& opt = {});

// Schroedinger picture: rho_t -> sum K rho_t K* into source blocks. The
// state transformer NS(target) -> NS(source) dual to f under the pairing.
NormalState dual_apply(const KrausMap& f, const NormalState& s, double tol = 1e-6);

// Same duality at the transfer level: D = P_src T^t P_dst with P the
// blockwise transpose permutation (no conjugation).
Transfer dual_transfer(const Transfer& t);

// Rebuilds the full map from its action on effects via the four-positive-
// parts split; the executable content of maps being determined by [0,1]_A.
Transfer transfer_from_effect_action(
    const std::function<AlgebraElement(const AlgebraElement&)>& effect_action,
    const AlgebraSignature& source, const AlgebraSignature& target);

KrausMap random_kraus_map(Rng& rng, const AlgebraSignature& source,
                          const AlgebraSignature& target, std::size_t max_items = 3);
// Random sub-unital map (scaled so f(1) <= 1, occasionally unital channels).
KrausMap random_subunital_map(Rng& rng, const AlgebraSignature& source,
                              const AlgebraSignature& target);

// Kraus file format: `map <src sig> -> <dst sig>`, then `item s t` headers
// each followed by a matrix block.
std::string to_text(const KrausMap& f);
KrausMap read_kraus(std::istream& in);
KrausMap parse_kraus(const std::string& text);

}  // namespace qdom::cp
