#pragma once

#include "qdom/rational.hpp"
#include "qdom/report.hpp"
#include "qdom/rng.hpp"

#include <concepts>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qdom::effects {

// A carrier packages one partial-commutative-monoid instance: the partial
// sum with its definedness predicate, the induced order, and whatever extra
// structure the instance has (orthocomplement/top for effect algebras,
// [0,1]-scalars for modules). Definedness is a total predicate; "undefined"
// never throws inside law checking.
//
// Two regimes share this interface: exact carriers (rationals, finite
// tables) where eq is exact equality, and numeric carriers (algebra effects)
// where eq is closeness within a declared tolerance.
template <class C>
concept Carrier = requires(const C c, const typename C::Elem x, const typename C::Elem y,
                           const Rat r, Rng& rng) {
    { c.eq(x, y) } -> std::convertible_to<bool>;
    { c.defined(x, y) } -> std::convertible_to<bool>;
    { c.sum(x, y) } -> std::convertible_to<typename C::Elem>;
    { c.zero() } -> std::convertible_to<typename C::Elem>;
    { c.one() } -> std::convertible_to<std::optional<typename C::Elem>>;
    { c.perp(x) } -> std::convertible_to<std::optional<typename C::Elem>>;
    { c.leq(x, y) } -> std::convertible_to<bool>;
    { c.diff(y, x) } -> std::convertible_to<std::optional<typename C::Elem>>;
    { c.scale(r, x) } -> std::convertible_to<std::optional<typename C::Elem>>;
    { c.finite() } -> std::convertible_to<bool>;
    { c.sample(rng, std::size_t{}) } -> std::convertible_to<std::vector<typename C::Elem>>;
    { c.sample_below(rng, x, std::size_t{}) } -> std::convertible_to<std::vector<typename C::Elem>>;
    { c.show(x) } -> std::convertible_to<std::string>;
};

enum class Structure { pcm, ea, gea, emod, gemod };
enum class HomMode { ea, gea, emod, gemod };

std::string to_string(Structure s);
std::string to_string(HomMode m);

// --- exact carriers ---------------------------------------------------------

// The unit interval of exact rationals: x # y iff x + y <= 1, perp x = 1 - x,
// scalars act by multiplication. The canonical effect module.
class UnitInterval {
public:
    using Elem = Rat;

    bool eq(const Rat& a, const Rat& b) const { return a == b; }
    bool defined(const Rat& a, const Rat& b) const { return a + b <= 1; }
    Rat sum(const Rat& a, const Rat& b) const { return a + b; }
    Rat zero() const { return Rat(0); }
    std::optional<Rat> one() const { return Rat(1); }
    std::optional<Rat> perp(const Rat& a) const { return Rat(1) - a; }
    bool leq(const Rat& a, const Rat& b) const { return a <= b; }
    std::optional<Rat> diff(const Rat& y, const Rat& x) const {
        if (x > y) return std::nullopt;
        return y - x;
    }
    std::optional<Rat> scale(const Rat& r, const Rat& x) const { return r * x; }
    bool finite() const { return false; }
    std::vector<Rat> sample(Rng& rng, std::size_t n) const;
    std::vector<Rat> sample_below(Rng& rng, const Rat& t, std::size_t n) const;
    std::string show(const Rat& a) const { return rat_to_string(a); }
};

// Fuzzy predicates over a finite set: the pointwise power of [0,1], exact.
class PredicateAlgebra {
public:
    using Elem = std::vector<Rat>;  // one value per point, in [0,1]

    explicit PredicateAlgebra(std::size_t points) : points_(points) {}
    std::size_t points() const { return points_; }

    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool defined(const Elem& a, const Elem& b) const;
    Elem sum(const Elem& a, const Elem& b) const;
    Elem zero() const { return Elem(points_, Rat(0)); }
    std::optional<Elem> one() const { return Elem(points_, Rat(1)); }
    std::optional<Elem> perp(const Elem& a) const;
    bool leq(const Elem& a, const Elem& b) const;
    std::optional<Elem> diff(const Elem& y, const Elem& x) const;
    std::optional<Elem> scale(const Rat& r, const Elem& x) const;
    bool finite() const { return false; }
    std::vector<Elem> sample(Rng& rng, std::size_t n) const;
    std::vector<Elem> sample_below(Rng& rng, const Elem& t, std::size_t n) const;
    std::string show(const Elem& a) const;

private:
    std::size_t points_;
};

// A finite partial-monoid table over named elements. Effect-algebra struct-
// ure (perp, one) is optional; tables can be deliberately inconsistent so
// law violations surface as report entries with witnesses.
class FiniteTable {
public:
    using Elem = int;

    FiniteTable(std::vector<std::string> names, int zero_index);

    static FiniteTable mv_chain(int k);   // {0, 1/k, ..., 1}, truncated sum
    static FiniteTable diamond();         // {0, a, b, 1} with a # b = 1

    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return names_.size(); }
    int index_of(const std::string& name) const;

    void set_sum(int a, int b, int c, bool both_directions = true);
    void unset_sum(int a, int b);  // negative-control hook
    void set_perp(int a, int b, bool both_directions = true);

    bool eq(int a, int b) const { return a == b; }
    bool defined(int a, int b) const { return table_[slot(a, b)] >= 0; }
    int sum(int a, int b) const;
    int zero() const { return zero_; }
    std::optional<int> one() const;
    std::optional<int> perp(int a) const;
    bool leq(int a, int b) const;                 // exists z with a + z = b
    std::optional<int> diff(int y, int x) const;  // first z with x + z = y
    std::optional<int> scale(const Rat&, int) const { return std::nullopt; }
    bool finite() const { return true; }
    std::vector<int> sample(Rng&, std::size_t) const;
    std::vector<int> sample_below(Rng&, const int& t, std::size_t) const;
    std::string show(int a) const { return names_[static_cast<std::size_t>(a)]; }

    // All z with x # z and x + z = candidate-one (uniqueness probe).
    std::vector<int> complements_of(int x, int one_idx) const;

private:
    std::size_t slot(int a, int b) const {
        return static_cast<std::size_t>(a) * names_.size() + static_cast<std::size_t>(b);
    }
    std::vector<std::string> names_;
    std::vector<int> table_;  // -1 = undefined
    std::vector<int> perp_;   // -1 = none
    int zero_;
};

// Loads `sum a b c` / `perp a b` lines, closes under commutativity and the
// zero laws (element named "0" is the zero), and reports conflicts.
struct TableLoadResult {
    FiniteTable table;
    Report inconsistencies;
};
TableLoadResult read_table(std::istream& in);
TableLoadResult parse_table(const std::string& text);

// --- downset construction ---------------------------------------------------

// The downset of t as an effect algebra: x # y iff x #_E y and x + y <= t,
// top t, perp x = t - x. Scalars restrict  (r.x <= x <= t).
template <Carrier C>
class Downset {
public:
    using Elem = typename C::Elem;

    Downset(const C& base, Elem top) : base_(&base), top_(std::move(top)) {}

    const Elem& top() const { return top_; }

    bool eq(const Elem& a, const Elem& b) const { return base_->eq(a, b); }
    bool defined(const Elem& a, const Elem& b) const {
        return base_->defined(a, b) && base_->leq(base_->sum(a, b), top_);
    }
    Elem sum(const Elem& a, const Elem& b) const { return base_->sum(a, b); }
    Elem zero() const { return base_->zero(); }
    std::optional<Elem> one() const { return top_; }
    std::optional<Elem> perp(const Elem& a) const { return base_->diff(top_, a); }
    bool leq(const Elem& a, const Elem& b) const { return base_->leq(a, b); }
    std::optional<Elem> diff(const Elem& y, const Elem& x) const { return base_->diff(y, x); }
    std::optional<Elem> scale(const Rat& r, const Elem& x) const { return base_->scale(r, x); }
    bool finite() const { return base_->finite(); }
    std::vector<Elem> sample(Rng& rng, std::size_t n) const {
        return base_->sample_below(rng, top_, n);
    }
    std::vector<Elem> sample_below(Rng& rng, const Elem& t, std::size_t n) const {
        return base_->sample_below(rng, t, n);
    }
    std::string show(const Elem& a) const { return base_->show(a); }

private:
    const C* base_;
    Elem top_;
};

template <Carrier C>
Downset<C> downset_algebra(const C& base, typename C::Elem t) {
    return Downset<C>(base, std::move(t));
}

// --- law suites (definitions in effect_algebra_impl.hpp) --------------------

template <Carrier C>
Report check_laws(const C& carrier, Structure structure,
                  const std::vector<typename C::Elem>& sample, Rng& rng,
                  const std::vector<Rat>& scalars = {Rat(1), Rat(1, 2), Rat(1, 3), Rat(2, 3)});

// Induced-order properties: partial order axioms plus 0 <= x (<= 1).
template <Carrier C>
Report check_induced_order(const C& carrier, const std::vector<typename C::Elem>& sample);

template <Carrier CS, Carrier CT>
Report check_homomorphism(
    const std::function<typename CT::Elem(const typename CS::Elem&)>& f, const CS& source,
    const CT& target, HomMode mode, const std::vector<typename CS::Elem>& sample,
    const std::vector<Rat>& scalars = {Rat(1), Rat(1, 2), Rat(1, 3), Rat(2, 3)});

// Builds f~ : E -> downset(f(1)) and verifies: f is a GEA(R)-homomorphism
// iff f~ is an EA-homomorphism (module modes when with_scalars).
template <Carrier CS, Carrier CT>
Report tilde_correspondence(
    const std::function<typename CT::Elem(const typename CS::Elem&)>& f, const CS& source,
    const CT& target, const std::vector<typename CS::Elem>& sample, bool with_scalars = false);

template <Carrier C>
struct DerivedOps {
    std::optional<typename C::Elem> dual_sum;    // x (*) y = (x' + y')'
    std::optional<typename C::Elem> difference;  // y - x, defined when x <= y
    bool leq = false;
};

template <Carrier C>
DerivedOps<C> derived_ops(const C& carrier, const typename C::Elem& x,
                          const typename C::Elem& y);

}  // namespace qdom::effects

#include "qdom/effect_algebra_impl.hpp"
