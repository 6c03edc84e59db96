#pragma once

#include "qdom/effect_algebra.hpp"
#include "qdom/rational.hpp"
#include "qdom/report.hpp"
#include "qdom/rng.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qdom::subdist {

// Finite carrier set; element identity by name, order fixed by the vector.
using Carrier = std::vector<std::string>;

// Finite map carrier -> [0,1] with total weight <= 1, exact rationals. The
// missing mass is the deadlock probability.
class SubDistribution {
public:
    SubDistribution() = default;
    explicit SubDistribution(Carrier carrier);
    SubDistribution(Carrier carrier, std::map<std::string, Rat> weights);

    const Carrier& carrier() const { return carrier_; }
    const Rat& weight(const std::string& x) const;
    void set_weight(const std::string& x, Rat w);  // validates range and total

    Rat total() const;
    Rat deficit() const { return Rat(1) - total(); }

    bool operator==(const SubDistribution& o) const {
        return carrier_ == o.carrier_ && weights_ == o.weights_;
    }

    std::string to_string() const;

private:
    void validate() const;
    Carrier carrier_;
    std::map<std::string, Rat> weights_;  // zero-weight entries omitted
};

// eta: point mass at x.
SubDistribution unit(const std::string& x, Carrier carrier);

// mu: flattens a distribution over distributions; `inner[i]` receives outer
// weight `outer_weights[i]`. All inner carriers must coincide.
SubDistribution multiply(const std::vector<SubDistribution>& inner,
                         const std::vector<Rat>& outer_weights);

// Subconvex combination sum_i r_i phi_i with sum r_i <= 1 (same as multiply;
// named for the algebra-side reading).
SubDistribution subconvex_sum(const std::vector<SubDistribution>& parts,
                              const std::vector<Rat>& weights);

class KleisliArrow {
public:
    KleisliArrow(Carrier source, Carrier target);

    const Carrier& source() const { return source_; }
    const Carrier& target() const { return target_; }

    const SubDistribution& row(const std::string& x) const;
    void set_row(const std::string& x, SubDistribution d);

    SubDistribution apply(const SubDistribution& d) const;  // push-forward f*d

    bool operator==(const KleisliArrow& o) const = default;

    std::string to_string() const;

private:
    Carrier source_, target_;
    std::map<std::string, SubDistribution> rows_;
};

KleisliArrow identity_arrow(Carrier x);

// (g o f)(x)(z) = sum_y f(x)(y) g(y)(z); requires f.target == g.source.
KleisliArrow kleisli_compose(const KleisliArrow& f, const KleisliArrow& g);

// D<=1(X) ~ D=1(1+X): the added point "_|_" absorbs the deficit.
inline const std::string kBottomName = "_|_";
SubDistribution to_total(const SubDistribution& d);
SubDistribution from_total(const SubDistribution& d);  // expects carrier ending in _|_

// Fuzzy predicate on a carrier set: values in [0,1], exact.
class FuzzyPredicate {
public:
    FuzzyPredicate() = default;
    explicit FuzzyPredicate(Carrier carrier);
    FuzzyPredicate(Carrier carrier, std::map<std::string, Rat> values);

    const Carrier& carrier() const { return carrier_; }
    const Rat& value(const std::string& x) const;
    void set_value(const std::string& x, Rat v);

    bool operator==(const FuzzyPredicate& o) const = default;
    std::string to_string() const;

private:
    Carrier carrier_;
    std::map<std::string, Rat> values_;
};

FuzzyPredicate point_predicate(const std::string& y, Carrier carrier);

// wp(f)(q)(x) = sum_y f(x)(y) q(y): the predicate transformer of an arrow.
FuzzyPredicate wp_discrete(const KleisliArrow& f, const FuzzyPredicate& q);

// Recovers the arrow from its transformer via point predicates; the inverse
// of wp_discrete on finite sets.
KleisliArrow arrow_from_wp(
    const std::function<FuzzyPredicate(const FuzzyPredicate&)>& wp, Carrier source,
    Carrier target);

// <d, q> = sum_x d(x) q(x); wp duality states <d, wp(f)(q)> = <f*d, q>.
Rat pairing(const SubDistribution& d, const FuzzyPredicate& q);

// Bridges a FuzzyPredicate to the pointwise effect-module carrier so the
// generic law suites can quantify over predicates.
effects::PredicateAlgebra predicate_algebra(const Carrier& c);
std::vector<Rat> to_tuple(const FuzzyPredicate& q);
FuzzyPredicate from_tuple(const Carrier& c, const std::vector<Rat>& t);

// Unit/counit of the homming-into-[0,1] adjunction, verified on sampled hom
// families (scalar homs on [0,1]; evaluation/affine homs on D<=1 carriers).
Report adjunction_maps(Rng& rng, std::size_t samples = 64);

// Monad laws, iso round-trip, wp bijection, duality: the module's full suite.
Report discrete_law_suite(Rng& rng, std::size_t instances = 200);

// Random generators (exact rationals, bounded denominators).
SubDistribution random_subdistribution(Rng& rng, const Carrier& c, std::int64_t max_den = 12);
KleisliArrow random_arrow(Rng& rng, const Carrier& src, const Carrier& dst,
                          std::int64_t max_den = 12);
FuzzyPredicate random_predicate(Rng& rng, const Carrier& c, std::int64_t max_den = 12);

// Text formats. Distribution: `x 1/3` per line. Arrow: `a -> b 1/2` lines.
SubDistribution read_subdistribution(std::istream& in, Carrier carrier_hint = {});
KleisliArrow read_arrow(std::istream& in);
std::string to_text(const SubDistribution& d);
std::string to_text(const KleisliArrow& f);

}  // namespace qdom::subdist
