#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qdom::order {

// Finite poset over opaque string identifiers. The relation is kept as a
// dense bool matrix internally; canonical equality goes through the sorted
// pair list. Immutable after construction.
//
// Directedness follows the standard order-theoretic definition: a nonempty
// subset D is directed when every pair of D has an upper bound *in D*. On a
// finite poset this forces every directed subset to contain its maximum, so
// every finite poset is directed-complete; is_dcpo still runs the exhaustive
// enumeration as the executable oracle for that collapse.
class FinitePoset {
public:
    FinitePoset(std::vector<std::string> elements, std::vector<std::pair<int, int>> leq_pairs);

    // Builds the reflexive-transitive closure of the generating pairs, then
    // validates antisymmetry (a cycle through distinct elements is rejected).
    static FinitePoset from_generators(std::vector<std::string> elements,
                                       const std::vector<std::pair<std::string, std::string>>& gens);

    std::size_t size() const { return elements_.size(); }
    const std::vector<std::string>& elements() const { return elements_; }
    const std::string& name(int i) const { return elements_[static_cast<std::size_t>(i)]; }
    std::optional<int> index_of(const std::string& name) const;

    bool leq(int a, int b) const { return rel_[static_cast<std::size_t>(a) * size() + static_cast<std::size_t>(b)] != 0; }

    // Sorted (i,j) pairs with i <= j in the order; canonical form.
    std::vector<std::pair<int, int>> leq_pairs() const;

    bool operator==(const FinitePoset& o) const;

    std::optional<int> bottom() const;
    std::optional<int> top() const;
    std::vector<int> downset(int x) const;
    std::vector<int> upper_bounds(const std::vector<int>& subset) const;
    std::optional<int> least_upper_bound(const std::vector<int>& subset) const;
    std::optional<int> maximum(const std::vector<int>& subset) const;

    // Minimal elements strictly above the bottom; empty when no bottom exists.
    std::vector<int> atoms() const;

private:
    std::vector<std::string> elements_;
    std::vector<unsigned char> rel_;  // size() x size()
};

// Enumeration cap: power-set walks refuse posets with more than 2^16 subsets.
inline constexpr std::size_t kMaxSubsetEnumeration = std::size_t{1} << 16;
inline constexpr std::size_t kMaxEnumerableElements = 16;

// Every pair of `subset` has an upper bound inside the subset.
// Throws DomainError on an empty subset or out-of-range indices.
bool is_directed(const FinitePoset& p, const std::vector<int>& subset);

// Exhaustive oracle over all nonempty subsets (size guard applies): every
// directed subset has a least upper bound. On finite posets this reduces to
// "every directed subset has a maximum" and is provably always true; the
// enumeration keeps the claim executable rather than assumed.
bool is_dcpo(const FinitePoset& p);

// Every nonempty chain (totally ordered subset) has a least upper bound.
bool is_chain_complete(const FinitePoset& p);

// Every subset with some upper bound has a least one. (Predicate provided for
// coverage; nothing downstream consumes it.)
bool is_bounded_complete(const FinitePoset& p);

// Total monotone map between finite posets; table[i] is the target index of
// source element i. Construction validates monotonicity.
class MonotoneMap {
public:
    MonotoneMap(const FinitePoset& source, const FinitePoset& target, std::vector<int> table);

    const FinitePoset& source() const { return *source_; }
    const FinitePoset& target() const { return *target_; }
    int operator()(int i) const { return table_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& table() const { return table_; }

private:
    const FinitePoset* source_;
    const FinitePoset* target_;
    std::vector<int> table_;
};

// First (x,y) with x <= y but f(x) !<= f(y), if any.
std::optional<std::pair<int, int>> monotonicity_violation(const FinitePoset& source,
                                                          const FinitePoset& target,
                                                          const std::vector<int>& table);

// Exhaustive Scott-continuity check: for every directed subset D of the
// source, f(D) is directed and lub f(D) = f(lub D). Equivalent to
// monotonicity on finite posets; kept exhaustive as the oracle.
bool is_scott_continuous(const MonotoneMap& f);

struct WayBelowResult {
    std::vector<std::pair<int, int>> pairs;  // (x,y) with x way below y
    std::vector<int> compact;                // x with x << x
    std::vector<int> atoms;
};

// Brute-force way-below from the definition: x << y iff every directed D
// with y <= lub D contains some d >= x.
WayBelowResult way_below(const FinitePoset& p);

// All monotone tables source -> target, lexicographic order.
std::vector<std::vector<int>> all_monotone_tables(const FinitePoset& source,
                                                  const FinitePoset& target);

// The poset of all monotone maps source -> target under the pointwise order.
// Element names encode the tables as "f[t0,t1,...]".
FinitePoset function_poset(const FinitePoset& source, const FinitePoset& target);

// All labeled posets on n elements named "e0".."e{n-1}". Counts grow fast
// (4231 posets at n = 5); intended for exhaustive desk-scale sweeps.
std::vector<FinitePoset> all_posets(std::size_t n);

// Text format: `elem a` and `leq a b` lines (generating pairs); closure on
// load. '#' starts a comment.
FinitePoset read_poset(std::istream& in);
FinitePoset parse_poset(const std::string& text);
std::string to_text(const FinitePoset& p);

}  // namespace qdom::order
