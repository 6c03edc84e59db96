#include "qdom/effect_algebra.hpp"

#include "qdom/errors.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace qdom::effects {

std::string to_string(Structure s) {
    switch (s) {
        case Structure::pcm: return "pcm";
        case Structure::ea: return "ea";
        case Structure::gea: return "gea";
        case Structure::emod: return "emod";
        case Structure::gemod: return "gemod";
    }
    return "?";
}

std::string to_string(HomMode m) {
    switch (m) {
        case HomMode::ea: return "ea";
        case HomMode::gea: return "gea";
        case HomMode::emod: return "emod";
        case HomMode::gemod: return "gemod";
    }
    return "?";
}

// --- UnitInterval ------------------------------------------------------------

std::vector<Rat> UnitInterval::sample(Rng& rng, std::size_t n) const {
    std::vector<Rat> s{Rat(0), Rat(1), Rat(1, 2)};
    while (s.size() < n) s.push_back(rng.unit_rat(24));
    s.resize(n ? n : s.size());
    return s;
}

std::vector<Rat> UnitInterval::sample_below(Rng& rng, const Rat& t, std::size_t n) const {
    std::vector<Rat> s{Rat(0), t};
    while (s.size() < n) s.push_back(rng.unit_rat(24) * t);
    s.resize(n ? n : s.size());
    return s;
}

// --- PredicateAlgebra ---------------------------------------------------------

bool PredicateAlgebra::defined(const Elem& a, const Elem& b) const {
    for (std::size_t i = 0; i < points_; ++i)
        if (a[i] + b[i] > 1) return false;
    return true;
}

PredicateAlgebra::Elem PredicateAlgebra::sum(const Elem& a, const Elem& b) const {
    Elem r(points_);
    for (std::size_t i = 0; i < points_; ++i) r[i] = a[i] + b[i];
    return r;
}

std::optional<PredicateAlgebra::Elem> PredicateAlgebra::perp(const Elem& a) const {
    Elem r(points_);
    for (std::size_t i = 0; i < points_; ++i) r[i] = Rat(1) - a[i];
    return r;
}

bool PredicateAlgebra::leq(const Elem& a, const Elem& b) const {
    for (std::size_t i = 0; i < points_; ++i)
        if (a[i] > b[i]) return false;
    return true;
}

std::optional<PredicateAlgebra::Elem> PredicateAlgebra::diff(const Elem& y, const Elem& x) const {
    if (!leq(x, y)) return std::nullopt;
    Elem r(points_);
    for (std::size_t i = 0; i < points_; ++i) r[i] = y[i] - x[i];
    return r;
}

std::optional<PredicateAlgebra::Elem> PredicateAlgebra::scale(const Rat& r, const Elem& x) const {
    Elem out(points_);
    for (std::size_t i = 0; i < points_; ++i) out[i] = r * x[i];
    return out;
}

std::vector<PredicateAlgebra::Elem> PredicateAlgebra::sample(Rng& rng, std::size_t n) const {
    std::vector<Elem> s{zero(), *one()};
    while (s.size() < n) {
        Elem e(points_);
        for (auto& v : e) v = rng.unit_rat(12);
        s.push_back(std::move(e));
    }
    s.resize(n ? n : s.size());
    return s;
}

std::vector<PredicateAlgebra::Elem> PredicateAlgebra::sample_below(Rng& rng, const Elem& t,
                                                                   std::size_t n) const {
    std::vector<Elem> s{zero(), t};
    while (s.size() < n) {
        Elem e(points_);
        for (std::size_t i = 0; i < points_; ++i) e[i] = rng.unit_rat(12) * t[i];
        s.push_back(std::move(e));
    }
    s.resize(n ? n : s.size());
    return s;
}

std::string PredicateAlgebra::show(const Elem& a) const {
    std::string out = "[";
    for (std::size_t i = 0; i < points_; ++i) {
        if (i) out += " ";
        out += rat_to_string(a[i]);
    }
    return out + "]";
}

// --- FiniteTable ---------------------------------------------------------------

FiniteTable::FiniteTable(std::vector<std::string> names, int zero_index)
    : names_(std::move(names)),
      table_(names_.size() * names_.size(), -1),
      perp_(names_.size(), -1),
      zero_(zero_index) {
    if (zero_ < 0 || static_cast<std::size_t>(zero_) >= names_.size())
        throw DomainError("zero index out of range");
    for (int x = 0; x < static_cast<int>(names_.size()); ++x) {
        set_sum(zero_, x, x);
    }
}

FiniteTable FiniteTable::mv_chain(int k) {
    if (k < 1) throw DomainError("mv_chain needs k >= 1");
    std::vector<std::string> names;
    for (int i = 0; i <= k; ++i) names.push_back(rat_to_string(Rat(i, k)));
    FiniteTable t(std::move(names), 0);
    for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b)
            if (a + b <= k) t.set_sum(a, b, a + b);
    for (int a = 0; a <= k; ++a) t.set_perp(a, k - a);
    return t;
}

FiniteTable FiniteTable::diamond() {
    FiniteTable t({"0", "a", "b", "1"}, 0);
    t.set_sum(1, 2, 3);  // a + b = 1
    t.set_perp(0, 3);
    t.set_perp(1, 2);
    return t;
}

int FiniteTable::index_of(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw DomainError("unknown table element '" + name + "'");
    return static_cast<int>(it - names_.begin());
}

void FiniteTable::set_sum(int a, int b, int c, bool both_directions) {
    table_[slot(a, b)] = c;
    if (both_directions) table_[slot(b, a)] = c;
}

void FiniteTable::unset_sum(int a, int b) { table_[slot(a, b)] = -1; }

void FiniteTable::set_perp(int a, int b, bool both_directions) {
    perp_[static_cast<std::size_t>(a)] = b;
    if (both_directions) perp_[static_cast<std::size_t>(b)] = a;
}

int FiniteTable::sum(int a, int b) const {
    const int c = table_[slot(a, b)];
    if (c < 0) throw DomainError("sum undefined for (" + show(a) + ", " + show(b) + ")");
    return c;
}

std::optional<int> FiniteTable::one() const {
    const int o = perp_[static_cast<std::size_t>(zero_)];
    if (o < 0) return std::nullopt;
    return o;
}

std::optional<int> FiniteTable::perp(int a) const {
    const int p = perp_[static_cast<std::size_t>(a)];
    if (p < 0) return std::nullopt;
    return p;
}

bool FiniteTable::leq(int a, int b) const {
    for (int z = 0; z < static_cast<int>(size()); ++z)
        if (defined(a, z) && table_[slot(a, z)] == b) return true;
    return false;
}

std::optional<int> FiniteTable::diff(int y, int x) const {
    for (int z = 0; z < static_cast<int>(size()); ++z)
        if (defined(x, z) && table_[slot(x, z)] == y) return z;
    return std::nullopt;
}

std::vector<int> FiniteTable::sample(Rng&, std::size_t) const {
    std::vector<int> all(size());
    for (std::size_t i = 0; i < size(); ++i) all[i] = static_cast<int>(i);
    return all;
}

std::vector<int> FiniteTable::sample_below(Rng&, const int& t, std::size_t) const {
    std::vector<int> below;
    for (int x = 0; x < static_cast<int>(size()); ++x)
        if (leq(x, t)) below.push_back(x);
    return below;
}

std::vector<int> FiniteTable::complements_of(int x, int one_idx) const {
    std::vector<int> zs;
    for (int z = 0; z < static_cast<int>(size()); ++z)
        if (defined(x, z) && table_[slot(x, z)] == one_idx) zs.push_back(z);
    return zs;
}

// --- loader ---------------------------------------------------------------------

TableLoadResult read_table(std::istream& in) {
    struct SumLine { std::string a, b, c; std::size_t line; };
    struct PerpLine { std::string a, b; std::size_t line; };
    std::vector<SumLine> sums;
    std::vector<PerpLine> perps;
    std::vector<std::string> names;
    auto remember = [&names](const std::string& n) {
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "sum") {
            SumLine s;
            if (!(ls >> s.a >> s.b >> s.c)) throw ParseError("sum needs three names", line_no);
            s.line = line_no;
            remember(s.a); remember(s.b); remember(s.c);
            sums.push_back(std::move(s));
        } else if (kw == "perp") {
            PerpLine p;
            if (!(ls >> p.a >> p.b)) throw ParseError("perp needs two names", line_no);
            p.line = line_no;
            remember(p.a); remember(p.b);
            perps.push_back(std::move(p));
        } else {
            throw ParseError("unknown keyword '" + kw + "'", line_no);
        }
    }
    remember("0");

    const auto zero_it = std::find(names.begin(), names.end(), "0");
    FiniteTable table(names, static_cast<int>(zero_it - names.begin()));
    Report issues;
    issues.suite = "table-load";

    for (const auto& s : sums) {
        const int a = table.index_of(s.a), b = table.index_of(s.b), c = table.index_of(s.c);
        // Closure under commutativity; conflicting duplicates are reported.
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
            if (table.defined(x, y) && table.sum(x, y) != c)
                issues.fail("table.sum-conflict", "partial commutative monoid",
                            "line " + std::to_string(s.line) + ": sum " + s.a + " " + s.b +
                                " already bound to " + table.show(table.sum(x, y)));
            else
                table.set_sum(x, y, c, false);
        }
    }
    for (const auto& p : perps) {
        const int a = table.index_of(p.a), b = table.index_of(p.b);
        const auto pa = table.perp(a);
        const auto pb = table.perp(b);
        if ((pa && *pa != b) || (pb && *pb != a))
            issues.fail("table.perp-conflict", "effect algebra",
                        "line " + std::to_string(p.line) + ": perp " + p.a + " rebinds");
        else
            table.set_perp(a, b);
    }
    // Orthocomplement rows imply sums x + x' = 1.
    if (const auto one = table.one()) {
        for (int x = 0; x < static_cast<int>(table.size()); ++x) {
            const auto px = table.perp(x);
            if (!px) continue;
            if (table.defined(x, *px) && table.sum(x, *px) != *one)
                issues.fail("table.perp-sum-conflict", "effect algebra",
                            "element " + table.show(x) + ": x + perp(x) != 1");
            else
                table.set_sum(x, *px, *one);
        }
    }
    if (issues.checks.empty()) issues.pass("table.consistent", "loader closure");
    return {std::move(table), std::move(issues)};
}

TableLoadResult parse_table(const std::string& text) {
    std::istringstream in(text);
    return read_table(in);
}

}  // namespace qdom::effects
