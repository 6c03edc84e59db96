#include "qdom/subdist.hpp"

#include "qdom/errors.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace qdom::subdist {

namespace {

const Rat kZero(0);

void require_member(const Carrier& c, const std::string& x, const char* who) {
    if (std::find(c.begin(), c.end(), x) == c.end())
        throw DomainError(std::string(who) + ": '" + x + "' is not in the carrier");
}

}  // namespace

// --- SubDistribution ---------------------------------------------------------

SubDistribution::SubDistribution(Carrier carrier) : carrier_(std::move(carrier)) {}

SubDistribution::SubDistribution(Carrier carrier, std::map<std::string, Rat> weights)
    : carrier_(std::move(carrier)), weights_(std::move(weights)) {
    for (auto it = weights_.begin(); it != weights_.end();) {
        if (it->second == 0)
            it = weights_.erase(it);
        else
            ++it;
    }
    validate();
}

void SubDistribution::validate() const {
    Rat total(0);
    for (const auto& [x, w] : weights_) {
        require_member(carrier_, x, "SubDistribution");
        if (w < 0 || w > 1) throw DomainError("weight of '" + x + "' outside [0,1]");
        total += w;
    }
    if (total > 1) throw DomainError("total weight " + rat_to_string(total) + " exceeds 1");
}

const Rat& SubDistribution::weight(const std::string& x) const {
    require_member(carrier_, x, "weight");
    const auto it = weights_.find(x);
    return it == weights_.end() ? kZero : it->second;
}

void SubDistribution::set_weight(const std::string& x, Rat w) {
    require_member(carrier_, x, "set_weight");
    if (w == 0)
        weights_.erase(x);
    else
        weights_[x] = std::move(w);
    validate();
}

Rat SubDistribution::total() const {
    Rat t(0);
    for (const auto& [x, w] : weights_) t += w;
    return t;
}

std::string SubDistribution::to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& x : carrier_) {
        const Rat& w = weight(x);
        if (w == 0) continue;
        if (!first) out += ", ";
        out += x + ": " + rat_to_string(w);
        first = false;
    }
    return out + "}";
}

SubDistribution unit(const std::string& x, Carrier carrier) {
    require_member(carrier, x, "unit");
    SubDistribution d(std::move(carrier));
    d.set_weight(x, Rat(1));
    return d;
}

SubDistribution multiply(const std::vector<SubDistribution>& inner,
                         const std::vector<Rat>& outer_weights) {
    if (inner.size() != outer_weights.size())
        throw DomainError("multiply: weight/distribution count mismatch");
    if (inner.empty()) throw DomainError("multiply: empty family has no carrier");
    const Carrier& c = inner.front().carrier();
    Rat outer_total(0);
    for (const auto& w : outer_weights) {
        if (w < 0 || w > 1) throw DomainError("multiply: outer weight outside [0,1]");
        outer_total += w;
    }
    if (outer_total > 1) throw DomainError("multiply: outer weights exceed 1");

    SubDistribution out(c);
    for (const auto& x : c) {
        Rat w(0);
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i].carrier() != c)
                throw DomainError("multiply: inner distributions over mixed carriers");
            w += outer_weights[i] * inner[i].weight(x);
        }
        out.set_weight(x, w);
    }
    return out;
}

SubDistribution subconvex_sum(const std::vector<SubDistribution>& parts,
                              const std::vector<Rat>& weights) {
    return multiply(parts, weights);
}

// --- KleisliArrow --------------------------------------------------------------

KleisliArrow::KleisliArrow(Carrier source, Carrier target)
    : source_(std::move(source)), target_(std::move(target)) {
    for (const auto& x : source_) rows_.emplace(x, SubDistribution(target_));
}

const SubDistribution& KleisliArrow::row(const std::string& x) const {
    require_member(source_, x, "row");
    return rows_.at(x);
}

void KleisliArrow::set_row(const std::string& x, SubDistribution d) {
    require_member(source_, x, "set_row");
    if (d.carrier() != target_) throw DomainError("set_row: row carrier != arrow target");
    rows_.insert_or_assign(x, std::move(d));
}

SubDistribution KleisliArrow::apply(const SubDistribution& d) const {
    if (d.carrier() != source_) throw DomainError("apply: distribution carrier != source");
    std::vector<SubDistribution> inner;
    std::vector<Rat> w;
    for (const auto& x : source_) {
        inner.push_back(rows_.at(x));
        w.push_back(d.weight(x));
    }
    return multiply(inner, w);
}

std::string KleisliArrow::to_string() const {
    std::string out;
    for (const auto& x : source_) out += x + " |-> " + rows_.at(x).to_string() + "\n";
    return out;
}

KleisliArrow identity_arrow(Carrier x) {
    KleisliArrow f(x, x);
    for (const auto& e : x) f.set_row(e, unit(e, x));
    return f;
}

KleisliArrow kleisli_compose(const KleisliArrow& f, const KleisliArrow& g) {
    if (f.target() != g.source())
        throw DomainError("kleisli_compose: middle carriers do not match");
    KleisliArrow out(f.source(), g.target());
    for (const auto& x : f.source()) out.set_row(x, g.apply(f.row(x)));
    return out;
}

SubDistribution to_total(const SubDistribution& d) {
    Carrier extended = d.carrier();
    if (std::find(extended.begin(), extended.end(), kBottomName) != extended.end())
        throw DomainError("to_total: carrier already contains " + kBottomName);
    extended.push_back(kBottomName);
    SubDistribution out(extended);
    for (const auto& x : d.carrier()) out.set_weight(x, d.weight(x));
    out.set_weight(kBottomName, d.deficit());
    return out;
}

SubDistribution from_total(const SubDistribution& d) {
    const Carrier& ext = d.carrier();
    if (ext.empty() || ext.back() != kBottomName)
        throw DomainError("from_total: carrier does not end in " + kBottomName);
    if (d.total() != 1)
        throw DomainError("from_total: image of the iso must have total weight 1");
    Carrier base(ext.begin(), ext.end() - 1);
    SubDistribution out(base);
    for (const auto& x : base) out.set_weight(x, d.weight(x));
    return out;
}

// --- FuzzyPredicate --------------------------------------------------------------

FuzzyPredicate::FuzzyPredicate(Carrier carrier) : carrier_(std::move(carrier)) {}

FuzzyPredicate::FuzzyPredicate(Carrier carrier, std::map<std::string, Rat> values)
    : carrier_(std::move(carrier)), values_(std::move(values)) {
    for (auto it = values_.begin(); it != values_.end();) {
        require_member(carrier_, it->first, "FuzzyPredicate");
        if (it->second < 0 || it->second > 1)
            throw DomainError("predicate value outside [0,1]");
        if (it->second == 0)
            it = values_.erase(it);
        else
            ++it;
    }
}

const Rat& FuzzyPredicate::value(const std::string& x) const {
    require_member(carrier_, x, "value");
    const auto it = values_.find(x);
    return it == values_.end() ? kZero : it->second;
}

void FuzzyPredicate::set_value(const std::string& x, Rat v) {
    require_member(carrier_, x, "set_value");
    if (v < 0 || v > 1) throw DomainError("predicate value outside [0,1]");
    if (v == 0)
        values_.erase(x);
    else
        values_[x] = std::move(v);
}

std::string FuzzyPredicate::to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& x : carrier_) {
        if (!first) out += ", ";
        out += x + ": " + rat_to_string(value(x));
        first = false;
    }
    return out + "}";
}

FuzzyPredicate point_predicate(const std::string& y, Carrier carrier) {
    require_member(carrier, y, "point_predicate");
    FuzzyPredicate q(std::move(carrier));
    q.set_value(y, Rat(1));
    return q;
}

FuzzyPredicate wp_discrete(const KleisliArrow& f, const FuzzyPredicate& q) {
    if (q.carrier() != f.target()) throw DomainError("wp_discrete: predicate over wrong carrier");
    FuzzyPredicate out(f.source());
    for (const auto& x : f.source()) {
        Rat v(0);
        for (const auto& y : f.target()) v += f.row(x).weight(y) * q.value(y);
        out.set_value(x, v);
    }
    return out;
}

KleisliArrow arrow_from_wp(const std::function<FuzzyPredicate(const FuzzyPredicate&)>& wp,
                           Carrier source, Carrier target) {
    KleisliArrow f(source, target);
    for (const auto& y : target) {
        const auto column = wp(point_predicate(y, target));
        for (const auto& x : source) {
            auto row = f.row(x);
            row.set_weight(y, column.value(x));
            f.set_row(x, std::move(row));
        }
    }
    return f;
}

Rat pairing(const SubDistribution& d, const FuzzyPredicate& q) {
    if (d.carrier() != q.carrier()) throw DomainError("pairing: carrier mismatch");
    Rat s(0);
    for (const auto& x : d.carrier()) s += d.weight(x) * q.value(x);
    return s;
}

effects::PredicateAlgebra predicate_algebra(const Carrier& c) {
    return effects::PredicateAlgebra(c.size());
}

std::vector<Rat> to_tuple(const FuzzyPredicate& q) {
    std::vector<Rat> t;
    t.reserve(q.carrier().size());
    for (const auto& x : q.carrier()) t.push_back(q.value(x));
    return t;
}

FuzzyPredicate from_tuple(const Carrier& c, const std::vector<Rat>& t) {
    if (t.size() != c.size()) throw DomainError("from_tuple: arity mismatch");
    FuzzyPredicate q(c);
    for (std::size_t i = 0; i < c.size(); ++i) q.set_value(c[i], t[i]);
    return q;
}

// --- random generators -----------------------------------------------------------

SubDistribution random_subdistribution(Rng& rng, const Carrier& c, std::int64_t max_den) {
    SubDistribution d(c);
    Rat budget(1);
    for (const auto& x : c) {
        if (budget == 0) break;
        Rat w = rng.unit_rat(max_den) * budget;
        if (rng.coin(0.25)) w = 0;  // keep supports sparse
        d.set_weight(x, w);
        budget -= w;
    }
    return d;
}

KleisliArrow random_arrow(Rng& rng, const Carrier& src, const Carrier& dst,
                          std::int64_t max_den) {
    KleisliArrow f(src, dst);
    for (const auto& x : src) f.set_row(x, random_subdistribution(rng, dst, max_den));
    return f;
}

FuzzyPredicate random_predicate(Rng& rng, const Carrier& c, std::int64_t max_den) {
    FuzzyPredicate q(c);
    for (const auto& x : c) q.set_value(x, rng.unit_rat(max_den));
    return q;
}

// --- text formats -----------------------------------------------------------------

SubDistribution read_subdistribution(std::istream& in, Carrier carrier_hint) {
    std::vector<std::pair<std::string, Rat>> entries;
    Carrier carrier = std::move(carrier_hint);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string name, rat;
        if (!(ls >> name) || name[0] == '#') continue;
        if (!(ls >> rat)) throw ParseError("expected 'elem weight'", line_no);
        const auto w = parse_rat(rat);
        if (!w) throw ParseError("bad rational '" + rat + "'", line_no);
        entries.emplace_back(name, *w);
        if (std::find(carrier.begin(), carrier.end(), name) == carrier.end())
            carrier.push_back(name);
    }
    SubDistribution d(carrier);
    for (auto& [x, w] : entries) d.set_weight(x, d.weight(x) + w);
    return d;
}

KleisliArrow read_arrow(std::istream& in) {
    struct Entry { std::string a, b; Rat w; };
    std::vector<Entry> entries;
    Carrier src, dst;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string a, arrow, b, rat;
        if (!(ls >> a) || a[0] == '#') continue;
        if (!(ls >> arrow >> b >> rat) || arrow != "->")
            throw ParseError("expected 'a -> b weight'", line_no);
        const auto w = parse_rat(rat);
        if (!w) throw ParseError("bad rational '" + rat + "'", line_no);
        entries.push_back({a, b, *w});
        if (std::find(src.begin(), src.end(), a) == src.end()) src.push_back(a);
        if (std::find(dst.begin(), dst.end(), b) == dst.end()) dst.push_back(b);
    }
    KleisliArrow f(src, dst);
    for (const auto& e : entries) {
        auto row = f.row(e.a);
        row.set_weight(e.b, row.weight(e.b) + e.w);
        f.set_row(e.a, std::move(row));
    }
    return f;
}

std::string to_text(const SubDistribution& d) {
    std::string out;
    for (const auto& x : d.carrier())
        if (d.weight(x) != 0) out += x + " " + rat_to_string(d.weight(x)) + "\n";
    return out;
}

std::string to_text(const KleisliArrow& f) {
    std::string out;
    for (const auto& x : f.source())
        for (const auto& y : f.target())
            if (f.row(x).weight(y) != 0)
                out += x + " -> " + y + " " + rat_to_string(f.row(x).weight(y)) + "\n";
    return out;
}

}  // namespace qdom::subdist
