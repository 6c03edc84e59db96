#include "qdom/poset.hpp"

#include "qdom/errors.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <sstream>

namespace qdom::order {

namespace {

void check_size_guard(const FinitePoset& p, const char* op) {
    if (p.size() > kMaxEnumerableElements)
        throw SizeError(std::string(op) + ": poset with " + std::to_string(p.size()) +
                        " elements exceeds the 2^16 subset enumeration cap");
}

std::vector<int> bits_to_subset(std::size_t mask) {
    std::vector<int> s;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) s.push_back(i);
    return s;
}

}  // namespace

FinitePoset::FinitePoset(std::vector<std::string> elements,
                         std::vector<std::pair<int, int>> leq_pairs)
    : elements_(std::move(elements)) {
    const std::size_t n = elements_.size();
    {
        auto sorted = elements_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw DomainError("duplicate element identifier");
    }
    rel_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) rel_[i * n + i] = 1;
    for (auto [a, b] : leq_pairs) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
            throw DomainError("leq pair index out of range");
        rel_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = 1;
    }
    // Validate the three poset axioms by direct enumeration.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && rel_[i * n + j] && rel_[j * n + i])
                throw DomainError("antisymmetry violated: " + elements_[i] + " <= " +
                                  elements_[j] + " <= " + elements_[i]);
            if (!rel_[i * n + j]) continue;
            for (std::size_t k = 0; k < n; ++k)
                if (rel_[j * n + k] && !rel_[i * n + k])
                    throw DomainError("transitivity violated at (" + elements_[i] + "," +
                                      elements_[j] + "," + elements_[k] + ")");
        }
}

FinitePoset FinitePoset::from_generators(
    std::vector<std::string> elements,
    const std::vector<std::pair<std::string, std::string>>& gens) {
    const std::size_t n = elements.size();
    std::vector<unsigned char> rel(n * n, 0);
    auto idx = [&](const std::string& s) -> std::size_t {
        const auto it = std::find(elements.begin(), elements.end(), s);
        if (it == elements.end()) throw DomainError("leq mentions undeclared element '" + s + "'");
        return static_cast<std::size_t>(it - elements.begin());
    };
    for (std::size_t i = 0; i < n; ++i) rel[i * n + i] = 1;
    for (const auto& [a, b] : gens) rel[idx(a) * n + idx(b)] = 1;
    // Warshall closure.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (rel[i * n + k])
                for (std::size_t j = 0; j < n; ++j)
                    if (rel[k * n + j]) rel[i * n + j] = 1;
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && rel[i * n + j]) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return FinitePoset(std::move(elements), std::move(pairs));
}

std::optional<int> FinitePoset::index_of(const std::string& name) const {
    const auto it = std::find(elements_.begin(), elements_.end(), name);
    if (it == elements_.end()) return std::nullopt;
    return static_cast<int>(it - elements_.begin());
}

std::vector<std::pair<int, int>> FinitePoset::leq_pairs() const {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (rel_[i * size() + j]) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return pairs;  // generated in sorted order
}

bool FinitePoset::operator==(const FinitePoset& o) const {
    return elements_ == o.elements_ && leq_pairs() == o.leq_pairs();
}

std::optional<int> FinitePoset::bottom() const {
    for (std::size_t i = 0; i < size(); ++i) {
        bool below_all = true;
        for (std::size_t j = 0; j < size() && below_all; ++j) below_all = leq(static_cast<int>(i), static_cast<int>(j));
        if (below_all) return static_cast<int>(i);
    }
    return std::nullopt;
}

std::optional<int> FinitePoset::top() const {
    for (std::size_t i = 0; i < size(); ++i) {
        bool above_all = true;
        for (std::size_t j = 0; j < size() && above_all; ++j) above_all = leq(static_cast<int>(j), static_cast<int>(i));
        if (above_all) return static_cast<int>(i);
    }
    return std::nullopt;
}

std::vector<int> FinitePoset::downset(int x) const {
    std::vector<int> d;
    for (std::size_t i = 0; i < size(); ++i)
        if (leq(static_cast<int>(i), x)) d.push_back(static_cast<int>(i));
    return d;
}

std::vector<int> FinitePoset::upper_bounds(const std::vector<int>& subset) const {
    std::vector<int> ubs;
    for (std::size_t u = 0; u < size(); ++u) {
        bool ok = true;
        for (int x : subset)
            if (!leq(x, static_cast<int>(u))) { ok = false; break; }
        if (ok) ubs.push_back(static_cast<int>(u));
    }
    return ubs;
}

std::optional<int> FinitePoset::least_upper_bound(const std::vector<int>& subset) const {
    const auto ubs = upper_bounds(subset);
    for (int candidate : ubs) {
        bool least = true;
        for (int other : ubs)
            if (!leq(candidate, other)) { least = false; break; }
        if (least) return candidate;
    }
    return std::nullopt;
}

std::optional<int> FinitePoset::maximum(const std::vector<int>& subset) const {
    for (int candidate : subset) {
        bool maximal = true;
        for (int other : subset)
            if (!leq(other, candidate)) { maximal = false; break; }
        if (maximal) return candidate;
    }
    return std::nullopt;
}

std::vector<int> FinitePoset::atoms() const {
    const auto bot = bottom();
    if (!bot) return {};
    std::vector<int> result;
    for (std::size_t a = 0; a < size(); ++a) {
        const int ai = static_cast<int>(a);
        if (ai == *bot) continue;
        bool atom = true;
        for (std::size_t x = 0; x < size() && atom; ++x) {
            const int xi = static_cast<int>(x);
            if (xi == *bot || xi == ai) continue;
            if (leq(xi, ai)) atom = false;  // bot < x < a
        }
        if (atom) result.push_back(ai);
    }
    return result;
}

bool is_directed(const FinitePoset& p, const std::vector<int>& subset) {
    if (subset.empty()) throw DomainError("is_directed: directed subsets are nonempty by definition");
    for (int x : subset)
        if (x < 0 || static_cast<std::size_t>(x) >= p.size())
            throw DomainError("is_directed: index out of range");
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = a; b < subset.size(); ++b) {
            bool bounded = false;
            for (int d : subset)
                if (p.leq(subset[a], d) && p.leq(subset[b], d)) { bounded = true; break; }
            if (!bounded) return false;
        }
    return true;
}

bool is_dcpo(const FinitePoset& p) {
    check_size_guard(p, "is_dcpo");
    const std::size_t n = p.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        const auto subset = bits_to_subset(mask);
        if (!is_directed(p, subset)) continue;
        if (!p.least_upper_bound(subset)) return false;
    }
    return true;
}

bool is_chain_complete(const FinitePoset& p) {
    check_size_guard(p, "is_chain_complete");
    const std::size_t n = p.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        const auto subset = bits_to_subset(mask);
        bool chain = true;
        for (std::size_t a = 0; a < subset.size() && chain; ++a)
            for (std::size_t b = a + 1; b < subset.size() && chain; ++b)
                if (!p.leq(subset[a], subset[b]) && !p.leq(subset[b], subset[a])) chain = false;
        if (chain && !p.least_upper_bound(subset)) return false;
    }
    return true;
}

bool is_bounded_complete(const FinitePoset& p) {
    check_size_guard(p, "is_bounded_complete");
    const std::size_t n = p.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        const auto subset = bits_to_subset(mask);
        if (!p.upper_bounds(subset).empty() && !p.least_upper_bound(subset)) return false;
    }
    return true;
}

std::optional<std::pair<int, int>> monotonicity_violation(const FinitePoset& source,
                                                          const FinitePoset& target,
                                                          const std::vector<int>& table) {
    if (table.size() != source.size()) throw DomainError("monotone map table is not total");
    for (int t : table)
        if (t < 0 || static_cast<std::size_t>(t) >= target.size())
            throw DomainError("monotone map table value out of range");
    for (std::size_t x = 0; x < source.size(); ++x)
        for (std::size_t y = 0; y < source.size(); ++y)
            if (source.leq(static_cast<int>(x), static_cast<int>(y)) &&
                !target.leq(table[x], table[y]))
                return std::make_pair(static_cast<int>(x), static_cast<int>(y));
    return std::nullopt;
}

MonotoneMap::MonotoneMap(const FinitePoset& source, const FinitePoset& target,
                         std::vector<int> table)
    : source_(&source), target_(&target), table_(std::move(table)) {
    if (const auto bad = monotonicity_violation(source, target, table_))
        throw DomainError("not monotone: " + source.name(bad->first) + " <= " +
                          source.name(bad->second) + " but images are not ordered");
}

bool is_scott_continuous(const MonotoneMap& f) {
    const FinitePoset& p = f.source();
    const FinitePoset& q = f.target();
    check_size_guard(p, "is_scott_continuous");
    if (!is_dcpo(p) || !is_dcpo(q))
        throw DomainError("is_scott_continuous: posets must be dcpos");
    const std::size_t n = p.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        const auto subset = bits_to_subset(mask);
        if (!is_directed(p, subset)) continue;
        const auto lub = p.least_upper_bound(subset);
        if (!lub) return false;
        std::vector<int> image;
        for (int x : subset) image.push_back(f(x));
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        if (!is_directed(q, image)) return false;
        const auto image_lub = q.least_upper_bound(image);
        if (!image_lub || *image_lub != f(*lub)) return false;
    }
    return true;
}

WayBelowResult way_below(const FinitePoset& p) {
    check_size_guard(p, "way_below");
    if (!is_dcpo(p)) throw DomainError("way_below: poset must be a dcpo");
    const std::size_t n = p.size();

    // Collect directed subsets with their lubs once.
    std::vector<std::pair<std::vector<int>, int>> directed;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        const auto subset = bits_to_subset(mask);
        if (!is_directed(p, subset)) continue;
        const auto lub = p.least_upper_bound(subset);
        if (lub) directed.emplace_back(subset, *lub);
    }

    WayBelowResult result;
    for (int x = 0; x < static_cast<int>(n); ++x)
        for (int y = 0; y < static_cast<int>(n); ++y) {
            bool way = true;
            for (const auto& [subset, lub] : directed) {
                if (!p.leq(y, lub)) continue;
                bool witness = false;
                for (int d : subset)
                    if (p.leq(x, d)) { witness = true; break; }
                if (!witness) { way = false; break; }
            }
            if (way) result.pairs.emplace_back(x, y);
        }
    for (auto [x, y] : result.pairs)
        if (x == y) result.compact.push_back(x);
    result.atoms = p.atoms();
    return result;
}

std::vector<std::vector<int>> all_monotone_tables(const FinitePoset& source,
                                                  const FinitePoset& target) {
    std::vector<std::vector<int>> tables;
    std::vector<int> table(source.size(), 0);
    const std::size_t n = source.size();
    if (n == 0) return {{}};
    while (true) {
        if (!monotonicity_violation(source, target, table)) tables.push_back(table);
        std::size_t k = 0;
        while (k < n) {
            if (static_cast<std::size_t>(++table[k]) < target.size()) break;
            table[k] = 0;
            ++k;
        }
        if (k == n) break;
    }
    return tables;
}

FinitePoset function_poset(const FinitePoset& source, const FinitePoset& target) {
    const auto tables = all_monotone_tables(source, target);
    std::vector<std::string> names;
    names.reserve(tables.size());
    for (const auto& t : tables) {
        std::string name = "f[";
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) name += ",";
            name += std::to_string(t[i]);
        }
        name += "]";
        names.push_back(std::move(name));
    }
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < tables.size(); ++a)
        for (std::size_t b = 0; b < tables.size(); ++b) {
            if (a == b) continue;
            bool below = true;
            for (std::size_t x = 0; x < source.size() && below; ++x)
                below = target.leq(tables[a][x], tables[b][x]);
            if (below) pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    return FinitePoset(std::move(names), std::move(pairs));
}

std::vector<FinitePoset> all_posets(std::size_t n) {
    if (n > 6) throw SizeError("all_posets: enumeration limited to n <= 6");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));

    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);

    std::vector<FinitePoset> posets;
    std::vector<int> state(slots.size(), 0);  // 0: incomparable, 1: i<j, 2: j<i
    while (true) {
        std::vector<unsigned char> rel(n * n, 0);
        for (std::size_t i = 0; i < n; ++i) rel[i * n + i] = 1;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (state[s] == 1) rel[slots[s].first * n + slots[s].second] = 1;
            if (state[s] == 2) rel[slots[s].second * n + slots[s].first] = 1;
        }
        bool transitive = true;
        for (std::size_t i = 0; i < n && transitive; ++i)
            for (std::size_t j = 0; j < n && transitive; ++j) {
                if (!rel[i * n + j]) continue;
                for (std::size_t k = 0; k < n; ++k)
                    if (rel[j * n + k] && !rel[i * n + k]) { transitive = false; break; }
            }
        if (transitive) {
            std::vector<std::pair<int, int>> pairs;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j && rel[i * n + j])
                        pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
            posets.emplace_back(names, std::move(pairs));
        }
        std::size_t k = 0;
        while (k < slots.size()) {
            if (++state[k] <= 2) break;
            state[k] = 0;
            ++k;
        }
        if (k == slots.size() || slots.empty()) break;
    }
    return posets;
}

FinitePoset read_poset(std::istream& in) {
    std::vector<std::string> elements;
    std::vector<std::pair<std::string, std::string>> gens;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "elem") {
            std::string name;
            if (!(ls >> name)) throw ParseError("elem line needs a name", line_no);
            elements.push_back(name);
        } else if (kw == "leq") {
            std::string a, b;
            if (!(ls >> a >> b)) throw ParseError("leq line needs two names", line_no);
            gens.emplace_back(a, b);
        } else {
            throw ParseError("unknown keyword '" + kw + "'", line_no);
        }
    }
    try {
        return FinitePoset::from_generators(std::move(elements), gens);
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid poset: ") + e.what());
    }
}

FinitePoset parse_poset(const std::string& text) {
    std::istringstream in(text);
    return read_poset(in);
}

std::string to_text(const FinitePoset& p) {
    std::ostringstream out;
    for (const auto& e : p.elements()) out << "elem " << e << "\n";
    for (auto [i, j] : p.leq_pairs())
        if (i != j) out << "leq " << p.name(i) << " " << p.name(j) << "\n";
    return out.str();
}

}  // namespace qdom::order
