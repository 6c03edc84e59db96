#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qdom {

enum class Verdict { pass, fail, skip };

std::string to_string(Verdict v);

// One executed check. `ref` names the mathematical law or classical theorem
// the check exercises; it lands in the report's `paper_ref` field.
struct Check {
    std::string name;
    std::string ref;
    Verdict verdict = Verdict::pass;
    std::optional<std::string> witness;  // populated on fail (and some skips)
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::vector<Check> checks;

    void add(Check c) { checks.push_back(std::move(c)); }
    void pass(std::string name, std::string ref);
    void fail(std::string name, std::string ref, std::string witness);
    void skip(std::string name, std::string ref, std::string why);
    void merge(const Report& other);

    bool all_pass() const;
    std::size_t failures() const;

    // Canonical order: checks sorted by name; ties keep insertion order.
    void canonicalize();

    std::string to_text() const;
    std::string to_json() const;  // canonicalizes implicitly
};

// The stable JSON layout emitted by to_json(), as human-readable schema text.
std::string report_schema();

}  // namespace qdom
