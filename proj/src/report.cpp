#include "qdom/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace qdom {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::skip: return "skip";
    }
    return "fail";
}

void Report::pass(std::string name, std::string ref) {
    add({std::move(name), std::move(ref), Verdict::pass, std::nullopt});
}

void Report::fail(std::string name, std::string ref, std::string witness) {
    add({std::move(name), std::move(ref), Verdict::fail, std::move(witness)});
}

void Report::skip(std::string name, std::string ref, std::string why) {
    add({std::move(name), std::move(ref), Verdict::skip, std::move(why)});
}

void Report::merge(const Report& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool Report::all_pass() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const Check& c) { return c.verdict == Verdict::fail; });
}

std::size_t Report::failures() const {
    return static_cast<std::size_t>(std::count_if(
        checks.begin(), checks.end(),
        [](const Check& c) { return c.verdict == Verdict::fail; }));
}

void Report::canonicalize() {
    std::stable_sort(checks.begin(), checks.end(),
                     [](const Check& a, const Check& b) { return a.name < b.name; });
}

std::string Report::to_text() const {
    std::ostringstream out;
    out << "suite: " << suite << "  seed: " << seed << "  tol: " << tol << "\n";
    for (const auto& c : checks) {
        out << "[" << to_string(c.verdict) << "] " << c.name;
        if (c.witness) out << "  -- " << *c.witness;
        out << "\n";
    }
    out << (all_pass() ? "ALL PASS" : "FAILURES: " + std::to_string(failures()))
        << " (" << checks.size() << " checks)\n";
    return out.str();
}

std::string Report::to_json() const {
    Report sorted = *this;
    sorted.canonicalize();
    nlohmann::ordered_json j;
    j["header"] = {{"suite", sorted.suite}, {"seed", sorted.seed}, {"tol", sorted.tol}};
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : sorted.checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["paper_ref"] = c.ref;
        jc["verdict"] = to_string(c.verdict);
        jc["witness"] = c.witness ? nlohmann::ordered_json(*c.witness)
                                  : nlohmann::ordered_json(nullptr);
        j["checks"].push_back(jc);
    }
    j["all_pass"] = sorted.all_pass();
    return j.dump(2) + "\n";
}

std::string report_schema() {
    return R"({
  "header": { "suite": "string", "seed": "uint64", "tol": "number > 0" },
  "checks": [
    {
      "name": "string, unique id of the operation or invariant checked",
      "paper_ref": "string, the law or classical theorem the check exercises",
      "verdict": "one of: pass | fail | skip",
      "witness": "null on pass; string describing the violating instance otherwise"
    }
  ],
  "all_pass": "bool, true iff no check has verdict fail"
}
checks are sorted by name; identical argv and seed give byte-identical output.
)";
}

}  // namespace qdom
