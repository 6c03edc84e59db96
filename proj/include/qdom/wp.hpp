#pragma once

#include "qdom/kraus.hpp"
#include "qdom/rational.hpp"
#include "qdom/report.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qdom::wp {

using cp::KrausItem;
using cp::KrausMap;
using cp::Transfer;
using mat::Matrix;
using wstar::AlgebraElement;
using wstar::AlgebraSignature;
using wstar::NormalState;

// Command language over a fixed ambient algebra. Classical control lives in
// direct-sum blocks (a bit is "blocks 1 1"), so one semantic category covers
// both sides. Loops take least fixed points of their Kleene sequence.
struct Program;
using ProgramPtr = std::shared_ptr<const Program>;

struct Skip {};
struct Abort {};
struct Unitary {
    std::vector<Matrix> per_block;  // one unitary per ambient block
};
struct Branch {
    std::vector<KrausItem> instrument;
    ProgramPtr body;
};
struct Measure {
    std::vector<Branch> branches;  // instruments sum to the unit across branches
};
struct ProbChoice {
    Rat p;
    ProgramPtr left, right;
};
struct Seq {
    ProgramPtr first, second;
};
struct While {
    std::vector<KrausItem> exit_items;
    std::vector<KrausItem> continue_items;
    ProgramPtr body;
};

struct Program {
    std::variant<Skip, Abort, Unitary, Measure, ProbChoice, Seq, While> node;
};

ProgramPtr make_skip();
ProgramPtr make_abort();
ProgramPtr make_unitary(std::vector<Matrix> per_block);
ProgramPtr make_measure(std::vector<Branch> branches);
ProgramPtr make_prob(Rat p, ProgramPtr left, ProgramPtr right);
ProgramPtr make_seq(ProgramPtr first, ProgramPtr second);
ProgramPtr make_while(std::vector<KrausItem> exit_items, std::vector<KrausItem> continue_items,
                      ProgramPtr body);

bool has_loop(const ProgramPtr& p);

struct FixpointOptions {
    double residual = 1e-12;   // stop when ||f_{k+1} - f_k|| falls below
    long max_iterations = 100000;
    double order_tol = 1e-9;
    bool assert_monotone = true;  // choi-mode step checks on the Kleene chain
};

struct Denotation {
    Transfer transfer;
    std::optional<KrausMap> kraus;  // present iff the program is loop-free
    long loop_iterations = 0;       // Kleene steps summed over nested loops
    double loop_residual = 0.0;     // worst final residual among loops
    bool converged = true;
};

// Throws DomainError on malformed programs (non-unitary blocks, non-unital
// instruments, signature mismatches). A loop that fails to reach the
// residual within the cap yields converged = false with the last iterate.
Denotation denote(const ProgramPtr& prog, const AlgebraSignature& ambient,
                  const FixpointOptions& opt = {});

struct WpResult {
    AlgebraElement effect;
    long iterations;
    double residual;
    bool converged;
};

WpResult wp(const ProgramPtr& prog, const AlgebraElement& post_effect,
            const FixpointOptions& opt = {});

// |<initial, wp(prog, post)> - <denote(prog)* initial, post>| <= tol, the
// state-and-effect triangle on one concrete instance.
Report duality_check(const ProgramPtr& prog, const NormalState& initial,
                     const AlgebraElement& post_effect, double tol = 1e-9,
                     const FixpointOptions& opt = {});

// Rebuilds the denotation from its effect restriction (four-positive-parts
// split) and compares transfer matrices; loop-free programs only.
Report wp_correspondence_roundtrip(const ProgramPtr& prog, const AlgebraSignature& ambient,
                                   double tol = 1e-8);

// Throws DomainError (with the offending sum's spectrum) unless the item
// sets jointly satisfy sum K*K = 1.
void validate_instrument(const std::vector<const std::vector<KrausItem>*>& sets,
                         const AlgebraSignature& ambient, double tol = 1e-9);

// --- surface syntax -----------------------------------------------------------
//
//   ambient blocks 2
//   matrix H
//   dim 2
//   ...
//   program
//   (seq (unitary H) (while (guard (exit K0) (continue K1)) (unitary H)))
//
// Items are NAME (square, block 0 -> 0) or (NAME s t).

struct ProgramFile {
    AlgebraSignature ambient;
    std::map<std::string, Matrix> named;
    ProgramPtr program;
};

ProgramFile read_program(std::istream& in);
ProgramFile parse_program(const std::string& text);

// Depth-bounded generator over skip/abort/unitary/measure/prob/seq nodes.
ProgramPtr random_loop_free(Rng& rng, const AlgebraSignature& sig, int depth);

}  // namespace qdom::wp
