#include "qdom/wp.hpp"

#include "qdom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace qdom::wp {

using mat::Complex;

ProgramPtr make_skip() { return std::make_shared<Program>(Program{Skip{}}); }
ProgramPtr make_abort() { return std::make_shared<Program>(Program{Abort{}}); }
ProgramPtr make_unitary(std::vector<Matrix> per_block) {
    return std::make_shared<Program>(Program{Unitary{std::move(per_block)}});
}
ProgramPtr make_measure(std::vector<Branch> branches) {
    return std::make_shared<Program>(Program{Measure{std::move(branches)}});
}
ProgramPtr make_prob(Rat p, ProgramPtr left, ProgramPtr right) {
    return std::make_shared<Program>(Program{ProbChoice{std::move(p), std::move(left), std::move(right)}});
}
ProgramPtr make_seq(ProgramPtr first, ProgramPtr second) {
    return std::make_shared<Program>(Program{Seq{std::move(first), std::move(second)}});
}
ProgramPtr make_while(std::vector<KrausItem> exit_items, std::vector<KrausItem> continue_items,
                      ProgramPtr body) {
    return std::make_shared<Program>(
        Program{While{std::move(exit_items), std::move(continue_items), std::move(body)}});
}

bool has_loop(const ProgramPtr& p) {
    return std::visit(
        [](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, While>) return true;
            else if constexpr (std::is_same_v<T, Seq>)
                return has_loop(node.first) || has_loop(node.second);
            else if constexpr (std::is_same_v<T, ProbChoice>)
                return has_loop(node.left) || has_loop(node.right);
            else if constexpr (std::is_same_v<T, Measure>) {
                for (const auto& b : node.branches)
                    if (has_loop(b.body)) return true;
                return false;
            } else
                return false;
        },
        p->node);
}

void validate_instrument(const std::vector<const std::vector<KrausItem>*>& sets,
                         const AlgebraSignature& ambient, double tol) {
    AlgebraElement total(ambient);
    for (const auto* set : sets)
        for (const auto& it : *set) {
            if (it.src_block >= ambient.num_blocks() || it.dst_block >= ambient.num_blocks())
                throw DomainError("instrument item block out of range");
            if (it.k.rows() != ambient.block_dim(it.src_block) ||
                it.k.cols() != ambient.block_dim(it.dst_block))
                throw DomainError("instrument item shape mismatch");
            // sum K* K lands in the target block of each item.
            total.block(it.dst_block) += it.k.adjoint() * it.k;
        }
    const AlgebraElement unit = AlgebraElement::unit(ambient);
    if (wstar::stack_norm(total - unit) > tol * 10) {
        std::string spectrum;
        for (std::size_t b = 0; b < ambient.num_blocks(); ++b) {
            const auto dec = mat::hermitian_eigen(total.block(b), 1e-6);
            spectrum += (b ? " | " : "");
            for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
                if (k) spectrum += " ";
                spectrum += std::to_string(dec.eigenvalues[k]);
            }
        }
        throw DomainError("instrument is not unital; spectrum of sum K*K: " + spectrum);
    }
}

namespace {

Denotation denote_impl(const ProgramPtr& prog, const AlgebraSignature& sig,
                       const FixpointOptions& opt);

Denotation combine_stats(Denotation d, const Denotation& other) {
    d.loop_iterations += other.loop_iterations;
    d.loop_residual = std::max(d.loop_residual, other.loop_residual);
    d.converged = d.converged && other.converged;
    return d;
}

Denotation denote_while(const While& w, const AlgebraSignature& sig, const FixpointOptions& opt) {
    validate_instrument({&w.exit_items, &w.continue_items}, sig);
    Denotation body = denote_impl(w.body, sig, opt);

    const KrausMap exit_map(sig, sig, w.exit_items);
    const KrausMap cont_map(sig, sig, w.continue_items);
    const Transfer t_exit = Transfer::from_kraus(exit_map);
    const Transfer t_cont = Transfer::from_kraus(cont_map);

    // Kleene chain from the zero map: f_{k+1} = exit + cont . body . f_k
    // (in diagram order; as matrices T_{k+1} = T_E + T_C T_B T_k).
    const Matrix step = t_cont.matrix() * body.transfer.matrix();
    Transfer prev(sig, sig);  // zero: the bottom of the map order
    long iters = 0;
    double residual = 0;
    bool converged = false;
    while (iters < opt.max_iterations) {
        Transfer next(sig, sig, t_exit.matrix() + step * prev.matrix());
        ++iters;
        residual = cp::distance(next, prev);
        if (opt.assert_monotone && (iters <= 64 || iters % 16 == 0)) {
            const auto ord = cp::loewner_leq_transfers(prev, next, opt.order_tol,
                                                       cp::OrderMode::choi);
            if (!ord.leq)
                throw OrderViolation("Kleene iterates not monotone at step " +
                                     std::to_string(iters));
        }
        prev = std::move(next);
        if (residual <= opt.residual) {
            converged = true;
            break;
        }
    }
    Denotation out{std::move(prev), std::nullopt, iters, residual, converged};
    return combine_stats(std::move(out), body);
}

Denotation denote_impl(const ProgramPtr& prog, const AlgebraSignature& sig,
                       const FixpointOptions& opt) {
    return std::visit(
        [&](const auto& node) -> Denotation {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Skip>) {
                auto k = KrausMap::identity(sig);
                return {Transfer::from_kraus(k), std::move(k), 0, 0.0, true};
            } else if constexpr (std::is_same_v<T, Abort>) {
                auto k = KrausMap::zero(sig, sig);
                return {Transfer(sig, sig), std::move(k), 0, 0.0, true};
            } else if constexpr (std::is_same_v<T, Unitary>) {
                if (node.per_block.size() != sig.num_blocks())
                    throw DomainError("unitary: one block matrix per ambient block required");
                for (std::size_t b = 0; b < sig.num_blocks(); ++b) {
                    const auto& u = node.per_block[b];
                    if (u.dim() != sig.block_dim(b))
                        throw DomainError("unitary block dimension mismatch");
                    const Matrix gram = u.adjoint() * u;
                    if (mat::frobenius_norm(gram - Matrix::identity(u.dim())) > 1e-8)
                        throw DomainError("block matrix is not unitary");
                }
                auto k = KrausMap::unitary_conjugation(sig, node.per_block);
                return {Transfer::from_kraus(k), std::move(k), 0, 0.0, true};
            } else if constexpr (std::is_same_v<T, Measure>) {
                std::vector<const std::vector<KrausItem>*> sets;
                for (const auto& b : node.branches) sets.push_back(&b.instrument);
                validate_instrument(sets, sig);
                Denotation total{Transfer(sig, sig), KrausMap::zero(sig, sig), 0, 0.0, true};
                std::vector<KrausItem> kraus_items;
                bool kraus_ok = true;
                for (const auto& br : node.branches) {
                    Denotation body = denote_impl(br.body, sig, opt);
                    const KrausMap instr(sig, sig, br.instrument);
                    // q |-> sum K* (body q) K: instrument applied outside.
                    total.transfer +=
                        compose(body.transfer, Transfer::from_kraus(instr));
                    if (body.kraus && kraus_ok) {
                        const KrausMap combined = compose(*body.kraus, instr);
                        for (const auto& it : combined.items()) kraus_items.push_back(it);
                    } else {
                        kraus_ok = false;
                    }
                    total = combine_stats(std::move(total), body);
                }
                if (kraus_ok)
                    total.kraus = KrausMap(sig, sig, std::move(kraus_items));
                else
                    total.kraus.reset();
                return total;
            } else if constexpr (std::is_same_v<T, ProbChoice>) {
                if (node.p < 0 || node.p > 1) throw DomainError("prob outside [0,1]");
                Denotation l = denote_impl(node.left, sig, opt);
                Denotation r = denote_impl(node.right, sig, opt);
                const double p = to_double(node.p);
                Denotation out{Transfer(sig, sig), std::nullopt, 0, 0.0, true};
                out.transfer = Complex(p, 0) * l.transfer + Complex(1 - p, 0) * r.transfer;
                if (l.kraus && r.kraus)
                    out.kraus = KrausMap::convex_sum(p, *l.kraus, *r.kraus);
                out = combine_stats(std::move(out), l);
                out = combine_stats(std::move(out), r);
                return out;
            } else if constexpr (std::is_same_v<T, Seq>) {
                Denotation a = denote_impl(node.first, sig, opt);
                Denotation b = denote_impl(node.second, sig, opt);
                Denotation out{compose(b.transfer, a.transfer), std::nullopt, 0, 0.0, true};
                if (a.kraus && b.kraus) out.kraus = compose(*b.kraus, *a.kraus);
                out = combine_stats(std::move(out), a);
                out = combine_stats(std::move(out), b);
                return out;
            } else {
                return denote_while(node, sig, opt);
            }
        },
        prog->node);
}

}  // namespace

Denotation denote(const ProgramPtr& prog, const AlgebraSignature& ambient,
                  const FixpointOptions& opt) {
    return denote_impl(prog, ambient, opt);
}

WpResult wp(const ProgramPtr& prog, const AlgebraElement& post_effect,
            const FixpointOptions& opt) {
    if (!wstar::is_effect(post_effect, 1e-7))
        throw DomainError("wp: postcondition is not an effect");
    const auto den = denote(prog, post_effect.signature(), opt);
    return {den.transfer.apply(post_effect), den.loop_iterations, den.loop_residual,
            den.converged};
}

Report duality_check(const ProgramPtr& prog, const NormalState& initial,
                     const AlgebraElement& post_effect, double tol,
                     const FixpointOptions& opt) {
    Report report;
    report.suite = "wp/duality";
    report.tol = tol;
    const auto& sig = post_effect.signature();
    if (initial.signature() != sig)
        throw DomainError("duality_check: state and effect signatures differ");

    const auto den = denote(prog, sig, opt);
    const Complex lhs = wstar::pairing(initial, den.transfer.apply(post_effect));

    AlgebraElement state_elem(sig);
    for (std::size_t b = 0; b < sig.num_blocks(); ++b) state_elem.block(b) = initial.rho(b);
    const AlgebraElement pushed = cp::dual_transfer(den.transfer).apply(state_elem);
    Complex rhs = 0;
    for (std::size_t b = 0; b < sig.num_blocks(); ++b)
        rhs += (pushed.block(b) * post_effect.block(b)).trace();

    const double gap = std::abs(lhs - rhs);
    if (gap <= tol)
        report.pass("duality.pairing", "state-and-effect triangle commutes");
    else
        report.fail("duality.pairing", "state-and-effect triangle commutes",
                    "discrepancy " + std::to_string(gap));
    if (!den.converged)
        report.skip("duality.loop-convergence", "least fixed point of the loop",
                    "loop did not converge; residual " + std::to_string(den.loop_residual));
    return report;
}

Report wp_correspondence_roundtrip(const ProgramPtr& prog, const AlgebraSignature& ambient,
                                   double tol) {
    if (has_loop(prog))
        throw DomainError(
            "wp_correspondence_roundtrip: fixed-point programs are excluded from the exact "
            "round-trip");
    Report report;
    report.suite = "wp/roundtrip";
    report.tol = tol;
    const auto den = denote(prog, ambient);
    const auto rebuilt = cp::transfer_from_effect_action(
        [&](const AlgebraElement& e) { return den.transfer.apply(e); }, ambient, ambient);
    const double gap = cp::distance(rebuilt, den.transfer);
    if (gap <= tol)
        report.pass("roundtrip.transfer", "maps are determined by their effect action");
    else
        report.fail("roundtrip.transfer", "maps are determined by their effect action",
                    "transfer distance " + std::to_string(gap));
    return report;
}

// --- surface syntax ---------------------------------------------------------------

namespace {

struct SExpr {
    std::string atom;  // empty when list
    std::vector<SExpr> list;
    bool is_atom() const { return list.empty() && !atom.empty(); }
};

std::vector<std::string> tokenize_sexpr(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (c == '(' || c == ')') {
            if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
            tokens.push_back(std::string(1, c));
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

SExpr parse_sexpr(const std::vector<std::string>& tokens, std::size_t& pos) {
    if (pos >= tokens.size()) throw ParseError("unexpected end of program expression");
    if (tokens[pos] == "(") {
        SExpr e;
        ++pos;
        while (pos < tokens.size() && tokens[pos] != ")") e.list.push_back(parse_sexpr(tokens, pos));
        if (pos >= tokens.size()) throw ParseError("unbalanced '(' in program expression");
        ++pos;  // consume ')'
        if (e.list.empty()) throw ParseError("empty list in program expression");
        return e;
    }
    if (tokens[pos] == ")") throw ParseError("unexpected ')' in program expression");
    SExpr e;
    e.atom = tokens[pos++];
    return e;
}

struct ProgramBuilder {
    const AlgebraSignature& sig;
    const std::map<std::string, Matrix>& named;

    const Matrix& lookup(const std::string& name) const {
        const auto it = named.find(name);
        if (it == named.end()) throw ParseError("unknown matrix name '" + name + "'");
        return it->second;
    }

    KrausItem build_item(const SExpr& e) const {
        if (e.is_atom()) {
            if (sig.num_blocks() != 1)
                throw ParseError("bare item '" + e.atom + "' needs (name s t) on multi-block ambient");
            return {0, 0, lookup(e.atom)};
        }
        if (e.list.size() != 3 || !e.list[0].is_atom() || !e.list[1].is_atom() ||
            !e.list[2].is_atom())
            throw ParseError("item must be NAME or (NAME s t)");
        const auto s = static_cast<std::size_t>(std::stoul(e.list[1].atom));
        const auto t = static_cast<std::size_t>(std::stoul(e.list[2].atom));
        return {s, t, lookup(e.list[0].atom)};
    }

    std::vector<KrausItem> build_items(const SExpr& e, const std::string& head) const {
        if (e.is_atom() || !e.list[0].is_atom() || e.list[0].atom != head)
            throw ParseError("expected (" + head + " ITEM...)");
        std::vector<KrausItem> items;
        for (std::size_t i = 1; i < e.list.size(); ++i) items.push_back(build_item(e.list[i]));
        if (items.empty()) throw ParseError("(" + head + ") needs at least one item");
        return items;
    }

    ProgramPtr build(const SExpr& e) const {
        if (e.is_atom()) throw ParseError("bare atom '" + e.atom + "' is not a program");
        if (!e.list[0].is_atom()) throw ParseError("program head must be a keyword");
        const std::string& head = e.list[0].atom;
        const auto arity = e.list.size() - 1;

        if (head == "skip") return make_skip();
        if (head == "abort") return make_abort();
        if (head == "unitary") {
            if (arity != sig.num_blocks())
                throw ParseError("(unitary ...) needs one matrix per ambient block");
            std::vector<Matrix> blocks;
            for (std::size_t i = 1; i < e.list.size(); ++i) {
                if (!e.list[i].is_atom()) throw ParseError("unitary arguments are matrix names");
                blocks.push_back(lookup(e.list[i].atom));
            }
            return make_unitary(std::move(blocks));
        }
        if (head == "seq") {
            if (arity < 2) throw ParseError("(seq ...) needs at least two programs");
            ProgramPtr acc = build(e.list[e.list.size() - 1]);
            for (std::size_t i = e.list.size() - 1; i-- > 1;) acc = make_seq(build(e.list[i]), acc);
            return acc;
        }
        if (head == "prob") {
            if (arity != 3 || !e.list[1].is_atom())
                throw ParseError("(prob RAT PROG PROG) expected");
            return make_prob(parse_rat_or_throw(e.list[1].atom), build(e.list[2]), build(e.list[3]));
        }
        if (head == "measure") {
            std::vector<Branch> branches;
            for (std::size_t i = 1; i < e.list.size(); ++i) {
                const auto& br = e.list[i];
                if (br.is_atom() || br.list.size() != 3 || !br.list[0].is_atom() ||
                    br.list[0].atom != "branch")
                    throw ParseError("(measure (branch (kraus ITEM...) PROG)...) expected");
                branches.push_back({build_items(br.list[1], "kraus"), build(br.list[2])});
            }
            if (branches.empty()) throw ParseError("(measure) needs branches");
            return make_measure(std::move(branches));
        }
        if (head == "while") {
            if (arity != 2) throw ParseError("(while (guard ...) BODY) expected");
            const auto& guard = e.list[1];
            if (guard.is_atom() || guard.list.size() != 3 || !guard.list[0].is_atom() ||
                guard.list[0].atom != "guard")
                throw ParseError("(guard (exit ITEM...) (continue ITEM...)) expected");
            auto exit_items = build_items(guard.list[1], "exit");
            auto cont_items = build_items(guard.list[2], "continue");
            return make_while(std::move(exit_items), std::move(cont_items), build(e.list[2]));
        }
        throw ParseError("unknown program form '" + head + "'");
    }
};

}  // namespace

ProgramFile read_program(std::istream& in) {
    std::optional<AlgebraSignature> ambient;
    std::map<std::string, Matrix> named;
    std::string line;
    std::size_t line_no = 0;
    std::string body;
    bool in_program = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (in_program) {
            const auto comment = line.find(';');
            if (comment != std::string::npos) line.resize(comment);
            body += line + "\n";
            continue;
        }
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#' || kw[0] == ';') continue;
        if (kw == "ambient") {
            std::string rest;
            std::getline(ls, rest);
            ambient = AlgebraSignature::parse(rest);
        } else if (kw == "matrix") {
            std::string name;
            if (!(ls >> name)) throw ParseError("matrix line needs a name", line_no);
            auto m = mat::read_text(in, &line_no);
            if (!m) throw ParseError("matrix '" + name + "' missing its block", line_no);
            named.emplace(std::move(name), std::move(*m));
        } else if (kw == "program") {
            in_program = true;
        } else {
            throw ParseError("unknown keyword '" + kw + "'", line_no);
        }
    }
    if (!ambient) throw ParseError("missing 'ambient blocks ...' line");
    if (!in_program) throw ParseError("missing 'program' section");

    const auto tokens = tokenize_sexpr(body);
    std::size_t pos = 0;
    const auto expr = parse_sexpr(tokens, pos);
    if (pos != tokens.size()) throw ParseError("trailing tokens after program expression");

    ProgramBuilder builder{*ambient, named};
    auto prog = builder.build(expr);

    // Instruments are rejected at parse time, not first run.
    FixpointOptions probe;
    probe.max_iterations = 1;
    probe.assert_monotone = false;
    denote(prog, *ambient, probe);

    return {*ambient, std::move(named), std::move(prog)};
}

ProgramFile parse_program(const std::string& text) {
    std::istringstream in(text);
    return read_program(in);
}

ProgramPtr random_loop_free(Rng& rng, const AlgebraSignature& sig, int depth) {
    const auto leaf = [&]() -> ProgramPtr {
        switch (rng.range(0, 3)) {
            case 0: return make_skip();
            case 1: return make_abort();
            default: {
                std::vector<Matrix> us;
                for (std::size_t b = 0; b < sig.num_blocks(); ++b)
                    us.push_back(wstar::random_unitary(rng, sig.block_dim(b)));
                return make_unitary(std::move(us));
            }
        }
    };
    if (depth <= 0) return leaf();
    switch (rng.range(0, 4)) {
        case 0: return leaf();
        case 1: return make_seq(random_loop_free(rng, sig, depth - 1),
                                random_loop_free(rng, sig, depth - 1));
        case 2: {
            const Rat p(rng.range(0, 16), 16);
            return make_prob(p, random_loop_free(rng, sig, depth - 1),
                             random_loop_free(rng, sig, depth - 1));
        }
        default: {
            // Two-outcome projective instrument, unitarily rotated per block.
            std::vector<KrausItem> first, second;
            for (std::size_t b = 0; b < sig.num_blocks(); ++b) {
                const std::size_t n = sig.block_dim(b);
                const Matrix u = wstar::random_unitary(rng, n);
                const auto rank = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(n)));
                Matrix p0(n, n), p1(n, n);
                for (std::size_t k = 0; k < n; ++k) (k < rank ? p0 : p1).at(k, k) = 1.0;
                first.push_back({b, b, p0 * u});
                second.push_back({b, b, p1 * u});
            }
            return make_measure({Branch{std::move(first), random_loop_free(rng, sig, depth - 1)},
                                 Branch{std::move(second), random_loop_free(rng, sig, depth - 1)}});
        }
    }
}

}  // namespace qdom::wp
