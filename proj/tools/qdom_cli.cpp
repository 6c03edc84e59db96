// Command-line front end: law suites, wp runs, map-order checks and lubs,
// counterexample demos, projection-lattice and commutant computations.
// Reports are deterministic for a fixed argv and seed.

#include "qdom/counterexamples.hpp"
#include "qdom/effect_algebra.hpp"
#include "qdom/errors.hpp"
#include "qdom/kraus.hpp"
#include "qdom/poset.hpp"
#include "qdom/report.hpp"
#include "qdom/suites.hpp"
#include "qdom/wp.hpp"
#include "qdom/wstar.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace qdom;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

struct Options {
    std::uint64_t seed = 0;
    double tol = 1e-9;
    bool json = false;
};

int finish(const Report& r, const Options& opt) {
    std::cout << (opt.json ? r.to_json() : r.to_text());
    return r.all_pass() ? kExitPass : kExitCheckFailed;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return in;
}

mat::Matrix load_matrix(const std::string& path) {
    auto in = open_or_throw(path);
    auto m = mat::read_text(in);
    if (!m) throw ParseError("no matrix block in '" + path + "'");
    return *m;
}

std::vector<mat::Matrix> load_matrices(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<mat::Matrix> ms;
    std::size_t line = 0;
    while (auto m = mat::read_text(in, &line)) ms.push_back(std::move(*m));
    if (ms.empty()) throw ParseError("no matrix blocks in '" + path + "'");
    return ms;
}

cp::KrausMap load_kraus(const std::string& path) {
    auto in = open_or_throw(path);
    return cp::read_kraus(in);
}

cex::PiecewiseLinear load_pl(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<Rat> xs, ys;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string a, b;
        if (!(ls >> a) || a[0] == '#') continue;
        if (!(ls >> b)) throw ParseError("expected 'x y' rationals", line_no);
        xs.push_back(parse_rat_or_throw(a));
        ys.push_back(parse_rat_or_throw(b));
    }
    return cex::PiecewiseLinear(std::move(xs), std::move(ys));
}

// --- laws ---------------------------------------------------------------------

int run_laws_effect_algebra(const Options& opt, std::size_t samples,
                            const std::string& table_file) {
    Report report = suites::effect_algebra_suite(opt.seed, opt.tol, samples);
    if (!table_file.empty()) {
        auto in = open_or_throw(table_file);
        auto loaded = effects::read_table(in);
        Rng rng(opt.seed);
        report.merge(loaded.inconsistencies);
        auto laws = effects::check_laws(loaded.table, effects::Structure::ea,
                                        loaded.table.sample(rng, 0), rng);
        for (auto& c : laws.checks) {
            c.name = "loaded-table." + c.name;
            report.add(std::move(c));
        }
    }
    return finish(report, opt);
}

int run_laws_discrete(const Options& opt, std::size_t instances) {
    Report report = suites::discrete_suite(opt.seed, instances);
    return finish(report, opt);
}

int run_laws_order_core(const Options& opt, std::size_t max_elems, const std::string& file) {
    Report report;
    if (file.empty()) {
        report = suites::order_core_suite(max_elems);
    } else {
        auto in = open_or_throw(file);
        const auto p = order::read_poset(in);
        report.suite = "laws/order-core";
        report.pass("poset.axioms", "reflexive, antisymmetric, transitive");
        if (order::is_dcpo(p))
            report.pass("poset.is-dcpo", "every directed subset has a least upper bound");
        else
            report.fail("poset.is-dcpo", "every directed subset has a least upper bound", "");
        const auto wb = order::way_below(p);
        if (wb.pairs == p.leq_pairs())
            report.pass("poset.way-below-collapse", "way-below equals the order on finite dcpos");
        else
            report.fail("poset.way-below-collapse", "way-below equals the order on finite dcpos",
                        "sets differ");
        std::string atoms;
        for (int a : wb.atoms) atoms += p.name(a) + " ";
        report.skip("poset.atoms", "minimal nonzero elements",
                    atoms.empty() ? "none (no bottom or no atoms)" : atoms);
    }
    return finish(report, opt);
}

// --- wp ------------------------------------------------------------------------

int run_wp(const Options& opt, const std::string& program_file, const std::string& post_file,
           const std::string& state_file, long max_iters, double residual) {
    auto in = open_or_throw(program_file);
    const auto pf = wp::read_program(in);

    auto post_in = open_or_throw(post_file);
    const auto post = wstar::read_element(post_in, pf.ambient);

    wp::FixpointOptions fpo;
    fpo.max_iterations = max_iters;
    fpo.residual = residual;
    fpo.order_tol = opt.tol;

    const auto result = wp::wp(pf.program, post, fpo);
    std::cout << "wp effect:\n" << wstar::to_text(result.effect);
    std::cout << "loop iterations: " << result.iterations
              << "  residual: " << result.residual
              << "  converged: " << (result.converged ? "yes" : "no") << "\n";

    Report report;
    report.suite = "wp/run";
    report.seed = opt.seed;
    report.tol = opt.tol;
    if (wstar::is_effect(result.effect, std::max(opt.tol, 1e-7)))
        report.pass("wp.effect-invariant", "predicate transformers preserve effects");
    else
        report.fail("wp.effect-invariant", "predicate transformers preserve effects",
                    "output leaves the effect interval");

    if (!state_file.empty()) {
        auto state_in = open_or_throw(state_file);
        const auto state_elem = wstar::read_element(state_in, pf.ambient);
        std::vector<mat::Matrix> rho;
        for (std::size_t b = 0; b < pf.ambient.num_blocks(); ++b)
            rho.push_back(state_elem.block(b));
        const wstar::NormalState initial(pf.ambient, std::move(rho), opt.tol);

        // Both sides of the duality: predicate side and state side.
        const auto den = wp::denote(pf.program, pf.ambient, fpo);
        const mat::Complex forward = wstar::pairing(initial, result.effect);
        const auto pushed = cp::dual_transfer(den.transfer).apply(state_elem);
        mat::Complex backward = 0;
        for (std::size_t b = 0; b < pf.ambient.num_blocks(); ++b)
            backward += (pushed.block(b) * post.block(b)).trace();
        std::cout.precision(12);
        std::cout << "pairing <state, wp(program, post)> = " << forward.real() << "\n";
        std::cout << "pairing <program_* state, post>    = " << backward.real() << "\n";

        const auto dual = wp::duality_check(pf.program, initial, post, std::max(opt.tol, 1e-9), fpo);
        report.merge(dual);
    }
    return finish(report, opt);
}

// --- order (map order) ------------------------------------------------------------

int run_order_check(const Options& opt, const std::string& f_file, const std::string& g_file,
                    const std::string& mode) {
    const auto f = load_kraus(f_file);
    const auto g = load_kraus(g_file);
    Rng rng(opt.seed);
    const auto m = mode == "sampled" ? cp::OrderMode::sampled : cp::OrderMode::choi;
    const auto verdict = cp::loewner_leq_maps(f, g, opt.tol, m, &rng);
    Report report;
    report.suite = "order/check";
    report.seed = opt.seed;
    report.tol = opt.tol;
    if (verdict.leq)
        report.pass("order.leq[" + mode + "]", "pointwise order on positive inputs");
    else
        report.fail("order.leq[" + mode + "]", "pointwise order on positive inputs", verdict.note);
    std::cout << "note: " << verdict.note << "\n";
    return finish(report, opt);
}

int run_order_lub(const Options& opt, const std::vector<std::string>& files) {
    std::vector<cp::KrausMap> maps;
    for (const auto& f : files) maps.push_back(load_kraus(f));
    Report report;
    report.suite = "order/lub";
    report.seed = opt.seed;
    report.tol = opt.tol;

    cp::MapLubResult result = [&] {
        if (maps.size() == 1) {
            // Geometric staircase underneath a single sub-unital map.
            const auto& f = maps.front();
            return cp::lub_monotone_maps(
                [&f](long k) { return f.scaled(1.0 - std::pow(2.0, -double(k))); }, opt.tol);
        }
        // Finite monotone prefix extended constantly.
        return cp::lub_monotone_maps(
            [&maps](long k) {
                const auto idx = std::min<std::size_t>(static_cast<std::size_t>(k), maps.size() - 1);
                return maps[idx];
            },
            opt.tol);
    }();

    report.pass("lub.monotone-prefix", "sequence increases in the map order");
    report.pass("lub.converged", "entrywise transfer limit reached");
    std::cout << "iterations: " << result.iterations << "  residual: " << result.residual
              << "\nlub transfer matrix:\n";
    mat::write_text(std::cout, result.lub.matrix());
    return finish(report, opt);
}

// --- demos -------------------------------------------------------------------------

int run_demo_no_lub(const Options& opt, const std::string& g_file, const std::string& delta_text) {
    const auto g = g_file.empty() ? cex::PiecewiseLinear::constant(Rat(1)) : load_pl(g_file);
    const Rat delta = parse_rat_or_throw(delta_text);
    const auto witness = cex::no_least_upper_bound_witness(g, delta);
    std::cout << "upper bound g:  " << g.to_string() << "\n";
    std::cout << "improved bound: " << witness.improved.to_string() << "\n";
    std::cout << "strictly below g at x = " << rat_to_string(witness.strict_point)
              << " (delta used: " << rat_to_string(witness.used_delta) << ")\n";

    Report report;
    report.suite = "demo/no-lub";
    report.tol = opt.tol;
    const bool sound = cex::dominates_chain(witness.improved) &&
                       cex::pl_leq(witness.improved, g) &&
                       witness.improved(witness.strict_point) < g(witness.strict_point);
    if (sound)
        report.pass("no-lub.witness", "no upper bound of the chain is least");
    else
        report.fail("no-lub.witness", "no upper bound of the chain is least",
                    "produced bound is not a strict improvement");
    return finish(report, opt);
}

int run_demo_ell2(const Options& opt, unsigned n, bool csv) {
    Report report;
    report.suite = "demo/ell2";
    report.tol = opt.tol;
    bool match = true, decreasing = true, never_below = true;
    double prev = 2.0;
    std::ostringstream rows;
    rows.precision(15);
    for (unsigned k = 2; k <= n; ++k) {
        const auto row = cex::ell2_truncation_demo(k);
        rows << row.n << ", " << row.distance << "\n";
        if (std::abs(row.distance - cex::ell2_distance_closed_form(k)) > 1e-12) match = false;
        if (row.distance >= prev) decreasing = false;
        if (row.p1_below_join) never_below = false;
        prev = row.distance;
    }
    if (csv) std::cout << "n, distance\n" << rows.str();
    auto emit = [&report](const std::string& name, const std::string& ref, bool ok) {
        if (ok)
            report.pass(name, ref);
        else
            report.fail(name, ref, "see csv rows");
    };
    emit("ell2.closed-form", "distance equals 1/sqrt(1 + sum k^2)", match);
    emit("ell2.strictly-decreasing", "distances shrink with the truncation", decreasing);
    emit("ell2.join-never-dominates", "no finite join dominates the first projection",
         never_below);
    return finish(report, opt);
}

// --- lattice -------------------------------------------------------------------------

int run_lattice(const Options& opt, const std::string& p_file, const std::string& q_file) {
    const auto p = load_matrix(p_file);
    const auto q = load_matrix(q_file);
    const auto ops = cex::projection_lattice_ops(p, q, opt.tol);
    std::cout << "meet:\n";
    mat::write_text(std::cout, ops.meet);
    std::cout << "join:\n";
    mat::write_text(std::cout, ops.join);
    std::cout << "p <= q: " << (ops.leq ? "yes" : "no") << "\n";
    std::cout << "atoms of join: " << ops.atoms_of_join.size() << "\n";

    Report report;
    report.suite = "lattice/ops";
    report.tol = opt.tol;
    const bool meets_ok = cex::is_projection(ops.meet, std::max(opt.tol, 1e-7)) &&
                          cex::is_projection(ops.join, std::max(opt.tol, 1e-7));
    if (meets_ok)
        report.pass("lattice.outputs-are-projections", "meet and join are projections");
    else
        report.fail("lattice.outputs-are-projections", "meet and join are projections", "");
    return finish(report, opt);
}

// --- commutant -------------------------------------------------------------------------

int run_commutant(const Options& opt, const std::string& file, bool bicomm, bool close) {
    const auto gens = load_matrices(file);
    Report report;
    report.suite = "commutant/run";
    report.tol = opt.tol;
    if (bicomm) {
        const auto result = wstar::bicommutant_check(gens, close, std::max(opt.tol, 1e-8));
        std::cout << "dim span(*-algebra) = " << result.span_dim
                  << "\ndim commutant = " << result.commutant_dim
                  << "\ndim bicommutant = " << result.bicommutant_dim << "\n";
        report.merge(result.report);
    } else {
        const auto basis = wstar::commutant(gens);
        std::cout << "commutant dimension: " << basis.dim() << "\n";
        for (const auto& b : basis.basis) mat::write_text(std::cout, b);
        report.pass("commutant.basis", "orthonormal null-space basis of the commutator system");
    }
    return finish(report, opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Executable quantum domain theory at desk scale"};
    app.require_subcommand(0, 1);
    app.fallthrough();  // global --seed/--tol/--json apply after subcommands

    Options opt;
    bool print_schema = false;
    app.add_flag("--schema", print_schema, "print the JSON report schema and exit");
    app.add_option("--seed", opt.seed, "deterministic sampling seed")->capture_default_str();
    app.add_option("--tol", opt.tol, "tolerance for numeric predicates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--json", opt.json, "emit the machine-readable report");

    // laws
    auto* laws = app.add_subcommand("laws", "algebra and monad law suites");
    laws->require_subcommand(1);
    std::size_t samples = 64;
    std::string table_file;
    auto* laws_ea = laws->add_subcommand("effect-algebra", "partial-monoid through module laws");
    laws_ea->add_option("--samples", samples, "sampled elements per carrier")
        ->capture_default_str();
    laws_ea->add_option("--table", table_file, "extra finite table (sum/perp lines) to check");
    std::size_t instances = 200;
    auto* laws_d = laws->add_subcommand("discrete", "subdistribution monad suite");
    laws_d->add_option("--instances", instances, "random instances")->capture_default_str();
    std::size_t max_elems = 4;
    std::string poset_file;
    auto* laws_o = laws->add_subcommand("order-core", "finite poset sweeps");
    laws_o->add_option("--max-elems", max_elems, "exhaustive sweep bound")->capture_default_str();
    laws_o->add_option("--file", poset_file, "check one poset file instead");

    // wp
    auto* wp_cmd = app.add_subcommand("wp", "weakest preconditions");
    wp_cmd->require_subcommand(1);
    auto* wp_run = wp_cmd->add_subcommand("run", "run wp on a program file");
    std::string program_file, post_file, state_file;
    long wp_iters = 100000;
    double wp_residual = 1e-12;
    wp_run->add_option("--program", program_file, "program file")->required();
    wp_run->add_option("--post", post_file, "postcondition effect (matrix blocks)")->required();
    wp_run->add_option("--state", state_file, "initial state (density blocks)");
    wp_run->add_option("--max-iters", wp_iters, "loop iteration cap")->capture_default_str();
    wp_run->add_option("--residual", wp_residual, "loop stopping residual")->capture_default_str();

    // order
    auto* order_cmd = app.add_subcommand("order", "the pointwise order on maps");
    order_cmd->require_subcommand(1);
    auto* order_check = order_cmd->add_subcommand("check", "compare two Kraus maps");
    std::string f_file, g_file, mode = "choi";
    order_check->add_option("f", f_file, "left map file")->required();
    order_check->add_option("g", g_file, "right map file")->required();
    order_check->add_option("--mode", mode, "choi | sampled")
        ->check(CLI::IsMember({"choi", "sampled"}))
        ->capture_default_str();
    auto* order_lub = order_cmd->add_subcommand("lub", "least upper bound of a monotone family");
    std::vector<std::string> lub_files;
    order_lub->add_option("maps", lub_files, "map files (one: geometric staircase demo)")
        ->required();

    // demo
    auto* demo = app.add_subcommand("demo", "counterexample demos");
    demo->require_subcommand(1);
    auto* demo_nolub = demo->add_subcommand("no-lub", "chain with no least upper bound");
    std::string g_pl_file, delta_text = "1/8";
    demo_nolub->add_option("--g", g_pl_file, "upper bound as 'x y' rational lines");
    demo_nolub->add_option("--delta", delta_text, "initial ramp width")->capture_default_str();
    auto* demo_ell2 = demo->add_subcommand("ell2", "projection family approaching e1");
    unsigned ell2_n = 16;
    bool csv = false;
    demo_ell2->add_option("--n", ell2_n, "largest truncation")->capture_default_str();
    demo_ell2->add_flag("--csv", csv, "emit n,distance rows");

    // lattice
    auto* lattice = app.add_subcommand("lattice", "projection lattice operations");
    std::string p_file, q_file;
    lattice->add_option("--p", p_file, "projection matrix file")->required();
    lattice->add_option("--q", q_file, "projection matrix file")->required();

    // commutant
    auto* comm = app.add_subcommand("commutant", "commutant and bicommutant");
    std::string gens_file;
    bool bicomm = false, close_input = false;
    comm->add_option("--file", gens_file, "generator matrices (consecutive blocks)")->required();
    comm->add_flag("--bicommutant", bicomm, "run the double-commutant check");
    comm->add_flag("--close", close_input, "adjoin unit and adjoints first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (print_schema) {
            std::cout << report_schema();
            return kExitPass;
        }
        if (laws_ea->parsed()) return run_laws_effect_algebra(opt, samples, table_file);
        if (laws_d->parsed()) return run_laws_discrete(opt, instances);
        if (laws_o->parsed()) return run_laws_order_core(opt, max_elems, poset_file);
        if (wp_run->parsed())
            return run_wp(opt, program_file, post_file, state_file, wp_iters, wp_residual);
        if (order_check->parsed()) return run_order_check(opt, f_file, g_file, mode);
        if (order_lub->parsed()) return run_order_lub(opt, lub_files);
        if (demo_nolub->parsed()) return run_demo_no_lub(opt, g_pl_file, delta_text);
        if (demo_ell2->parsed()) return run_demo_ell2(opt, ell2_n, csv);
        if (lattice->parsed()) return run_lattice(opt, p_file, q_file);
        if (comm->parsed()) return run_commutant(opt, gens_file, bicomm, close_input);
        std::cout << app.help();
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitInput;
    }
}
