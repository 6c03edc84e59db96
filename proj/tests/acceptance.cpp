// Acceptance gate: one criterion per function, one pass/fail line each.
// Exits nonzero when any criterion fails. Tolerances are pinned in code.

#include "qdom/counterexamples.hpp"
#include "qdom/errors.hpp"
#include "qdom/kraus.hpp"
#include "qdom/poset.hpp"
#include "qdom/suites.hpp"
#include "qdom/wp.hpp"
#include "qdom/wstar.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace qdom;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

// --- 1: algebra law suites ----------------------------------------------------

bool criterion_algebra_laws(std::string& detail) {
    const auto start = Clock::now();
    const auto report = suites::effect_algebra_suite(/*seed=*/0, /*tol=*/1e-9, /*samples=*/64);
    const double elapsed = seconds_since(start);
    detail = std::to_string(report.checks.size()) + " checks, " +
             std::to_string(report.failures()) + " failures, " + std::to_string(elapsed) + " s";
    if (!report.all_pass()) {
        for (const auto& c : report.checks)
            if (c.verdict == Verdict::fail) detail += " | " + c.name;
        return false;
    }
    return elapsed < 5.0;
}

// --- 2: subdistribution monad -------------------------------------------------

bool criterion_subdistribution(std::string& detail) {
    const auto report = suites::discrete_suite(/*seed=*/0, /*instances=*/200);
    detail = std::to_string(report.checks.size()) + " checks, " +
             std::to_string(report.failures()) + " failures";
    return report.all_pass();
}

// --- 3: effect and map lubs ------------------------------------------------------

bool criterion_lub_machinery(std::string& detail) {
    const auto start = Clock::now();
    const double tol = 1e-9;
    Rng rng(3);

    const std::vector<wstar::AlgebraSignature> sigs{wstar::AlgebraSignature({4}),
                                                    wstar::AlgebraSignature({2, 2})};
    int effect_runs = 0;
    for (int t = 0; t < 100; ++t) {
        const auto& sig = sigs[static_cast<std::size_t>(t) % sigs.size()];
        // e_k = base + (1 - 2^-k) step, kept inside the effect interval.
        auto base = wstar::random_effect(rng, sig);
        base *= mat::Complex(0.35, 0);
        auto step = wstar::random_psd_element(rng, sig, 0.5);
        const double ns = wstar::norm(step);
        if (ns > 1e-12) step *= mat::Complex(0.55 / ns, 0);
        const auto seq = [&](long k) {
            auto e = step;
            e *= mat::Complex(1.0 - std::pow(2.0, -static_cast<double>(k)), 0);
            return base + e;
        };
        wstar::EffectLubResult result = wstar::lub_monotone_effects(seq, sig);
        if (!wstar::is_effect(result.lub, tol)) {
            detail = "lub left the effect interval";
            return false;
        }
        for (long k = 0; k < 8; ++k)
            if (!wstar::loewner_leq(seq(k), result.lub, tol)) {
                detail = "lub does not dominate a member";
                return false;
            }
        // sampled upper bounds: limit + sqrt(1-L) E sqrt(1-L) stays above
        const auto limit = base + step;
        const auto headroom = wstar::AlgebraElement::unit(sig) - limit;
        const auto root = wstar::psd_sqrt(headroom, 1e-7);
        for (int u = 0; u < 4; ++u) {
            const auto bound = limit + root * wstar::random_effect(rng, sig) * root;
            if (!wstar::loewner_leq(result.lub, bound, tol)) {
                detail = "lub exceeds a sampled upper bound";
                return false;
            }
        }
        ++effect_runs;
    }

    // map-level lubs with composition continuity
    int map_runs = 0;
    const wstar::AlgebraSignature qsig({2});
    for (int t = 0; t < 20; ++t) {
        const auto g = cp::random_subunital_map(rng, qsig, qsig);
        const auto seq = [&](long k) { return g.scaled(1.0 - std::pow(2.0, -double(k))); };
        const auto lub = cp::lub_monotone_maps(seq, tol);
        for (long k = 0; k < 6; ++k)
            if (!cp::loewner_leq_transfers(cp::Transfer::from_kraus(seq(k)), lub.lub, tol,
                                           cp::OrderMode::choi)
                     .leq) {
                detail = "map lub does not dominate a member";
                return false;
            }
        // sampled upper bound: g plus an extra CP sliver, kept sub-unital
        auto extra = cp::random_kraus_map(rng, qsig, qsig);
        const double top = wstar::norm(extra.unit_image());
        if (top > 1e-12)
            extra = extra.scaled(0.04 / top);
        auto upper_items = g.items();
        for (const auto& it : extra.items()) upper_items.push_back(it);
        const cp::KrausMap upper(qsig, qsig, upper_items);
        if (upper.sub_unital(tol) &&
            !cp::loewner_leq_transfers(lub.lub, cp::Transfer::from_kraus(upper), 1e-8,
                                       cp::OrderMode::choi)
                 .leq) {
            detail = "map lub exceeds a sampled upper bound";
            return false;
        }
        // pre/post-composition commutes with the lub (1e-8)
        const auto f = cp::random_subunital_map(rng, qsig, qsig);
        const auto tf = cp::Transfer::from_kraus(f);
        const auto pre = cp::lub_monotone_maps([&](long k) { return cp::compose(f, seq(k)); }, tol);
        if (cp::distance(pre.lub, cp::compose(tf, lub.lub)) > 1e-8) {
            detail = "precomposition does not commute with the lub";
            return false;
        }
        const auto post = cp::lub_monotone_maps([&](long k) { return cp::compose(seq(k), f); }, tol);
        if (cp::distance(post.lub, cp::compose(lub.lub, tf)) > 1e-8) {
            detail = "postcomposition does not commute with the lub";
            return false;
        }
        ++map_runs;
    }
    const double elapsed = seconds_since(start);
    detail = std::to_string(effect_runs) + " effect sequences, " + std::to_string(map_runs) +
             " map sequences, " + std::to_string(elapsed) + " s";
    return elapsed < 30.0;
}

// --- 4: wp engine -----------------------------------------------------------------

bool criterion_wp_engine(std::string& detail) {
    Rng rng(4);
    const std::vector<wstar::AlgebraSignature> sigs{
        wstar::AlgebraSignature({2}), wstar::AlgebraSignature({4}),
        wstar::AlgebraSignature({8}), wstar::AlgebraSignature({2, 2}),
        wstar::AlgebraSignature({4, 2})};

    double worst_duality = 0;
    for (int t = 0; t < 500; ++t) {
        const auto& sig = sigs[static_cast<std::size_t>(t) % sigs.size()];
        const auto prog = wp::random_loop_free(rng, sig, 5);
        const auto den = wp::denote(prog, sig);
        const auto state = wstar::random_state(rng, sig);
        const auto post = wstar::random_effect(rng, sig);
        const auto lhs = wstar::pairing(state, den.transfer.apply(post));
        wstar::AlgebraElement selem(sig);
        for (std::size_t b = 0; b < sig.num_blocks(); ++b) selem.block(b) = state.rho(b);
        const auto pushed = cp::dual_transfer(den.transfer).apply(selem);
        mat::Complex rhs = 0;
        for (std::size_t b = 0; b < sig.num_blocks(); ++b)
            rhs += (pushed.block(b) * post.block(b)).trace();
        worst_duality = std::max(worst_duality, std::abs(lhs - rhs));
    }
    if (worst_duality > 1e-9) {
        detail = "duality discrepancy " + std::to_string(worst_duality);
        return false;
    }

    // coin loop: wp(while, 1) within 1e-6 of the unit in at most 30 steps
    mat::Matrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h.at(0, 0) = s;
    h.at(0, 1) = s;
    h.at(1, 0) = s;
    h.at(1, 1) = -s;
    mat::Matrix k0(2, 2), k1(2, 2);
    k0.at(0, 0) = 1;
    k1.at(1, 1) = 1;
    const auto loop =
        wp::make_while({{0, 0, k0}}, {{0, 0, k1}}, wp::make_unitary({h}));
    wp::FixpointOptions cap;
    cap.max_iterations = 30;
    cap.residual = 0;
    const wstar::AlgebraSignature qsig({2});
    const auto capped = wp::wp(loop, wstar::AlgebraElement::unit(qsig), cap);
    const double loop_gap = wstar::stack_norm(capped.effect - wstar::AlgebraElement::unit(qsig));
    if (loop_gap > 1e-6 || capped.iterations > 30) {
        detail = "coin loop gap " + std::to_string(loop_gap) + " after " +
                 std::to_string(capped.iterations) + " iterations";
        return false;
    }

    double worst_seq = 0;
    for (int t = 0; t < 100; ++t) {
        const auto a = wp::random_loop_free(rng, qsig, 3);
        const auto b = wp::random_loop_free(rng, qsig, 3);
        const auto q = wstar::random_effect(rng, qsig);
        const auto lhs = wp::wp(wp::make_seq(a, b), q).effect;
        const auto rhs = wp::wp(a, wp::wp(b, q).effect).effect;
        worst_seq = std::max(worst_seq, wstar::stack_norm(lhs - rhs));
    }
    if (worst_seq > 1e-10) {
        detail = "sequencing discrepancy " + std::to_string(worst_seq);
        return false;
    }
    detail = "duality " + std::to_string(worst_duality) + ", coin-loop gap " +
             std::to_string(loop_gap) + " in " + std::to_string(capped.iterations) +
             " iterations, seq " + std::to_string(worst_seq);
    return true;
}

// --- 5: commutant and bicommutant ----------------------------------------------------

bool criterion_commutant(std::string& detail) {
    const auto dim_identity = wstar::commutant({mat::Matrix::identity(2)}).dim();
    mat::Matrix d12(2, 2);
    d12.at(0, 0) = 1;
    d12.at(1, 1) = 2;
    const auto dim_diag = wstar::commutant({d12}).dim();
    const std::vector<mat::Matrix> full{mat::Matrix::identity(2), mat::matrix_unit(2, 0, 1),
                                        mat::matrix_unit(2, 1, 0), mat::matrix_unit(2, 0, 0)};
    const auto dim_full = wstar::commutant(full).dim();
    if (dim_identity != 4 || dim_diag != 2 || dim_full != 1) {
        detail = "canonical dims (" + std::to_string(dim_identity) + "," +
                 std::to_string(dim_diag) + "," + std::to_string(dim_full) + ") != (4,2,1)";
        return false;
    }

    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        std::vector<mat::Matrix> gens;
        const auto count = 1 + rng.range(0, 1);
        for (int g = 0; g < count; ++g) gens.push_back(wstar::random_matrix(rng, 3));
        const auto result = wstar::bicommutant_check(gens, /*close_input=*/true, 1e-8);
        if (!result.report.all_pass()) {
            detail = "random generator set " + std::to_string(t) + " failed: " +
                     result.report.to_text();
            return false;
        }
    }
    detail = "canonical dims (4,2,1); 50 random generator sets in M3 pass at 1e-8";
    return true;
}

// --- 6: counterexamples -----------------------------------------------------------

bool criterion_counterexamples(std::string& detail) {
    Rng rng(6);
    for (int t = 0; t < 20; ++t) {
        const auto g = cex::random_chain_upper_bound(rng);
        const auto w = cex::no_least_upper_bound_witness(g, Rat(1, 8));
        const bool sound = cex::dominates_chain(w.improved) && cex::pl_leq(w.improved, g) &&
                           w.improved(w.strict_point) < g(w.strict_point);
        if (!sound) {
            detail = "witness unsound for " + g.to_string();
            return false;
        }
    }
    double prev = 1.0;
    for (unsigned n = 2; n <= 32; ++n) {
        const auto row = cex::ell2_truncation_demo(n);
        if (std::abs(row.distance - cex::ell2_distance_closed_form(n)) > 1e-12) {
            detail = "distance mismatch at n=" + std::to_string(n);
            return false;
        }
        if (row.distance >= prev) {
            detail = "distances not strictly decreasing at n=" + std::to_string(n);
            return false;
        }
        if (row.p1_below_join) {
            detail = "p1 unexpectedly below the join at n=" + std::to_string(n);
            return false;
        }
        prev = row.distance;
    }
    detail = "20 witnesses exact; ell2 distances match 1/sqrt(1+sum k^2) to 1e-12 for n=2..32";
    return true;
}

// --- 7: eigensolver substrate ---------------------------------------------------------

bool criterion_eigensolver(std::string& detail) {
    Rng rng(7);
    double worst_rec = 0, worst_orth = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 15));
        const auto h = wstar::random_hermitian(rng, n, std::pow(10.0, rng.unit() * 4 - 2));
        const auto dec = mat::hermitian_eigen(h, 1e-9);
        mat::Matrix rec(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    rec.at(i, j) += dec.eigenvalues[k] * dec.vectors.at(i, k) *
                                    std::conj(dec.vectors.at(j, k));
        const double scale = std::max(1.0, mat::operator_norm(h));
        worst_rec = std::max(worst_rec, mat::operator_norm(rec - h) / scale);
        worst_orth = std::max(
            worst_orth, mat::operator_norm(dec.vectors.adjoint() * dec.vectors -
                                           mat::Matrix::identity(n)));
    }
    detail = "worst reconstruction " + std::to_string(worst_rec) + ", worst orthonormality " +
             std::to_string(worst_orth) + " over 200 matrices, dims <= 16";
    return worst_rec <= 1e-10 && worst_orth <= 1e-10;
}

// --- 8: order-core finite collapse ------------------------------------------------------

bool criterion_order_core(std::string& detail) {
    std::size_t poset_count = 0;
    for (std::size_t n = 1; n <= 5; ++n) {
        for (const auto& p : order::all_posets(n)) {
            ++poset_count;
            if (order::way_below(p).pairs != p.leq_pairs()) {
                detail = "way-below differs from leq on " + order::to_text(p);
                return false;
            }
        }
    }

    // Size <= 4 dcpos; every pair whose monotone-map poset respects the
    // enumeration cap is checked.
    using order::FinitePoset;
    std::vector<FinitePoset> dcpos;
    dcpos.push_back(FinitePoset::from_generators({"0"}, {}));
    dcpos.push_back(FinitePoset::from_generators({"0", "1"}, {{"0", "1"}}));
    dcpos.push_back(FinitePoset::from_generators({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}}));
    dcpos.push_back(FinitePoset::from_generators({"0", "1", "2", "3"},
                                                 {{"0", "1"}, {"1", "2"}, {"2", "3"}}));
    dcpos.push_back(FinitePoset::from_generators(
        {"bot", "a", "b", "top"}, {{"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}}));
    dcpos.push_back(FinitePoset::from_generators({"a", "b"}, {}));
    dcpos.push_back(FinitePoset::from_generators({"bot", "a", "b"}, {{"bot", "a"}, {"bot", "b"}}));
    dcpos.push_back(FinitePoset::from_generators({"a", "b", "top"}, {{"a", "top"}, {"b", "top"}}));

    std::size_t pairs_checked = 0, pairs_skipped = 0;
    for (const auto& p : dcpos)
        for (const auto& q : dcpos) {
            const auto fp = order::function_poset(p, q);
            if (fp.size() > order::kMaxEnumerableElements) {
                ++pairs_skipped;  // subset-enumeration cap
                continue;
            }
            ++pairs_checked;
            if (!order::is_dcpo(fp)) {
                detail = "function poset fails is_dcpo for a pair of size <= 4 dcpos";
                return false;
            }
        }
    detail = std::to_string(poset_count) + " posets exhaustively collapsed; " +
             std::to_string(pairs_checked) + " function posets pass is_dcpo (" +
             std::to_string(pairs_skipped) + " beyond the 2^16 subset cap)";
    return true;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"1 algebra law suites (exact + 1e-9 sampled, negative controls, < 5 s)",
         criterion_algebra_laws},
        {"2 subdistribution monad exact laws, iso and wp bijection", criterion_subdistribution},
        {"3 effect/map lubs with composition continuity (1e-9 / 1e-8, < 30 s)",
         criterion_lub_machinery},
        {"4 wp engine: duality 1e-9 x500, coin loop 1e-6 in <= 30 steps, seq 1e-10",
         criterion_wp_engine},
        {"5 commutant dims (4,2,1); bicommutant identity x50 in M3 at 1e-8",
         criterion_commutant},
        {"6 counterexamples: no-lub witnesses exact x20; ell2 closed form 1e-12",
         criterion_counterexamples},
        {"7 eigensolver: reconstruction and orthonormality <= 1e-10 x200, dims <= 16",
         criterion_eigensolver},
        {"8 order-core collapse <= 5 elements; function posets are dcpos",
         criterion_order_core},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %s -- %s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criteria failed\n", failures);
    else std::printf("all acceptance criteria pass\n");
    return failures == 0 ? 0 : 1;
}
