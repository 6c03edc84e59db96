#include "qdom/suites.hpp"

#include "qdom/effect_algebra.hpp"
#include "qdom/errors.hpp"
#include "qdom/poset.hpp"
#include "qdom/subdist.hpp"
#include "qdom/wstar.hpp"

#include <functional>

namespace qdom::suites {

namespace {

using namespace qdom::effects;

// Prefixes every check name, so one report can hold several carrier runs.
void absorb(Report& into, Report part, const std::string& prefix) {
    for (auto& c : part.checks) {
        c.name = prefix + "." + c.name;
        into.add(std::move(c));
    }
}

// The sub-suite must FAIL on the broken structure, with a witness.
void expect_caught(Report& into, const Report& broken_run, const std::string& name) {
    bool caught = false;
    for (const auto& c : broken_run.checks)
        if (c.verdict == Verdict::fail && c.witness) caught = true;
    if (caught)
        into.pass(name, "negative control");
    else
        into.fail(name, "negative control", "broken axiom went undetected");
}

}  // namespace

Report effect_algebra_suite(std::uint64_t seed, double tol, std::size_t samples) {
    Report report;
    report.suite = "laws/effect-algebra";
    report.seed = seed;
    report.tol = tol;
    Rng rng(seed);

    // Exact regime: the rational unit interval is an effect module.
    UnitInterval ui;
    const auto ui_sample = ui.sample(rng, samples);
    absorb(report, check_laws(ui, Structure::emod, ui_sample, rng), "unit-interval");
    absorb(report, check_laws(ui, Structure::gea, ui_sample, rng), "unit-interval");
    absorb(report, check_induced_order(ui, ui_sample), "unit-interval");

    // Exact regime: finite tables, quantified over the whole carrier.
    const auto diamond = FiniteTable::diamond();
    absorb(report, check_laws(diamond, Structure::ea, diamond.sample(rng, 0), rng), "diamond");
    const auto mv3 = FiniteTable::mv_chain(3);
    absorb(report, check_laws(mv3, Structure::ea, mv3.sample(rng, 0), rng), "mv-chain");
    absorb(report, check_laws(mv3, Structure::gea, mv3.sample(rng, 0), rng), "mv-chain");
    absorb(report, check_induced_order(mv3, mv3.sample(rng, 0)), "mv-chain");

    // Tolerance regime: qubit effects and qubit-plus-scalar effects.
    {
        wstar::EffectCarrier m2(wstar::kQubit, tol);
        const auto s = m2.sample(rng, samples);
        absorb(report, check_laws(m2, Structure::emod, s, rng), "qubit-effects");
        absorb(report, check_laws(m2, Structure::gea, s, rng), "qubit-effects");
        absorb(report, check_induced_order(m2, m2.sample(rng, 10)), "qubit-effects");
        wstar::EffectCarrier m2c(wstar::AlgebraSignature({2, 1}), tol);
        const auto s2 = m2c.sample(rng, samples);
        absorb(report, check_laws(m2c, Structure::emod, s2, rng), "qubit-scalar-effects");

        // Downsets stay effect algebras (random top).
        const auto top = wstar::random_effect(rng, wstar::kQubit);
        const auto down = downset_algebra(m2, top);
        absorb(report, check_laws(down, Structure::ea, down.sample(rng, samples / 2), rng),
               "qubit-downset");
    }
    {
        const auto down = downset_algebra(ui, Rat(1, 2));
        absorb(report, check_laws(down, Structure::ea, down.sample(rng, samples), rng),
               "unit-interval-downset");
    }

    // Homomorphism examples: halving passes the non-unital laws and fails
    // the unital ones; its downset restriction restores them.
    {
        std::function<Rat(const Rat&)> halve = [](const Rat& x) { return x / 2; };
        const auto gea_run = check_homomorphism<UnitInterval, UnitInterval>(
            halve, ui, ui, HomMode::gea, ui_sample);
        const auto ea_run = check_homomorphism<UnitInterval, UnitInterval>(
            halve, ui, ui, HomMode::ea, ui_sample);
        if (gea_run.all_pass())
            report.pass("halving.gea", "non-unital homomorphism laws");
        else
            report.fail("halving.gea", "non-unital homomorphism laws", "unexpected failure");
        if (!ea_run.all_pass())
            report.pass("halving.ea-fails", "orthocomplement is not preserved");
        else
            report.fail("halving.ea-fails", "orthocomplement is not preserved",
                        "f(1) != 1 went undetected");
        absorb(report, tilde_correspondence<UnitInterval, UnitInterval>(halve, ui, ui, ui_sample),
               "halving");
    }

    // Negative controls: one broken axiom each.
    {
        auto broken = FiniteTable::diamond();
        broken.unset_sum(broken.index_of("b"), broken.index_of("a"));
        expect_caught(report, check_laws(broken, Structure::ea, broken.sample(rng, 0), rng),
                      "negative.commutativity");
    }
    {
        auto broken = FiniteTable::diamond();
        broken.set_sum(broken.index_of("0"), broken.index_of("a"), broken.index_of("b"), false);
        expect_caught(report, check_laws(broken, Structure::ea, broken.sample(rng, 0), rng),
                      "negative.zero-law");
    }
    {
        // Two orthocomplements for a: a+b = 1 and a+a = 1.
        auto broken = FiniteTable::diamond();
        broken.set_sum(broken.index_of("a"), broken.index_of("a"), broken.index_of("1"));
        expect_caught(report, check_laws(broken, Structure::ea, broken.sample(rng, 0), rng),
                      "negative.unique-complement");
    }
    {
        // a+a = a breaks cancellation against a+0 = a.
        auto broken = FiniteTable::diamond();
        broken.set_sum(broken.index_of("a"), broken.index_of("a"), broken.index_of("a"));
        expect_caught(report, check_laws(broken, Structure::gea, broken.sample(rng, 0), rng),
                      "negative.cancellation");
    }
    {
        // a+b = 0 (a,b nonzero) breaks positivity.
        auto broken = FiniteTable::diamond();
        broken.set_sum(broken.index_of("a"), broken.index_of("b"), broken.index_of("0"));
        expect_caught(report, check_laws(broken, Structure::gea, broken.sample(rng, 0), rng),
                      "negative.positivity");
    }
    {
        // Associativity: (a+b)+0 vs a+(b+0) disagree when a+b is rebound.
        auto broken = FiniteTable::mv_chain(2);
        // 1/2 + 1/2 = 1 rebound to 1/2.
        broken.set_sum(1, 1, 1);
        expect_caught(report, check_laws(broken, Structure::ea, broken.sample(rng, 0), rng),
                      "negative.associativity");
    }
    return report;
}

Report discrete_suite(std::uint64_t seed, std::size_t instances) {
    Rng rng(seed);
    Report report = subdist::discrete_law_suite(rng, instances);
    report.suite = "laws/discrete";
    report.seed = seed;
    Report adj = subdist::adjunction_maps(rng);
    report.merge(adj);
    return report;
}

Report order_core_suite(std::size_t max_elements) {
    using namespace qdom::order;
    Report report;
    report.suite = "laws/order-core";

    bool collapse = true, chain_dir = true, all_dcpo = true;
    std::string wit;
    for (std::size_t n = 1; n <= max_elements; ++n) {
        for (const auto& p : all_posets(n)) {
            if (!is_dcpo(p)) {
                all_dcpo = false;
                wit = to_text(p);
            }
            if (is_chain_complete(p) != is_dcpo(p)) {
                chain_dir = false;
                wit = to_text(p);
            }
            const auto wb = way_below(p);
            if (wb.pairs != p.leq_pairs()) {
                collapse = false;
                wit = to_text(p);
            }
        }
    }
    auto emit = [&report](const std::string& name, const std::string& ref, bool ok,
                          const std::string& w) {
        if (ok)
            report.pass(name, ref);
        else
            report.fail(name, ref, w);
    };
    emit("order.finite-posets-are-dcpos", "finite directed sets contain their maximum", all_dcpo,
         wit);
    emit("order.chain-complete-iff-directed-complete", "chain completeness equals directed completeness",
         chain_dir, wit);
    emit("order.way-below-collapse", "way-below equals the order on finite dcpos", collapse, wit);

    // Monotone-map posets between small dcpos are again dcpos; pairs are
    // chosen so the function poset respects the subset-enumeration cap.
    const auto chain2 = FinitePoset::from_generators({"0", "1"}, {{"0", "1"}});
    const auto chain3 =
        FinitePoset::from_generators({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}});
    const auto diamond = FinitePoset::from_generators(
        {"bot", "a", "b", "top"}, {{"bot", "a"}, {"bot", "b"}, {"a", "top"}, {"b", "top"}});
    const auto antichain2 = FinitePoset::from_generators({"a", "b"}, {});
    const std::vector<std::pair<const FinitePoset*, const FinitePoset*>> pairs = {
        {&chain2, &chain2},   {&chain2, &chain3},  {&chain3, &chain3},
        {&chain2, &diamond},  {&diamond, &chain2}, {&antichain2, &diamond},
        {&diamond, &antichain2}};
    bool fn_ok = true;
    std::string fn_wit;
    for (const auto& [p, q] : pairs) {
        const auto fp = function_poset(*p, *q);
        if (fp.size() > kMaxEnumerableElements) continue;
        if (!is_dcpo(fp)) {
            fn_ok = false;
            fn_wit = "function poset with " + std::to_string(fp.size()) + " maps";
        }
    }
    emit("order.function-poset-dcpo", "monotone-map posets between dcpos are dcpos", fn_ok, fn_wit);
    return report;
}

}  // namespace qdom::suites
