#include "qdom/subdist.hpp"

#include "qdom/errors.hpp"

#include <functional>

namespace qdom::subdist {

namespace {

Carrier make_carrier(std::size_t k) {
    Carrier c;
    for (std::size_t i = 0; i < k; ++i) c.push_back("x" + std::to_string(i));
    return c;
}

// Affine map D<=1(X) -> [0,1]; affinity forces f(0) = 0, so such maps are
// exactly the weightings f(phi) = sum_x phi(x) w(x).
struct AffineHom {
    FuzzyPredicate weights;
    Rat operator()(const SubDistribution& d) const { return pairing(d, weights); }
};

}  // namespace

Report discrete_law_suite(Rng& rng, std::size_t instances) {
    Report report;
    report.suite = "laws/discrete";
    report.seed = 0;

    bool left_unit = true, right_unit = true, assoc = true, iso = true, bij = true,
         dual = true, kleisli_unit = true, kleisli_assoc = true, subconvex = true;
    std::string wit_left, wit_right, wit_assoc, wit_iso, wit_bij, wit_dual, wit_ku, wit_ka,
        wit_sub;

    for (std::size_t trial = 0; trial < instances; ++trial) {
        const auto c = make_carrier(1 + static_cast<std::size_t>(rng.range(0, 4)));
        const auto d = random_subdistribution(rng, c);

        // mu(eta_D(d)) = d
        if (multiply({d}, {Rat(1)}) != d) {
            if (left_unit) wit_left = d.to_string();
            left_unit = false;
        }
        // mu(D(eta)(d)) = d
        {
            std::vector<SubDistribution> units;
            std::vector<Rat> w;
            for (const auto& x : c) {
                units.push_back(unit(x, c));
                w.push_back(d.weight(x));
            }
            if (multiply(units, w) != d) {
                if (right_unit) wit_right = d.to_string();
                right_unit = false;
            }
        }
        // mu . mu_D = mu . D(mu) over a random three-layer stack
        {
            const std::size_t outer = 1 + static_cast<std::size_t>(rng.range(0, 2));
            std::vector<Rat> w;
            std::vector<std::vector<Rat>> v(outer);
            std::vector<std::vector<SubDistribution>> phi(outer);
            Rat w_budget(1);
            for (std::size_t i = 0; i < outer; ++i) {
                Rat wi = rng.unit_rat(8) * w_budget;
                w_budget -= wi;
                w.push_back(wi);
                const std::size_t mid = 1 + static_cast<std::size_t>(rng.range(0, 2));
                Rat v_budget(1);
                for (std::size_t j = 0; j < mid; ++j) {
                    Rat vij = rng.unit_rat(8) * v_budget;
                    v_budget -= vij;
                    v[i].push_back(vij);
                    phi[i].push_back(random_subdistribution(rng, c, 8));
                }
            }
            std::vector<SubDistribution> flattened_inner;
            std::vector<Rat> flattened_w;
            for (std::size_t i = 0; i < outer; ++i)
                for (std::size_t j = 0; j < v[i].size(); ++j) {
                    flattened_inner.push_back(phi[i][j]);
                    flattened_w.push_back(w[i] * v[i][j]);
                }
            const auto route_a = multiply(flattened_inner, flattened_w);
            std::vector<SubDistribution> mids;
            for (std::size_t i = 0; i < outer; ++i) mids.push_back(multiply(phi[i], v[i]));
            const auto route_b = multiply(mids, w);
            if (route_a != route_b) {
                if (assoc) wit_assoc = route_a.to_string() + " vs " + route_b.to_string();
                assoc = false;
            }
        }
        // D<=1(X) ~ D=1(1+X)
        {
            const auto t = to_total(d);
            if (t.total() != 1 || from_total(t) != d) {
                if (iso) wit_iso = d.to_string();
                iso = false;
            }
        }

        const auto c2 = make_carrier(1 + static_cast<std::size_t>(rng.range(0, 4)));
        const auto f = random_arrow(rng, c, c2);

        // Arrow -> wp table -> arrow round-trip
        {
            const auto back = arrow_from_wp(
                [&f](const FuzzyPredicate& q) { return wp_discrete(f, q); }, c, c2);
            if (!(back == f)) {
                if (bij) wit_bij = f.to_string();
                bij = false;
            }
        }
        // Pairing duality <d, wp(f)(q)> = <f*d, q>
        {
            const auto q = random_predicate(rng, c2);
            if (pairing(d, wp_discrete(f, q)) != pairing(f.apply(d), q)) {
                if (dual) wit_dual = f.to_string();
                dual = false;
            }
        }
        // Kleisli unit and associativity
        {
            const auto idc = identity_arrow(c);
            const auto idc2 = identity_arrow(c2);
            if (!(kleisli_compose(idc, f) == f) || !(kleisli_compose(f, idc2) == f)) {
                if (kleisli_unit) wit_ku = f.to_string();
                kleisli_unit = false;
            }
            const auto c3 = make_carrier(1 + static_cast<std::size_t>(rng.range(0, 3)));
            const auto g = random_arrow(rng, c2, c3);
            const auto h = random_arrow(rng, c3, make_carrier(2));
            const auto left = kleisli_compose(kleisli_compose(f, g), h);
            const auto right = kleisli_compose(f, kleisli_compose(g, h));
            if (!(left == right)) {
                if (kleisli_assoc) wit_ka = f.to_string();
                kleisli_assoc = false;
            }
        }
        // Subconvex closure: combinations of subdistributions stay valid.
        {
            std::vector<SubDistribution> parts;
            std::vector<Rat> w;
            Rat budget(1);
            const std::size_t k = 1 + static_cast<std::size_t>(rng.range(0, 3));
            Rat expected(0);
            for (std::size_t i = 0; i < k; ++i) {
                Rat wi = rng.unit_rat(8) * budget;
                budget -= wi;
                parts.push_back(random_subdistribution(rng, c, 8));
                w.push_back(wi);
                expected += wi * parts.back().total();
            }
            try {
                const auto mix = subconvex_sum(parts, w);
                if (mix.total() != expected) {
                    if (subconvex) wit_sub = mix.to_string();
                    subconvex = false;
                }
            } catch (const Error& e) {
                if (subconvex) wit_sub = e.what();
                subconvex = false;
            }
        }
    }

    auto emit = [&report](const std::string& name, const std::string& ref, bool ok,
                          const std::string& wit) {
        if (ok)
            report.pass(name, ref);
        else
            report.fail(name, ref, wit);
    };
    emit("monad.left-unit", "subdistribution monad unit law", left_unit, wit_left);
    emit("monad.right-unit", "subdistribution monad unit law", right_unit, wit_right);
    emit("monad.associativity", "subdistribution monad multiplication law", assoc, wit_assoc);
    emit("monad.total-iso", "subdistributions as total distributions over 1+X", iso, wit_iso);
    emit("wp.bijection", "arrows determined by their predicate transformer", bij, wit_bij);
    emit("wp.pairing-duality", "state/predicate pairing duality", dual, wit_dual);
    emit("kleisli.unit", "Kleisli category unit laws", kleisli_unit, wit_ku);
    emit("kleisli.associativity", "Kleisli category associativity", kleisli_assoc, wit_ka);
    emit("subconvex.closure", "subconvex combinations close", subconvex, wit_sub);

    // wp is a homomorphism of generalized effect modules, for every arrow.
    {
        bool hom_ok = true;
        std::string hom_wit;
        for (int trial = 0; trial < 16 && hom_ok; ++trial) {
            const auto cx = make_carrier(1 + static_cast<std::size_t>(rng.range(0, 3)));
            const auto cy = make_carrier(1 + static_cast<std::size_t>(rng.range(0, 3)));
            const auto f = random_arrow(rng, cx, cy);
            const auto src_alg = predicate_algebra(cy);
            const auto dst_alg = predicate_algebra(cx);
            std::function<std::vector<Rat>(const std::vector<Rat>&)> wp_fn =
                [&](const std::vector<Rat>& q) {
                    return to_tuple(wp_discrete(f, from_tuple(cy, q)));
                };
            auto sample = src_alg.sample(rng, 24);
            const auto hom_rep = effects::check_homomorphism<effects::PredicateAlgebra,
                                                             effects::PredicateAlgebra>(
                wp_fn, src_alg, dst_alg, effects::HomMode::gemod, sample);
            if (!hom_rep.all_pass()) {
                hom_ok = false;
                for (const auto& chk : hom_rep.checks)
                    if (chk.verdict == Verdict::fail) hom_wit = chk.name + " " + chk.witness.value_or("");
            }
        }
        emit("wp.gemod-homomorphism", "predicate transformers preserve effect module structure",
             hom_ok, hom_wit);
    }
    return report;
}

Report adjunction_maps(Rng& rng, std::size_t samples) {
    Report report;
    report.suite = "laws/adjunction";

    // Unit side: E = [0,1], hom family f_r(x) = r x (these are all of
    // GEMod([0,1],[0,1])). eta(x) evaluates homs; it must preserve sum,
    // scalar, and zero.
    bool eta_sum = true, eta_scalar = true, eta_zero = true;
    std::string wit_sum, wit_scalar;
    std::vector<Rat> hom_scalars{Rat(0), Rat(1), Rat(1, 2), Rat(1, 3), Rat(3, 4)};
    for (std::size_t k = 0; k < samples; ++k) {
        const Rat x = rng.unit_rat(16);
        const Rat y = rng.unit_rat(16) * (Rat(1) - x);  // so x + y <= 1
        const Rat r = rng.unit_rat(16);
        for (const auto& s : hom_scalars) {
            const auto hom = [&s](const Rat& v) { return s * v; };
            if (hom(x + y) != hom(x) + hom(y)) {
                if (eta_sum) wit_sum = "x=" + rat_to_string(x) + " y=" + rat_to_string(y);
                eta_sum = false;
            }
            if (hom(r * x) != r * hom(x)) {
                if (eta_scalar) wit_scalar = "r=" + rat_to_string(r) + " x=" + rat_to_string(x);
                eta_scalar = false;
            }
            if (hom(Rat(0)) != 0) eta_zero = false;
        }
    }

    // Counit side: X = D<=1({a,b}); eps(x) evaluates affine homs and must be
    // affine over subconvex sums. The hom family: coordinate homs (point
    // predicates) plus random weightings.
    bool eps_affine = true;
    std::string wit_eps;
    const Carrier ab{"a", "b"};
    for (std::size_t k = 0; k < samples; ++k) {
        const std::size_t parts = 1 + static_cast<std::size_t>(rng.range(0, 3));
        std::vector<SubDistribution> xs;
        std::vector<Rat> w;
        Rat budget(1);
        for (std::size_t i = 0; i < parts; ++i) {
            Rat wi = rng.unit_rat(8) * budget;
            budget -= wi;
            xs.push_back(random_subdistribution(rng, ab, 8));
            w.push_back(wi);
        }
        const std::vector<AffineHom> homs{{point_predicate("a", ab)},
                                          {point_predicate("b", ab)},
                                          {random_predicate(rng, ab)}};
        for (const auto& f : homs) {
            const Rat lhs = f(subconvex_sum(xs, w));
            Rat rhs(0);
            for (std::size_t i = 0; i < parts; ++i) rhs += w[i] * f(xs[i]);
            if (lhs != rhs) {
                if (eps_affine)
                    wit_eps = "lhs=" + rat_to_string(lhs) + " rhs=" + rat_to_string(rhs);
                eps_affine = false;
            }
        }
    }

    // Constant-zero hom evaluates to 0 everywhere.
    bool zero_hom = true;
    for (std::size_t k = 0; k < samples; ++k) {
        const AffineHom zf{FuzzyPredicate(ab)};
        if (zf(random_subdistribution(rng, ab)) != 0) zero_hom = false;
    }

    auto emit = [&report](const std::string& name, bool ok, const std::string& wit) {
        if (ok)
            report.pass(name, "homming-into-[0,1] adjunction");
        else
            report.fail(name, "homming-into-[0,1] adjunction", wit);
    };
    emit("adjunction.unit-additive", eta_sum, wit_sum);
    emit("adjunction.unit-scalar", eta_scalar, wit_scalar);
    emit("adjunction.unit-zero", eta_zero, "");
    emit("adjunction.counit-affine", eps_affine, wit_eps);
    emit("adjunction.zero-hom", zero_hom, "");
    return report;
}

}  // namespace qdom::subdist
