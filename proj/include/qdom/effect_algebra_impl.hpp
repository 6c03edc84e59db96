#pragma once

// Template bodies for the law suites. Include via effect_algebra.hpp.

#include <algorithm>

namespace qdom::effects {

namespace detail {

// Visits index tuples over [0, n): exhaustively when n^arity stays small
// (finite carriers are quantified in full), otherwise `budget` deterministic
// pseudo-random draws.
template <class Fn>
void for_tuples(std::size_t n, int arity, Rng& rng, std::size_t budget, Fn&& visit) {
    if (n == 0) return;
    double total = 1;
    for (int k = 0; k < arity; ++k) total *= static_cast<double>(n);
    std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
    if (total <= static_cast<double>(budget) * 4) {
        while (true) {
            visit(idx);
            int k = 0;
            while (k < arity) {
                if (++idx[static_cast<std::size_t>(k)] < n) break;
                idx[static_cast<std::size_t>(k)] = 0;
                ++k;
            }
            if (k == arity) return;
        }
    }
    for (std::size_t draw = 0; draw < budget; ++draw) {
        for (auto& i : idx) i = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(n) - 1));
        visit(idx);
    }
}

inline constexpr std::size_t kLawBudget = 64;

}  // namespace detail

template <Carrier C>
Report check_laws(const C& carrier, Structure structure,
                  const std::vector<typename C::Elem>& sample, Rng& rng,
                  const std::vector<Rat>& scalars) {
    using detail::for_tuples;
    Report report;
    report.suite = "laws/" + to_string(structure);
    const auto& s = sample;
    const auto n = s.size();

    bool comm_ok = true, assoc_ok = true, zero_ok = true;
    std::string comm_wit, assoc_wit, zero_wit;

    for_tuples(n, 2, rng, detail::kLawBudget, [&](const std::vector<std::size_t>& ix) {
        const auto& x = s[ix[0]];
        const auto& y = s[ix[1]];
        if (!carrier.defined(x, y)) return;
        if (!carrier.defined(y, x) || !carrier.eq(carrier.sum(x, y), carrier.sum(y, x))) {
            if (comm_ok) comm_wit = "(" + carrier.show(x) + ", " + carrier.show(y) + ")";
            comm_ok = false;
        }
    });
    for_tuples(n, 3, rng, detail::kLawBudget, [&](const std::vector<std::size_t>& ix) {
        const auto& x = s[ix[0]];
        const auto& y = s[ix[1]];
        const auto& z = s[ix[2]];
        if (!carrier.defined(y, z)) return;
        const auto yz = carrier.sum(y, z);
        if (!carrier.defined(x, yz)) return;
        bool ok = carrier.defined(x, y);
        if (ok) {
            const auto xy = carrier.sum(x, y);
            ok = carrier.defined(xy, z) &&
                 carrier.eq(carrier.sum(x, yz), carrier.sum(xy, z));
        }
        if (!ok) {
            if (assoc_ok)
                assoc_wit = "(" + carrier.show(x) + ", " + carrier.show(y) + ", " + carrier.show(z) + ")";
            assoc_ok = false;
        }
    });
    const auto zero = carrier.zero();
    for (const auto& x : s) {
        if (!carrier.defined(zero, x) || !carrier.eq(carrier.sum(zero, x), x)) {
            if (zero_ok) zero_wit = carrier.show(x);
            zero_ok = false;
        }
    }

    auto emit = [&report](const std::string& name, const std::string& ref, bool ok,
                          const std::string& wit) {
        if (ok)
            report.pass(name, ref);
        else
            report.fail(name, ref, "witness " + wit);
    };
    emit("pcm.commutativity", "partial commutative monoid", comm_ok, comm_wit);
    emit("pcm.associativity", "partial commutative monoid", assoc_ok, assoc_wit);
    emit("pcm.zero", "partial commutative monoid", zero_ok, zero_wit);
    if (structure == Structure::pcm) return report;

    if (structure == Structure::ea || structure == Structure::emod) {
        const auto one = carrier.one();
        if (!one) {
            report.fail("ea.top-exists", "effect algebra", "carrier has no top element");
            return report;
        }
        bool compl_ok = true, unique_ok = true, top_ok = true;
        std::string compl_wit, unique_wit, top_wit;
        for (const auto& x : s) {
            const auto px = carrier.perp(x);
            if (!px || !carrier.defined(x, *px) || !carrier.eq(carrier.sum(x, *px), *one)) {
                if (compl_ok) compl_wit = carrier.show(x);
                compl_ok = false;
            }
            // x # 1 forces x = 0.
            if (carrier.defined(x, *one) && !carrier.eq(x, zero)) {
                if (top_ok) top_wit = carrier.show(x);
                top_ok = false;
            }
        }
        // Uniqueness of the orthocomplement: any z with x + z = 1 equals perp x.
        for_tuples(n, 2, rng, detail::kLawBudget, [&](const std::vector<std::size_t>& ix) {
            const auto& x = s[ix[0]];
            const auto& z = s[ix[1]];
            if (!carrier.defined(x, z) || !carrier.eq(carrier.sum(x, z), *one)) return;
            const auto px = carrier.perp(x);
            if (!px || !carrier.eq(z, *px)) {
                if (unique_ok) unique_wit = "(" + carrier.show(x) + ", " + carrier.show(z) + ")";
                unique_ok = false;
            }
        });
        emit("ea.orthocomplement", "effect algebra", compl_ok, compl_wit);
        emit("ea.orthocomplement-unique", "effect algebra", unique_ok, unique_wit);
        emit("ea.top-law", "effect algebra", top_ok, top_wit);
    }

    if (structure == Structure::gea || structure == Structure::gemod) {
        bool cancel_ok = true, pos_ok = true;
        std::string cancel_wit, pos_wit;
        for_tuples(n, 3, rng, detail::kLawBudget, [&](const std::vector<std::size_t>& ix) {
            const auto& x = s[ix[0]];
            const auto& y = s[ix[1]];
            const auto& z = s[ix[2]];
            if (!carrier.defined(x, y) || !carrier.defined(x, z)) return;
            if (carrier.eq(carrier.sum(x, y), carrier.sum(x, z)) && !carrier.eq(y, z)) {
                if (cancel_ok)
                    cancel_wit = "(" + carrier.show(x) + ", " + carrier.show(y) + ", " + carrier.show(z) + ")";
                cancel_ok = false;
            }
        });
        for_tuples(n, 2, rng, detail::kLawBudget, [&](const std::vector<std::size_t>& ix) {
            const auto& x = s[ix[0]];
            const auto& y = s[ix[1]];
            if (!carrier.defined(x, y)) return;
            if (carrier.eq(carrier.sum(x, y), zero) &&
                (!carrier.eq(x, zero) || !carrier.eq(y, zero))) {
                if (pos_ok) pos_wit = "(" + carrier.show(x) + ", " + carrier.show(y) + ")";
                pos_ok = false;
            }
        });
        emit("gea.cancellation", "generalized effect algebra", cancel_ok, cancel_wit);
        emit("gea.positivity", "generalized effect algebra", pos_ok, pos_wit);
    }

    if (structure == Structure::emod || structure == Structure::gemod) {
        bool unit_ok = true, add_ok = true, mult_ok = true, dist_ok = true;
        std::string unit_wit, add_wit, mult_wit, dist_wit;
        for (const auto& x : s) {
            const auto ox = carrier.scale(Rat(1), x);
            if (!ox || !carrier.eq(*ox, x)) {
                if (unit_ok) unit_wit = carrier.show(x);
                unit_ok = false;
            }
            for (const auto& r : scalars) {
                for (const auto& sc : scalars) {
                    if (r + sc <= 1) {
                        const auto lhs = carrier.scale(r + sc, x);
                        const auto rx = carrier.scale(r, x);
                        const auto sx = carrier.scale(sc, x);
                        const bool ok = lhs && rx && sx && carrier.defined(*rx, *sx) &&
                                        carrier.eq(*lhs, carrier.sum(*rx, *sx));
                        if (!ok) {
                            if (add_ok)
                                add_wit = "(" + rat_to_string(r) + ", " + rat_to_string(sc) + ", " + carrier.show(x) + ")";
                            add_ok = false;
                        }
                    }
                    const auto lhs = carrier.scale(r * sc, x);
                    const auto inner = carrier.scale(sc, x);
                    const auto rhs = inner ? carrier.scale(r, *inner) : std::nullopt;
                    if (!lhs || !rhs || !carrier.eq(*lhs, *rhs)) {
                        if (mult_ok)
                            mult_wit = "(" + rat_to_string(r) + ", " + rat_to_string(sc) + ", " + carrier.show(x) + ")";
                        mult_ok = false;
                    }
                }
            }
        }
        for_tuples(n, 2, rng, detail::kLawBudget, [&](const std::vector<std::size_t>& ix) {
            const auto& x = s[ix[0]];
            const auto& y = s[ix[1]];
            if (!carrier.defined(x, y)) return;
            for (const auto& r : scalars) {
                const auto lhs = carrier.scale(r, carrier.sum(x, y));
                const auto rx = carrier.scale(r, x);
                const auto ry = carrier.scale(r, y);
                const bool ok = lhs && rx && ry && carrier.defined(*rx, *ry) &&
                                carrier.eq(*lhs, carrier.sum(*rx, *ry));
                if (!ok) {
                    if (dist_ok)
                        dist_wit = "(" + rat_to_string(r) + ", " + carrier.show(x) + ", " + carrier.show(y) + ")";
                    dist_ok = false;
                }
            }
        });
        emit("emod.scalar-unit", "effect module", unit_ok, unit_wit);
        emit("emod.scalar-additivity", "effect module", add_ok, add_wit);
        emit("emod.scalar-multiplicativity", "effect module", mult_ok, mult_wit);
        emit("emod.scalar-distributivity", "effect module", dist_ok, dist_wit);
    }
    return report;
}

template <Carrier C>
Report check_induced_order(const C& carrier, const std::vector<typename C::Elem>& sample) {
    Report report;
    report.suite = "laws/induced-order";
    const auto& s = sample;
    bool refl = true, antisym = true, trans = true, bot = true, top = true;
    std::string refl_w, anti_w, trans_w, bot_w, top_w;
    const auto zero = carrier.zero();
    const auto one = carrier.one();
    for (const auto& x : s) {
        if (!carrier.leq(x, x)) { if (refl) refl_w = carrier.show(x); refl = false; }
        if (!carrier.leq(zero, x)) { if (bot) bot_w = carrier.show(x); bot = false; }
        if (one && !carrier.leq(x, *one)) { if (top) top_w = carrier.show(x); top = false; }
    }
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (carrier.leq(s[a], s[b]) && carrier.leq(s[b], s[a]) && !carrier.eq(s[a], s[b])) {
                if (antisym) anti_w = "(" + carrier.show(s[a]) + ", " + carrier.show(s[b]) + ")";
                antisym = false;
            }
            if (!carrier.leq(s[a], s[b])) continue;
            for (std::size_t c = 0; c < s.size(); ++c)
                if (carrier.leq(s[b], s[c]) && !carrier.leq(s[a], s[c])) {
                    if (trans)
                        trans_w = "(" + carrier.show(s[a]) + ", " + carrier.show(s[b]) + ", " + carrier.show(s[c]) + ")";
                    trans = false;
                }
        }
    auto emit = [&report](const std::string& name, bool ok, const std::string& wit) {
        if (ok)
            report.pass(name, "induced partial order");
        else
            report.fail(name, "induced partial order", "witness " + wit);
    };
    emit("order.reflexive", refl, refl_w);
    emit("order.antisymmetric", antisym, anti_w);
    emit("order.transitive", trans, trans_w);
    emit("order.bottom", bot, bot_w);
    emit("order.top", top, top_w);
    return report;
}

template <Carrier CS, Carrier CT>
Report check_homomorphism(
    const std::function<typename CT::Elem(const typename CS::Elem&)>& f, const CS& source,
    const CT& target, HomMode mode, const std::vector<typename CS::Elem>& sample,
    const std::vector<Rat>& scalars) {
    Report report;
    report.suite = "homomorphism/" + to_string(mode);
    const auto& s = sample;
    const bool unital_mode = (mode == HomMode::ea || mode == HomMode::emod);

    if (unital_mode) {
        const auto one_s = source.one();
        const auto one_t = target.one();
        if (!one_s || !one_t) {
            report.fail("hom.unit", "effect algebra homomorphism", "carrier lacks a top");
            return report;
        }
        if (target.eq(f(*one_s), *one_t))
            report.pass("hom.unit", "effect algebra homomorphism");
        else
            report.fail("hom.unit", "effect algebra homomorphism",
                        "f(1) = " + target.show(f(*one_s)) + " != 1");
    } else {
        if (target.eq(f(source.zero()), target.zero()))
            report.pass("hom.zero", "generalized effect algebra homomorphism");
        else
            report.fail("hom.zero", "generalized effect algebra homomorphism",
                        "f(0) = " + target.show(f(source.zero())));
    }

    bool sum_ok = true;
    std::string sum_wit;
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = 0; b < s.size(); ++b) {
            const auto& x = s[a];
            const auto& y = s[b];
            if (!source.defined(x, y)) continue;
            const auto fx = f(x);
            const auto fy = f(y);
            if (!target.defined(fx, fy) ||
                !target.eq(f(source.sum(x, y)), target.sum(fx, fy))) {
                if (sum_ok) sum_wit = "(" + source.show(x) + ", " + source.show(y) + ")";
                sum_ok = false;
            }
        }
    if (sum_ok)
        report.pass("hom.sum", "sum preservation");
    else
        report.fail("hom.sum", "sum preservation", "witness " + sum_wit);

    const bool base_ok = report.all_pass();

    // Derived consequences; failures here while the base laws hold indicate a
    // defect in this checker, not in the data.
    if (unital_mode) {
        bool perp_ok = true, zero_ok = true;
        std::string perp_wit;
        for (const auto& x : s) {
            const auto px = source.perp(x);
            const auto pfx = target.perp(f(x));
            if (!px || !pfx || !target.eq(f(*px), *pfx)) {
                if (perp_ok) perp_wit = source.show(x);
                perp_ok = false;
            }
        }
        zero_ok = target.eq(f(source.zero()), target.zero());
        const std::string tag = base_ok ? "" : " (base laws already failed)";
        if (perp_ok)
            report.pass("hom.derived-perp", "orthocomplement preservation follows");
        else
            report.fail("hom.derived-perp", "orthocomplement preservation follows",
                        "witness " + perp_wit + tag);
        if (zero_ok)
            report.pass("hom.derived-zero", "zero preservation follows");
        else
            report.fail("hom.derived-zero", "zero preservation follows",
                        "f(0) != 0" + tag);
    } else {
        bool mono_ok = true;
        std::string mono_wit;
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = 0; b < s.size(); ++b) {
                if (!source.leq(s[a], s[b])) continue;
                if (!target.leq(f(s[a]), f(s[b]))) {
                    if (mono_ok) mono_wit = "(" + source.show(s[a]) + ", " + source.show(s[b]) + ")";
                    mono_ok = false;
                }
            }
        const std::string tag = base_ok ? "" : " (base laws already failed)";
        if (mono_ok)
            report.pass("hom.derived-monotone", "monotonicity follows");
        else
            report.fail("hom.derived-monotone", "monotonicity follows", "witness " + mono_wit + tag);
    }

    if (mode == HomMode::emod || mode == HomMode::gemod) {
        bool scal_ok = true;
        std::string scal_wit;
        for (const auto& x : s)
            for (const auto& r : scalars) {
                const auto rx = source.scale(r, x);
                const auto rfx = target.scale(r, f(x));
                if (!rx || !rfx || !target.eq(f(*rx), *rfx)) {
                    if (scal_ok) scal_wit = "(" + rat_to_string(r) + ", " + source.show(x) + ")";
                    scal_ok = false;
                }
            }
        if (scal_ok)
            report.pass("hom.scalar", "scalar preservation");
        else
            report.fail("hom.scalar", "scalar preservation", "witness " + scal_wit);
    }
    return report;
}

template <Carrier CS, Carrier CT>
Report tilde_correspondence(
    const std::function<typename CT::Elem(const typename CS::Elem&)>& f, const CS& source,
    const CT& target, const std::vector<typename CS::Elem>& sample, bool with_scalars) {
    Report report;
    report.suite = "tilde-correspondence";
    const auto one_s = source.one();
    if (!one_s) {
        report.fail("tilde.f1", "downset restriction", "source has no top, f(1) undefined");
        return report;
    }
    const auto f1 = f(*one_s);
    const Downset<CT> down(target, f1);

    const auto gea_mode = with_scalars ? HomMode::gemod : HomMode::gea;
    const auto ea_mode = with_scalars ? HomMode::emod : HomMode::ea;
    auto base = check_homomorphism<CS, CT>(f, source, target, gea_mode, sample);
    std::function<typename CT::Elem(const typename CS::Elem&)> same = f;
    auto restricted = check_homomorphism<CS, Downset<CT>>(same, source, down, ea_mode, sample);

    for (auto& c : base.checks) {
        c.name = "f." + c.name;
        report.add(c);
    }
    for (auto& c : restricted.checks) {
        c.name = "tilde." + c.name;
        report.add(c);
    }
    if (base.all_pass() == restricted.all_pass())
        report.pass("tilde.biconditional", "downset restriction correspondence");
    else
        report.fail("tilde.biconditional", "downset restriction correspondence",
                    std::string("f ") + (base.all_pass() ? "passes" : "fails") +
                        " but restriction " + (restricted.all_pass() ? "passes" : "fails"));
    return report;
}

template <Carrier C>
DerivedOps<C> derived_ops(const C& carrier, const typename C::Elem& x,
                          const typename C::Elem& y) {
    DerivedOps<C> ops;
    const auto px = carrier.perp(x);
    const auto py = carrier.perp(y);
    if (px && py && carrier.defined(*px, *py))
        ops.dual_sum = carrier.perp(carrier.sum(*px, *py));
    ops.leq = carrier.leq(x, y);
    if (ops.leq) ops.difference = carrier.diff(y, x);
    return ops;
}

}  // namespace qdom::effects
