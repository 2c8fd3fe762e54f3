#pragma once

#include "sgm/family.hpp"

#include <algorithm>
#include <functional>

namespace sgm {

namespace predicate {
inline constexpr const char* cup_length = "cup-length";
inline constexpr const char* square_not_divisible = "square-not-divisible";
inline constexpr const char* torsion_product_lift = "torsion-product-lift";
inline constexpr const char* six_dimensional_lift = "six-dimensional-lift";
inline constexpr const char* complex_projective = "complex-projective";
inline constexpr const char* independent_lift = "independent-lift";
}  // namespace predicate

enum class LiftCertificate { EmptyPreimage, TorsionOnlyPreimage };

inline const char* to_string(LiftCertificate c) {
    return c == LiftCertificate::EmptyPreimage ? "empty-preimage" : "torsion-only-preimage";
}

struct WitnessElement {
    int degree = 0;
    /// Combination of canonical generator names, e.g. "2*a - b".
    std::string expression;
    friend bool operator==(const WitnessElement&, const WitnessElement&) = default;
};

struct Witness {
    std::string predicate;
    int n = 0;
    /// 0 for integer coefficients.
    Integer k = 0;
    std::vector<WitnessElement> elements;
    int product_degree = 0;
    std::string product;
    std::optional<LiftCertificate> certificate;
    /// Integral class reducing to the product (independent-lift only).
    std::optional<std::string> lift;

    friend bool operator==(const Witness&, const Witness&) = default;
};

struct AnalysisOptions {
    std::vector<Integer> coefficients{0, 2, 3};
    int bound = 3;
    std::size_t enum_cap = 4096;
    /// Inclusive; defaults to [1, m-1].
    std::optional<std::pair<int, int>> targets;
};

enum class Status { Excluded, Unknown };

inline const char* to_string(Status s) { return s == Status::Excluded ? "Excluded" : "Unknown"; }

struct Verdict {
    int n = 0;
    Status status = Status::Unknown;
    std::vector<Witness> witnesses;
};

struct ComponentBound {
    int value = 1;
    int l = 0;
    std::string justification;
    std::vector<Witness> lifts;
};

struct ObstructionReport {
    int dimension = 0;
    std::vector<Verdict> verdicts;
    ComponentBound component_lower_bound;
    std::vector<std::string> notices;
};

namespace detail {

// Node budget for the cup-length search; exhausting it is reported as a notice.
inline constexpr std::size_t cup_search_budget = 2'000'000;

inline std::vector<Integer> usable_rings(const ModelFamily& f, const std::vector<Integer>& coefficients,
                                         std::vector<std::string>* notices) {
    std::set<Integer> ks;
    for (const auto& k : coefficients) {
        if (k == 1 || k == -1) throw ValidationError("coefficient 1 is not allowed");
        ks.insert(abs(k));
    }
    std::vector<Integer> out;
    for (const auto& k : ks) {
        if (f.has(k))
            out.push_back(k);
        else if (notices)
            notices->push_back("coefficients Z/" + k.str() + " skipped: no model available");
    }
    return out;
}

// 0, 1, -1, 2, -2, ...
inline int zigzag(int t) { return t % 2 ? (t + 1) / 2 : -(t / 2); }

/// Elements of g with coordinates in [-b, b], shell by shell (max |c| = 1, 2, ..., B), at most cap of them.
/// Within a shell the first coordinate varies fastest and runs 0, 1, -1, 2, -2, ...
/// Coordinates are reduced in finite summands; duplicates and zero are dropped.
inline std::vector<GroupElement> shell_elements(const FgAbGroup& g, int bound, std::size_t cap) {
    std::vector<GroupElement> out;
    std::set<GroupElement> seen;
    const std::size_t r = g.size();
    if (r == 0) return out;
    for (int b = 1; b <= bound && out.size() < cap; ++b) {
        std::vector<int> t(r, 0);
        for (;;) {
            IntVector coords(r);
            bool on_shell = false;
            for (std::size_t i = 0; i < r; ++i) {
                coords[i] = zigzag(t[i]);
                on_shell = on_shell || abs(coords[i]) == b;
            }
            if (on_shell) {
                GroupElement e = g.element(coords);
                if (!e.is_zero() && seen.insert(e).second) {
                    out.push_back(e);
                    if (out.size() >= cap) break;
                }
            }
            std::size_t i = 0;
            while (i < r && t[i] == 2 * b) t[i++] = 0;
            if (i == r) break;
            ++t[i];
        }
    }
    return out;
}

/// All elements of a finite group, first coordinate fastest, or nullopt when the order exceeds cap.
inline std::optional<std::vector<GroupElement>> all_elements(const FgAbGroup& g, std::size_t cap) {
    if (!g.is_finite()) return std::nullopt;
    if (g.torsion_order() > Integer(cap)) return std::nullopt;
    std::vector<GroupElement> out;
    IntVector c(g.size());
    for (;;) {
        out.push_back(g.element(c));
        std::size_t i = 0;
        while (i < c.size() && c[i] == g.factor(i) - 1) c[i++] = 0;
        if (i == c.size()) break;
        ++c[i];
    }
    return out;
}

/// Nonzero v in H^4(M;Z/k) with no integral lift of infinite order; k = 0 means the identity reduction.
inline std::optional<LiftCertificate> lift_failure(const ModelFamily& f, const Integer& k, const GroupElement& v) {
    if (v.is_zero()) return std::nullopt;
    if (k == 0) {
        if (element_order(f.integral.group(4), v)) return LiftCertificate::TorsionOnlyPreimage;
        return std::nullopt;
    }
    auto coset = solve_hom(f.reduction(k).hom(4), v);
    if (!coset) return LiftCertificate::EmptyPreimage;
    if (!coset_contains_infinite_order(f.integral.group(4), *coset)) return LiftCertificate::TorsionOnlyPreimage;
    return std::nullopt;
}

inline WitnessElement describe(const CohomologyModel& model, const CohomologyClass& c) {
    return {c.degree, model.format(c)};
}

inline std::string ring_label(const Integer& k) { return k == 0 ? "Z" : "Z/" + k.str(); }

}  // namespace detail

/// A sequence of ring generators, each of degree in [1, m-n], total degree at least n, with a known
/// nonzero product. Searches Z first, then each modulus; shortest sequences first.
inline std::optional<Witness> cup_length_witness(const ModelFamily& f, int n, int bound,
                                              const std::vector<Integer>& coefficients = {0, 2, 3},
                                              std::vector<std::string>* notices = nullptr) {
    const int m = f.dimension();
    if (n < 1 || n >= m) throw DegreeError("target " + std::to_string(n) + " outside [1, " + std::to_string(m - 1) + "]");
    if (bound < 1) throw ValidationError("search bound must be at least 1");
    for (const auto& k : detail::usable_rings(f, coefficients, nullptr)) {
        const auto& model = f.model(k);
        std::vector<GeneratorRef> gens;
        for (int j = 1; j <= m - n; ++j)
            for (const auto& g : model.generators(j)) gens.push_back(g);
        if (gens.empty()) continue;

        std::size_t budget = detail::cup_search_budget;
        for (int length = 1; length <= m; ++length) {
            std::vector<std::size_t> picked;
            std::optional<Witness> found;
            // depth-first over non-decreasing generator indices; prefix products are exact (left fold)
            std::function<void(std::size_t, const CohomologyClass&, int)> dfs = [&](std::size_t from,
                                                                                    const CohomologyClass& acc,
                                                                                    int degree) {
                if (found || budget == 0) return;
                if (static_cast<int>(picked.size()) == length) {
                    if (degree >= n && !acc.value.is_zero()) {
                        Witness w{predicate::cup_length, n, k, {}, acc.degree, model.format(acc), {}, {}};
                        for (std::size_t i : picked) w.elements.push_back(detail::describe(model, model.generator(gens[i])));
                        found = std::move(w);
                    }
                    return;
                }
                for (std::size_t i = from; i < gens.size() && !found; ++i) {
                    if (budget == 0) return;
                    --budget;
                    std::size_t mult = 0;
                    for (std::size_t p : picked) mult += p == i;
                    if (mult >= static_cast<std::size_t>(bound)) continue;
                    const int d = degree + gens[i].degree;
                    if (d > m) break;
                    CupResult next = picked.empty() ? CupResult(model.generator(gens[i]))
                                                    : cup(model, acc, model.generator(gens[i]));
                    if (!next || next->value.is_zero()) continue;
                    picked.push_back(i);
                    dfs(i, *next, d);
                    picked.pop_back();
                }
            };
            dfs(0, model.unit(), 0);
            if (found) return found;
            if (budget == 0) {
                if (notices)
                    notices->push_back("cup-length search over " + detail::ring_label(k) + " for n = " +
                                       std::to_string(n) + " stopped at its node budget");
                break;
            }
        }
    }
    return std::nullopt;
}

/// u in H^2(M;Z) with u ∪ u known and not divisible by 2. Excludes n = 5.
inline std::optional<Witness> square_witness(const ModelFamily& f, int bound, std::size_t cap) {
    const auto& z = f.integral;
    if (z.dimension() < 7) throw InapplicableError("square-not-divisible needs dimension at least 7");
    if (!z.simply_connected()) return std::nullopt;
    for (const auto& u : detail::shell_elements(z.group(2), bound, cap)) {
        CohomologyClass cu{2, u};
        CupResult sq = cup(z, cu, cu);
        if (!sq || is_divisible_by(z.group(4), sq->value, 2)) continue;
        return Witness{predicate::square_not_divisible, 5, 0, {detail::describe(z, cu)}, 4, z.format(*sq), {}, {}};
    }
    return std::nullopt;
}

/// u1, u2 in H^2(M;Z/k) with known nonzero product admitting no integral lift of infinite order.
/// For k >= 2 the generator pairs decide the question exactly: the products that do lift form a subgroup.
/// For k = 0, u1 ranges over bounded combinations and u2 is solved for exactly.
inline std::optional<Witness> torsion_product_witness(const ModelFamily& f, const Integer& k, int bound, std::size_t cap) {
    if (f.dimension() < 7) throw InapplicableError("torsion-product-lift needs dimension at least 7");
    if (k == 1 || k == -1 || k < 0) throw ValidationError("coefficient " + k.str() + " is not allowed");
    if (!f.integral.simply_connected() || !f.has(k)) return std::nullopt;
    const auto& model = f.model(k);
    auto make = [&](const CohomologyClass& a, const CohomologyClass& b, const CohomologyClass& p, LiftCertificate c) {
        return Witness{predicate::torsion_product_lift, 5, k, {detail::describe(model, a), detail::describe(model, b)},
                       4, model.format(p), c, {}};
    };

    if (k != 0) {
        for (const auto& a : model.generators(2))
            for (const auto& b : model.generators(2)) {
                if (b < a) continue;
                CupResult p = model.product_entry(a, b);
                if (!p) continue;
                if (auto cert = detail::lift_failure(f, k, p->value))
                    return make(model.generator(a), model.generator(b), *p, *cert);
            }
        return std::nullopt;
    }

    const FgAbGroup& h4 = model.group(4);
    std::vector<std::size_t> free_rows;
    for (std::size_t i = 0; i < h4.size(); ++i)
        if (h4.factor(i) == 0) free_rows.push_back(i);
    for (const auto& u : detail::shell_elements(model.group(2), bound, cap)) {
        CohomologyClass cu{2, u};
        std::vector<GeneratorRef> cols;
        std::vector<CohomologyClass> images;
        for (const auto& g : model.generators(2))
            if (CupResult p = cup(model, cu, model.generator(g))) {
                cols.push_back(g);
                images.push_back(*p);
            }
        if (cols.empty()) continue;
        // kernel of the free part of x -> u ∪ x
        IntMatrix a(free_rows.size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < free_rows.size(); ++r) a(r, c) = images[c].value[free_rows[r]];
        SmithForm snf = smith_normal_form(a);
        for (std::size_t c = snf.rank(); c < cols.size(); ++c) {
            IntVector coords(model.group(2).size());
            for (std::size_t i = 0; i < cols.size(); ++i) coords[cols[i].index] += snf.V(i, c);
            CohomologyClass v{2, model.group(2).element(coords)};
            CupResult p = cup(model, cu, v);
            if (!p) continue;
            if (auto cert = detail::lift_failure(f, 0, p->value)) return make(cu, v, *p, *cert);
        }
    }
    return std::nullopt;
}

/// As the torsion-product test on a six-manifold, with neither factor a reduction of an integral class.
inline std::optional<Witness> six_dimensional_witness(const ModelFamily& f, const Integer& k, int bound, std::size_t cap) {
    if (f.dimension() != 6) throw InapplicableError("six-dimensional-lift needs dimension 6");
    if (k < 2) throw ValidationError("six-dimensional-lift needs a modulus k >= 2, got " + k.str());
    if (!f.integral.simply_connected() || !f.has(k)) return std::nullopt;
    const auto& model = f.model(k);
    const auto& red = f.reduction(k);
    const FgAbGroup& h2 = model.group(2);
    auto outside = [&](const GroupElement& x) { return !in_reduction_image(red, 2, x); };

    auto candidates = detail::all_elements(h2, cap);
    if (!candidates) candidates = detail::shell_elements(h2, bound, cap);
    for (const auto& u : *candidates) {
        if (u.is_zero() || !outside(u)) continue;
        CohomologyClass cu{2, u};
        std::vector<CohomologyClass> gens;
        std::vector<CohomologyClass> images;
        for (const auto& g : model.generators(2))
            if (CupResult p = cup(model, cu, model.generator(g))) {
                gens.push_back(model.generator(g));
                images.push_back(*p);
            }
        // u ∪ x fails to lift off a subgroup and x lies outside the image off another; two proper
        // subgroups never cover the group they sit in, so one of g_b, g_c, g_b + g_c works
        std::optional<std::size_t> bad_b, out_c;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            const bool fails = detail::lift_failure(f, k, images[i].value).has_value();
            const bool out = outside(gens[i].value);
            if (fails && out) {
                bad_b = out_c = i;
                break;
            }
            if (fails && !bad_b) bad_b = i;
            if (out && !out_c) out_c = i;
        }
        if (!bad_b || !out_c) continue;
        CohomologyClass v = gens[*bad_b];
        if (*bad_b != *out_c) {
            v = detail::lift_failure(f, k, images[*out_c].value) ? gens[*out_c]
                                                                 : CohomologyClass{2, h2.add(gens[*bad_b].value, gens[*out_c].value)};
        }
        CupResult p = cup(model, cu, v);
        if (!p || !outside(v.value)) continue;
        auto cert = detail::lift_failure(f, k, p->value);
        if (!cert) continue;
        return Witness{predicate::six_dimensional_lift, 5, k, {detail::describe(model, cu), detail::describe(model, v)},
                       4, model.format(*p), cert, {}};
    }
    return std::nullopt;
}

namespace detail {

/// Integral lift of v along the degree-4 reduction: coset base with free coordinates reduced mod k.
inline std::optional<GroupElement> canonical_lift(const ModelFamily& f, const Integer& k, const GroupElement& v) {
    if (k == 0) return v;
    auto coset = solve_hom(f.reduction(k).hom(4), v);
    if (!coset) return std::nullopt;
    const FgAbGroup& h4 = f.integral.group(4);
    IntVector c = coset->base.coordinates();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (h4.factor(i) == 0) c[i] = floor_mod(c[i], k);
    return h4.element(c);
}

}  // namespace detail

/// Lower bound for the number of components of the singular set of a map into R^5.
inline ComponentBound component_bound(const ModelFamily& f, const std::vector<Integer>& coefficients,
                                          std::vector<std::string>* notices = nullptr) {
    ComponentBound out;
    const auto& z = f.integral;
    const int m = z.dimension();
    if (m < 6) {
        if (notices) notices->push_back("component bound needs dimension at least 6; reporting 1");
        out.justification = "no applicable rule";
        return out;
    }
    if (!z.simply_connected()) {
        if (notices) notices->push_back("component bound needs a simply connected manifold; reporting 1");
        out.justification = "no applicable rule";
        return out;
    }

    std::optional<Witness> nonzero_square;
    std::vector<GroupElement> chosen;
    const FgAbGroup& h4 = z.group(4);
    auto ks = coefficients;
    ks.push_back(0);
    for (const auto& k : detail::usable_rings(f, ks, nullptr)) {
        const auto& model = f.model(k);
        for (const auto& a : model.generators(2))
            for (const auto& b : model.generators(2)) {
                if (b < a) continue;
                CupResult p = model.product_entry(a, b);
                if (!p || p->value.is_zero()) continue;
                Witness w{predicate::independent_lift, 5, k,
                          {detail::describe(model, model.generator(a)), detail::describe(model, model.generator(b))},
                          4, model.format(*p), {}, {}};
                if (!nonzero_square) nonzero_square = w;
                if (m < 7) continue;
                auto lift = detail::canonical_lift(f, k, p->value);
                if (!lift) continue;
                auto trial = chosen;
                trial.push_back(*lift);
                if (rank_modulo_torsion(h4, trial) <= chosen.size()) continue;
                chosen = std::move(trial);
                w.lift = z.format({4, *lift});
                out.lifts.push_back(std::move(w));
            }
    }
    out.l = static_cast<int>(chosen.size());
    if (out.l >= 1) {
        out.value = out.l + 1;
        out.justification = "independent-lifts (l = " + std::to_string(out.l) + ")";
    } else if (nonzero_square) {
        out.value = 2;
        out.justification = "nonzero-degree-2-product over " + detail::ring_label(nonzero_square->k) + " (" +
                            nonzero_square->elements[0].expression + " ∪ " + nonzero_square->elements[1].expression +
                            " = " + nonzero_square->product + ")";
        out.lifts.push_back(*nonzero_square);
    } else {
        out.justification = "no applicable rule";
    }
    return out;
}

/// Re-derives every claim of a witness from the family; returns the first failed check, or nullopt.
inline std::optional<std::string> replay_failure(const ModelFamily& f, const Witness& w) {
    const int m = f.dimension();
    const auto& z = f.integral;
    if (w.predicate == predicate::complex_projective) {
        if (!f.complex_projective || w.n < 1 || w.n > m) return "not a complex projective catalog entry in range";
        return std::nullopt;
    }
    if (!f.has(w.k)) return "no model over " + detail::ring_label(w.k);
    const auto& model = f.model(w.k);
    std::vector<CohomologyClass> xs;
    for (const auto& e : w.elements) {
        auto c = parse_combination(model, e.degree, e.expression);
        xs.push_back(c);
    }
    if (xs.empty()) return "no elements";
    if (w.predicate == predicate::square_not_divisible) xs.push_back(xs.front());
    CupResult p = cup_sequence(model, xs);
    if (!p) return "product is UNKNOWN";
    if (p->value.is_zero()) return "product is zero";
    if (p->degree != w.product_degree || model.format(*p) != w.product) return "product differs: " + model.format(*p);

    auto all_degree_two = [&] {
        return xs.size() == 2 && xs[0].degree == 2 && xs[1].degree == 2;
    };
    if (w.predicate == predicate::cup_length) {
        if (w.n < 1 || w.n >= m) return "target out of range";
        int total = 0;
        for (const auto& x : xs) {
            if (x.degree < 1 || x.degree > m - w.n) return "element degree outside [1, m - n]";
            total += x.degree;
        }
        if (total < w.n) return "total degree below n";
        return std::nullopt;
    }
    if (w.predicate == predicate::square_not_divisible) {
        if (m < 7 || !z.simply_connected() || w.k != 0 || w.n != 5 || !all_degree_two()) return "hypotheses not met";
        if (is_divisible_by(z.group(4), p->value, 2)) return "square is divisible by 2";
        return std::nullopt;
    }
    if (w.predicate == predicate::torsion_product_lift || w.predicate == predicate::six_dimensional_lift) {
        const bool six = w.predicate == predicate::six_dimensional_lift;
        if (!z.simply_connected() || !all_degree_two() || w.n < 1 || w.n > 5) return "hypotheses not met";
        if (six ? (m != 6 || w.k < 2) : m < 7) return "dimension not covered";
        if (six)
            for (const auto& x : xs)
                if (in_reduction_image(f.reduction(w.k), 2, x.value)) return model.format(x) + " is a reduction";
        auto cert = detail::lift_failure(f, w.k, p->value);
        if (!cert) return "product lifts to an integral class of infinite order";
        if (w.certificate != cert) return "certificate mismatch";
        return std::nullopt;
    }
    if (w.predicate == predicate::independent_lift) {
        if (!all_degree_two() || !z.simply_connected() || m < 6) return "hypotheses not met";
        if (w.lift) {
            auto u = parse_combination(z, 4, *w.lift);
            CohomologyClass r = w.k == 0 ? u : f.reduction(w.k).apply(u);
            if (!(r == *p)) return "lift does not reduce to the product";
        }
        return std::nullopt;
    }
    return "unknown predicate " + w.predicate;
}

inline std::optional<std::string> replay_failure(const ModelFamily& f, const ComponentBound& b) {
    for (const auto& w : b.lifts)
        if (auto why = replay_failure(f, w)) return why;
    std::vector<GroupElement> lifts;
    for (const auto& w : b.lifts)
        if (w.lift) lifts.push_back(parse_combination(f.integral, 4, *w.lift).value);
    if (static_cast<int>(lifts.size()) != b.l) return "lift count differs from l";
    if (rank_modulo_torsion(f.integral.group(4), lifts) != lifts.size()) return "lifts are not independent";
    if (b.l >= 1) return b.value == b.l + 1 && f.dimension() >= 7 ? std::nullopt : std::optional<std::string>("bad value");
    if (b.value == 2) return b.lifts.size() == 1 ? std::nullopt : std::optional<std::string>("missing product");
    return b.value == 1 ? std::nullopt : std::optional<std::string>("bad value");
}

inline ObstructionReport analyze(const ModelFamily& f, const AnalysisOptions& opts = {}) {
    if (opts.bound < 1) throw ValidationError("search bound must be at least 1");
    ObstructionReport rep;
    const int m = f.dimension();
    rep.dimension = m;
    rep.notices = f.notices;
    const auto rings = detail::usable_rings(f, opts.coefficients, &rep.notices);
    for (const auto& k : rings)
        if (!f.model(k).fully_known())
            rep.notices.push_back("some products over " + detail::ring_label(k) +
                                  " are UNKNOWN; searches use known entries only");

    int lo = 1, hi = m - 1;
    if (opts.targets) {
        lo = std::max(lo, opts.targets->first);
        hi = std::min(hi, opts.targets->second);
        if (opts.targets->first < 1 || opts.targets->second > m - 1 || opts.targets->first > opts.targets->second)
            rep.notices.push_back("targets clipped to [1, " + std::to_string(m - 1) + "]");
    }

    const bool sc = f.integral.simply_connected();
    std::optional<Witness> square, torsion_lift, six_lift;
    const bool low_targets = lo <= 5;
    if (low_targets && m >= 6 && !sc)
        rep.notices.push_back("predicates for simply connected manifolds skipped: manifold not simply connected");
    if (low_targets && m >= 7 && sc) {
        if (hi >= 5) square = square_witness(f, opts.bound, opts.enum_cap);
        for (const auto& k : rings)
            if (!torsion_lift) torsion_lift = torsion_product_witness(f, k, opts.bound, opts.enum_cap);
    }
    if (low_targets && m == 6 && sc)
        for (const auto& k : rings)
            if (k >= 2 && !six_lift) six_lift = six_dimensional_witness(f, k, opts.bound, opts.enum_cap);

    for (int n = lo; n <= hi; ++n) {
        Verdict v;
        v.n = n;
        if (auto w = cup_length_witness(f, n, opts.bound, rings, &rep.notices)) v.witnesses.push_back(*w);
        if (f.complex_projective && n <= m)
            v.witnesses.push_back(Witness{predicate::complex_projective, n, 0, {}, 0, "", {}, {}});
        if (n == 5 && square) v.witnesses.push_back(*square);
        for (const auto* w : {&torsion_lift, &six_lift})
            if (*w && n <= 5) {
                Witness copy = **w;
                copy.n = n;
                v.witnesses.push_back(std::move(copy));
            }
        for (const auto& w : v.witnesses)
            if (auto why = replay_failure(f, w))
                throw std::logic_error("witness replay failed for " + w.predicate + " at n = " + std::to_string(n) +
                                       ": " + *why);
        v.status = v.witnesses.empty() ? Status::Unknown : Status::Excluded;
        rep.verdicts.push_back(std::move(v));
    }

    rep.component_lower_bound = component_bound(f, rings, &rep.notices);
    if (auto why = replay_failure(f, rep.component_lower_bound))
        throw std::logic_error("component bound replay failed: " + *why);
    return rep;
}

}  // namespace sgm
