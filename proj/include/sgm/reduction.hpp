#pragma once

#include "sgm/model_builder.hpp"

namespace sgm {

/// Coefficient reduction H^*(M;Z) -> H^*(M;Z/k), degree by degree.
struct ReductionMap {
    CohomologyModel integral;
    CohomologyModel modular;
    std::vector<GroupHom> per_degree;

    const Integer& modulus() const { return modular.ring().modulus(); }

    const GroupHom& hom(int j) const {
        integral.check_degree(j);
        return per_degree.at(static_cast<std::size_t>(j));
    }
    CohomologyClass apply(const CohomologyClass& x) const {
        if (x.degree > integral.dimension()) return modular.zero(x.degree);
        return {x.degree, hom(x.degree).apply(x.value)};
    }
};

/// Explicit modular data used instead of the UCT defaults.
struct ModularSupplement {
    CohomologyModel model;
    /// Degree j: matrix with one column per integral generator, in canonical coordinates.
    std::vector<IntMatrix> matrices;
};

inline bool in_reduction_image(const ReductionMap& red, int j, const GroupElement& v) {
    return solve_hom(red.hom(j), v).has_value();
}

/// Violations of rho(x ∪ y) = rho(x) ∪ rho(y) over generator pairs with known products.
inline std::vector<std::string> check_naturality(const ReductionMap& red) {
    std::vector<std::string> out;
    const auto& z = red.integral;
    for (const auto& x : z.generators())
        for (const auto& y : z.generators()) {
            if (y < x) continue;
            CupResult xy = z.product_entry(x, y);
            if (!xy) continue;
            CupResult rxy = cup(red.modular, red.apply(z.generator(x)), red.apply(z.generator(y)));
            if (!rxy) continue;
            if (!(*rxy == red.apply(*xy)))
                out.push_back("reduction mod " + red.modulus().str() + " is not multiplicative on " + z.name(x) +
                              " ∪ " + z.name(y) + ": expected " + red.modular.format(red.apply(*xy)) + ", table gives " +
                              red.modular.format(*rxy));
        }
    return out;
}

namespace detail {

inline Integer finite_order(const FgAbGroup& g) {
    Integer n = 1;
    for (const auto& d : g.factors()) n *= d;
    return n;
}

inline Integer image_order(const GroupHom& h) {
    const FgAbGroup& t = h.target();
    IntMatrix rel(t.size() + h.source().size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) rel(i, i) = t.factor(i);
    for (std::size_t c = 0; c < h.source().size(); ++c)
        for (std::size_t r = 0; r < t.size(); ++r) rel(t.size() + c, r) = h.matrix()(r, c);
    return finite_order(t) / finite_order(group_from_presentation(t.size(), rel).group);
}

inline std::vector<RawGenerator> uct_generators(const CohomologyModel& z, int j, const Integer& k) {
    std::vector<RawGenerator> gens;
    for (std::size_t i = 0; i < z.group(j).size(); ++i) {
        const Integer& d = z.group(j).factor(i);
        gens.push_back({z.names(j)[i], d == 0 ? k : igcd(d, k)});
    }
    for (std::size_t i = 0; i < z.group(j + 1).size(); ++i) {
        const Integer& d = z.group(j + 1).factor(i);
        if (d != 0) gens.push_back({"tor(" + z.names(j + 1)[i] + ")", igcd(d, k)});
    }
    return gens;
}

/// Fill UNKNOWN entries between classes in the image of reduction, using rho(x) ∪ rho(y) = rho(x ∪ y).
inline void fill_by_naturality(ReductionMap& red) {
    auto& mod = red.modular;
    for (const auto& a : mod.generators())
        for (const auto& b : mod.generators()) {
            if (b < a || a.degree == 0 || mod.product_entry(a, b)) continue;
            auto xa = solve_hom(red.hom(a.degree), mod.generator(a).value);
            auto xb = solve_hom(red.hom(b.degree), mod.generator(b).value);
            if (!xa || !xb) continue;
            CupResult lifted = cup(red.integral, {a.degree, xa->base}, {b.degree, xb->base});
            if (lifted) mod.set_product(a, b, red.apply(*lifted).value);
        }
}

}  // namespace detail

/// Check a ready-made reduction: homs already well defined, products natural, modular model valid.
inline void require_valid_reduction(const ReductionMap& red, const std::string& what) {
    auto problems = check_naturality(red);
    if (!problems.empty()) {
        std::string msg = what + ":";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ValidationError(msg);
    }
    require_valid(red.modular, what);
}

/// Modular model and reduction homs from the integral model. Groups follow the universal
/// coefficient theorem; products of classes born from Tor come from the supplement or stay UNKNOWN.
inline ReductionMap reduce_model(const CohomologyModel& integral, const Integer& modulus,
                                 const std::optional<ModularSupplement>& supplement = std::nullopt) {
    CoefficientRing ring(modulus);
    const Integer& k = ring.modulus();
    if (k == 0) throw ValidationError("reduction needs a modulus k >= 2");
    if (!integral.ring().is_integral()) throw ValidationError("reduction starts from an integral model");
    const int m = integral.dimension();

    GradedBuilder builder(m, ring, integral.orientable(), integral.simply_connected());
    for (int j = 1; j <= m; ++j) builder.set_degree(j, detail::uct_generators(integral, j, k));

    ReductionMap red;
    red.integral = integral;
    if (!supplement) {
        red.modular = builder.build([&](GeneratorRef p, GeneratorRef q) -> std::optional<IntVector> {
            const std::size_t tp = integral.group(p.degree).size();
            const std::size_t tq = integral.group(q.degree).size();
            if (p.index >= tp || q.index >= tq) return std::nullopt;
            CupResult v = integral.product_entry(p, q);
            if (!v) return std::nullopt;
            IntVector raw(builder.raw(p.degree + q.degree).size());
            for (std::size_t i = 0; i < v->value.size(); ++i) raw[i] = v->value[i];
            return raw;
        });
        for (int j = 0; j <= m; ++j) {
            IntMatrix mat(builder.group(j).size(), integral.group(j).size());
            for (std::size_t i = 0; i < integral.group(j).size(); ++i) {
                IntVector raw(builder.raw(j).size());
                raw[i] = 1;
                IntVector col = builder.to_canonical(j, raw).coordinates();
                for (std::size_t r = 0; r < col.size(); ++r) mat(r, i) = col[r];
            }
            red.per_degree.emplace_back(integral.group(j), builder.group(j), std::move(mat));
        }
        require_valid_reduction(red, "reduction mod " + k.str());
        return red;
    }

    const CohomologyModel& mod = supplement->model;
    if (!(mod.ring() == ring) || mod.dimension() != m)
        throw ValidationError("modular data for " + ring.name() + " has the wrong ring or dimension");
    red.modular = mod;
    for (int j = 0; j <= m; ++j) {
        if (!(mod.group(j) == builder.group(j)))
            throw ValidationError("H^" + std::to_string(j) + " over " + ring.name() + " should be " +
                                  builder.group(j).str() + " by the universal coefficient theorem, found " +
                                  mod.group(j).str());
        IntMatrix mat;
        if (static_cast<std::size_t>(j) < supplement->matrices.size()) mat = supplement->matrices[j];
        if (j == 0 && mat.empty()) mat = IntMatrix::identity(1);
        if (mat.empty() && (integral.group(j).size() != 0 && mod.group(j).size() != 0))
            throw ValidationError("missing reduction matrix in degree " + std::to_string(j));
        try {
            red.per_degree.emplace_back(integral.group(j), mod.group(j), mat);
        } catch (const PresentationError& e) {
            throw ValidationError("reduction in degree " + std::to_string(j) + ": " + e.what());
        }
        Integer expected = detail::finite_order(tensor_with_cyclic(integral.group(j), k));
        if (detail::image_order(red.per_degree.back()) != expected)
            throw ValidationError("reduction in degree " + std::to_string(j) + " must have image of order " +
                                  expected.str() + " (H^" + std::to_string(j) + " ⊗ " + ring.name() + ")");
    }
    if (!(red.per_degree[0].apply(integral.unit().value) == mod.unit().value))
        throw ValidationError("reduction must send the unit to the unit");
    detail::fill_by_naturality(red);
    require_valid_reduction(red, "reduction mod " + k.str());
    return red;
}

}  // namespace sgm
