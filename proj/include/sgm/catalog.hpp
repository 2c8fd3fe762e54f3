#pragma once

#include "sgm/family.hpp"

namespace sgm {

namespace detail {

inline std::string power_name(const std::string& base, int e) { return e == 1 ? base : base + "^" + std::to_string(e); }

inline IntMatrix column_matrix(std::size_t rows, std::size_t cols, std::initializer_list<std::pair<std::size_t, std::size_t>> ones) {
    IntMatrix m(rows, cols);
    for (auto [r, c] : ones) m(r, c) = 1;
    return m;
}

/// Family with explicit modular data for some moduli and UCT defaults for the rest.
inline ModelFamily family_with_supplements(const CohomologyModel& integral,
                                           const std::map<Integer, ModularSupplement>& supplements,
                                           const std::vector<Integer>& moduli) {
    require_valid(integral, "integral model");
    ModelFamily f;
    f.integral = integral;
    for (const auto& k : normalize_moduli(moduli)) {
        auto it = supplements.find(k);
        if (it != supplements.end())
            f.reductions.emplace(k, reduce_model(integral, k, it->second));
        else
            f.reductions.emplace(k, reduce_model(integral, k));
    }
    return f;
}

}  // namespace detail

/// CP^q: truncated polynomial ring on g in degree 2.
inline ModelFamily catalog_cp(const Integer& q_in, const std::vector<Integer>& moduli) {
    if (q_in < 1 || q_in > 64) throw ValidationError("cp(q) is supported for 1 <= q <= 64, got " + q_in.str());
    const int q = static_cast<int>(q_in);
    GradedBuilder b(2 * q, CoefficientRing(), true, true);
    for (int e = 1; e <= q; ++e) b.set_degree(2 * e, {{detail::power_name("g", e), 0}});
    CohomologyModel z = b.build([](GeneratorRef, GeneratorRef) -> std::optional<IntVector> { return IntVector{1}; });
    ModelFamily f = family_from_integral(z, moduli);
    if (q >= 2) f.complex_projective = q;
    return f;
}

/// RP^n for 1 <= n <= 7. Integral ring Z[y]/(2y, y^{floor(n/2)+1}) plus a top class for odd n;
/// the mod-2 ring Z/2[w]/(w^{n+1}) ships as explicit data.
inline ModelFamily catalog_rp(const Integer& n_in, const std::vector<Integer>& moduli) {
    if (n_in < 1 || n_in > 7) throw ValidationError("rp(n) is supported for 1 <= n <= 7, got " + n_in.str());
    const int n = static_cast<int>(n_in);
    const bool odd = n % 2 == 1;
    CohomologyModel z(n, CoefficientRing(), odd, false);
    for (int e = 1; 2 * e <= n; ++e) z.set_group(2 * e, FgAbGroup::cyclic(2), {detail::power_name("y", e)});
    if (odd) z.set_group(n, FgAbGroup::free(1), {"z"});
    for (int a = 1; 2 * a <= n; ++a)
        for (int c = a; 2 * (a + c) <= n; ++c) z.set_product({2 * a, 0}, {2 * c, 0}, z.group(2 * (a + c)).generator(0));

    CohomologyModel w(n, CoefficientRing(2), odd, false);
    for (int e = 1; e <= n; ++e) w.set_group(e, FgAbGroup::cyclic(2), {detail::power_name("w", e)});
    for (int a = 1; a <= n; ++a)
        for (int c = a; a + c <= n; ++c) w.set_product({a, 0}, {c, 0}, w.group(a + c).generator(0));
    ModularSupplement sup{w, {}};
    for (int j = 0; j <= n; ++j) {
        std::size_t cols = z.group(j).size();
        sup.matrices.push_back(cols ? detail::column_matrix(1, 1, {{0, 0}}) : IntMatrix(1, 0));
    }
    return detail::family_with_supplements(z, {{2, sup}}, moduli);
}

/// The Wu manifold SU(3)/SO(3): H^3 = Z/2, with the mod-2 classes z2 (from Tor) and z3.
inline ModelFamily catalog_wu(const std::vector<Integer>& moduli) {
    CohomologyModel z(5, CoefficientRing(), true, true);
    z.set_group(3, FgAbGroup::cyclic(2), {"z3"});
    z.set_group(5, FgAbGroup::free(1), {"top"});

    CohomologyModel w(5, CoefficientRing(2), true, true);
    w.set_group(2, FgAbGroup::cyclic(2), {"z2"});
    w.set_group(3, FgAbGroup::cyclic(2), {"z3"});
    w.set_group(5, FgAbGroup::cyclic(2), {"top"});
    w.set_named_product("z2", "z3", w.group(5).generator(0));
    ModularSupplement sup{w, {IntMatrix::identity(1), IntMatrix(0, 0), IntMatrix(1, 0), IntMatrix::identity(1),
                              IntMatrix(0, 0), IntMatrix::identity(1)}};
    return detail::family_with_supplements(z, {{2, sup}}, moduli);
}

/// Ring data of the six-manifold M0 built from D_{1,2}: H^2 = Z^3, H^3 = Z/2, H^4 = Z/2 + Z^3.
/// Mod 2, e1* comes from Tor and e2* ∪ e4* is the Poincaré dual of e1; other products are not specified.
inline ModelFamily catalog_m0(const std::vector<Integer>& moduli) {
    CohomologyModel z(6, CoefficientRing(), true, true);
    z.set_group(2, FgAbGroup::free(3), {"a2", "a3", "a4"});
    z.set_group(3, FgAbGroup::cyclic(2), {"c3"});
    z.set_group(4, FgAbGroup({2, 0, 0, 0}), {"t4", "w1", "w2", "w3"});
    z.set_group(6, FgAbGroup::free(1), {"top"});
    // forced by torsion: 2·(c3 ∪ c3) = 0 and 2·(a ∪ t4) = 0 inside H^6 = Z
    z.set_named_product("c3", "c3", z.group(6).zero());
    for (const char* a : {"a2", "a3", "a4"}) z.set_named_product(a, "t4", z.group(6).zero());

    CohomologyModel w(6, CoefficientRing(2), true, true);
    w.set_group(2, FgAbGroup({2, 2, 2, 2}), {"e1s", "e2s", "e3s", "e4s"});
    w.set_group(3, FgAbGroup({2, 2}), {"r_c3", "tor_t4"});
    w.set_group(4, FgAbGroup({2, 2, 2, 2}), {"pd_e1", "pd_e2", "pd_e3", "pd_e4"});
    w.set_group(6, FgAbGroup::cyclic(2), {"top"});
    w.set_named_product("e2s", "e4s", w.group(4).generator(0));

    IntMatrix r2(4, 3);
    r2(1, 0) = r2(2, 1) = r2(3, 2) = 1;
    IntMatrix r3(2, 1);
    r3(0, 0) = 1;
    ModularSupplement sup{w, {IntMatrix::identity(1), IntMatrix(0, 0), r2, r3, IntMatrix::identity(4), IntMatrix(0, 0),
                              IntMatrix::identity(1)}};
    return detail::family_with_supplements(z, {{2, sup}}, moduli);
}

inline ModelFamily eval_catalog(const std::string& name, const std::vector<Integer>& moduli) {
    std::string key;
    for (char c : name) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key == "cp2") return catalog_cp(2, moduli);
    if (key == "cp3") return catalog_cp(3, moduli);
    if (key == "wu") return catalog_wu(moduli);
    if (key == "m0" || key == "m0_fixture") return catalog_m0(moduli);
    if (key.size() == 3 && key.rfind("rp", 0) == 0 && std::isdigit(static_cast<unsigned char>(key[2])))
        return catalog_rp(key[2] - '0', moduli);
    throw ValidationError("unknown catalog entry '" + name + "'");
}

}  // namespace sgm
