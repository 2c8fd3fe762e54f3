#pragma once

#include "sgm/reduction.hpp"

#include <map>
#include <set>
#include <tuple>

namespace sgm {

/// An integral model together with its reductions to the requested moduli.
struct ModelFamily {
    CohomologyModel integral;
    std::map<Integer, ReductionMap> reductions;
    std::vector<std::string> notices;
    /// q when the family is the catalog entry CP^q.
    std::optional<int> complex_projective;
    /// Number of top-level product factors, used for generator naming.
    int leaves = 1;

    int dimension() const { return integral.dimension(); }
    bool has(const Integer& k) const { return k == 0 || reductions.count(k) > 0; }
    const CohomologyModel& model(const Integer& k) const {
        if (k == 0) return integral;
        auto it = reductions.find(k);
        if (it == reductions.end()) throw ValidationError("no model over Z/" + k.str() + " is available");
        return it->second.modular;
    }
    const ReductionMap& reduction(const Integer& k) const {
        auto it = reductions.find(k);
        if (it == reductions.end()) throw ValidationError("no reduction mod " + k.str() + " is available");
        return it->second;
    }
    std::vector<Integer> moduli() const {
        std::vector<Integer> out{0};
        for (const auto& [k, red] : reductions) out.push_back(k);
        return out;
    }
};

/// Moduli other than 0, normalized and deduplicated.
inline std::vector<Integer> normalize_moduli(const std::vector<Integer>& moduli) {
    std::set<Integer> out;
    for (const auto& k : moduli) {
        CoefficientRing ring(k);
        if (ring.modulus() != 0) out.insert(ring.modulus());
    }
    return {out.begin(), out.end()};
}

/// Family whose integral model is torsion-free or whose modular data is derived by UCT alone.
inline ModelFamily family_from_integral(const CohomologyModel& integral, const std::vector<Integer>& moduli) {
    require_valid(integral, "integral model");
    ModelFamily f;
    f.integral = integral;
    for (const auto& k : normalize_moduli(moduli)) f.reductions.emplace(k, reduce_model(integral, k));
    return f;
}

inline ModelFamily eval_sphere(const Integer& n_in, const std::vector<Integer>& moduli) {
    if (n_in < 1) throw DegreeError("sphere dimension must be at least 1, got " + n_in.str());
    if (n_in > 4096) throw DegreeError("sphere dimension " + n_in.str() + " is too large");
    const int n = static_cast<int>(n_in);
    GradedBuilder b(n, CoefficientRing(), true, n >= 2);
    b.set_degree(n, {{"s" + std::to_string(n), 0}});
    return family_from_integral(b.build([](GeneratorRef, GeneratorRef) { return std::nullopt; }), moduli);
}

namespace detail {

// Split on top-level ⊗, ignoring separators inside brackets.
inline std::vector<std::string> tensor_components(const std::string& name) {
    static const std::string sep = "⊗";
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (depth == 0 && name.compare(i, sep.size(), sep) == 0) {
            out.push_back(name.substr(start, i - start));
            i += sep.size() - 1;
            start = i + 1;
        }
    }
    out.push_back(name.substr(start));
    return out;
}

inline bool is_wrapped(const std::string& s) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth == 0 && i + 1 < s.size()) return false;
    }
    return true;
}

/// Give every leaf of a product factor its global position: "s2" -> "s2#3", "s2#1" -> "s2#(1+offset)".
inline std::string relabel_leaves(const std::string& name, int offset) {
    std::string out;
    for (const auto& comp : tensor_components(name)) {
        if (!out.empty()) out += "⊗";
        std::size_t hash = comp.rfind('#');
        bool suffixed = hash != std::string::npos && hash + 1 < comp.size() &&
                        comp.find_first_not_of("0123456789", hash + 1) == std::string::npos;
        if (suffixed) {
            std::string stem = comp.substr(0, hash);
            if (is_wrapped(stem) || stem.find('.') == std::string::npos) {
                out += stem + "#" + std::to_string(std::stoi(comp.substr(hash + 1)) + offset);
                continue;
            }
        }
        bool plain = comp.find('.') == std::string::npos && comp.find('#') == std::string::npos;
        out += (plain ? comp : "(" + comp + ")") + "#" + std::to_string(offset + 1);
    }
    return out;
}

inline std::string tensor_name(const std::string& a, const std::string& b) {
    if (a == "1") return b;
    if (b == "1") return a;
    return a + "⊗" + b;
}

using KeyTriple = std::tuple<int, std::size_t, std::size_t>;

/// Künneth layout for one ring: raw generator (degree d, slot) <-> (left degree, left index, right index).
struct KunnethLayout {
    std::vector<std::vector<KeyTriple>> slots;
    std::vector<std::map<KeyTriple, std::size_t>> index;
};

inline KunnethLayout kunneth_layout(const CohomologyModel& a, const CohomologyModel& b, int offset,
                                    GradedBuilder& builder) {
    const int m = a.dimension() + b.dimension();
    KunnethLayout lay;
    lay.slots.resize(static_cast<std::size_t>(m) + 1);
    lay.index.resize(static_cast<std::size_t>(m) + 1);
    for (int d = 1; d <= m; ++d) {
        std::vector<std::pair<std::string, std::pair<KeyTriple, Integer>>> gens;
        for (int i = std::max(0, d - b.dimension()); i <= std::min(d, a.dimension()); ++i)
            for (std::size_t x = 0; x < a.group(i).size(); ++x)
                for (std::size_t y = 0; y < b.group(d - i).size(); ++y) {
                    const Integer& ox = a.group(i).factor(x);
                    const Integer& oy = b.group(d - i).factor(y);
                    Integer order = ox == 0 ? oy : (oy == 0 ? ox : igcd(ox, oy));
                    std::string name = tensor_name(i == 0 ? "1" : relabel_leaves(a.names(i)[x], 0),
                                                   d - i == 0 ? "1" : relabel_leaves(b.names(d - i)[y], offset));
                    gens.push_back({name, {{i, x, y}, order}});
                }
        std::stable_sort(gens.begin(), gens.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
        std::vector<RawGenerator> raw;
        for (std::size_t s = 0; s < gens.size(); ++s) {
            raw.push_back({gens[s].first, gens[s].second.second});
            lay.slots[d].push_back(gens[s].second.first);
            lay.index[d][gens[s].second.first] = s;
        }
        builder.set_degree(d, raw);
    }
    lay.slots[0].push_back({0, 0, 0});
    lay.index[0][{0, 0, 0}] = 0;
    return lay;
}

/// (x1 ⊗ y1) ∪ (x2 ⊗ y2) = (-1)^{|y1||x2|} (x1 ∪ x2) ⊗ (y1 ∪ y2)
inline RawProduct kunneth_product(const CohomologyModel& a, const CohomologyModel& b, const KunnethLayout& lay) {
    return [&a, &b, &lay](GeneratorRef p, GeneratorRef q) -> std::optional<IntVector> {
        const auto [i1, x1, y1] = lay.slots[p.degree][p.index];
        const auto [i2, x2, y2] = lay.slots[q.degree][q.index];
        const int j1 = p.degree - i1;
        const int j2 = q.degree - i2;
        const int d = p.degree + q.degree;
        IntVector out(lay.slots[d].size());
        CupResult cx = a.product_entry({i1, x1}, {i2, x2});
        CupResult cy = b.product_entry({j1, y1}, {j2, y2});
        if ((cx && cx->value.is_zero()) || (cy && cy->value.is_zero())) return out;
        if (!cx || !cy) return std::nullopt;
        const int sign = koszul_sign(j1, i2);
        for (std::size_t s = 0; s < cx->value.size(); ++s) {
            if (cx->value[s] == 0) continue;
            for (std::size_t t = 0; t < cy->value.size(); ++t) {
                if (cy->value[t] == 0) continue;
                out[lay.index[d].at({i1 + i2, s, t})] += sign * cx->value[s] * cy->value[t];
            }
        }
        return out;
    };
}

inline bool has_torsion(const CohomologyModel& z) {
    for (int j = 0; j <= z.dimension(); ++j)
        if (!z.group(j).is_free()) return true;
    return false;
}

inline ModelFamily product_of_two(const ModelFamily& fa, const ModelFamily& fb, const std::vector<Integer>& moduli) {
    const CohomologyModel& a = fa.integral;
    const CohomologyModel& b = fb.integral;
    if (has_torsion(a) && has_torsion(b))
        throw UnsupportedProductError(
            "product of two factors with torsion in integral cohomology is not supported: the Künneth Tor terms "
            "are not modeled, so at most one factor may have torsion");
    const int m = a.dimension() + b.dimension();
    const bool orientable = a.orientable() && b.orientable();
    const bool sc = a.simply_connected() && b.simply_connected();
    const int offset = fa.leaves;

    ModelFamily out;
    out.leaves = fa.leaves + fb.leaves;
    out.notices = fa.notices;
    out.notices.insert(out.notices.end(), fb.notices.begin(), fb.notices.end());

    GradedBuilder zb(m, CoefficientRing(), orientable, sc);
    KunnethLayout zl = kunneth_layout(a, b, offset, zb);
    out.integral = zb.build(kunneth_product(a, b, zl));
    require_valid(out.integral, "product model");

    for (const auto& k : normalize_moduli(moduli)) {
        if (!is_prime(k)) {
            if (has_torsion(out.integral)) {
                out.notices.push_back("skipped Z/" + k.str() +
                                      " for a product: the modulus is not prime and the integral cohomology has torsion");
                continue;
            }
            out.reductions.emplace(k, reduce_model(out.integral, k));
            continue;
        }
        if (!fa.has(k) || !fb.has(k)) {
            out.notices.push_back("skipped Z/" + k.str() + " for a product: a factor has no model over Z/" + k.str());
            continue;
        }
        const ReductionMap& ra = fa.reduction(k);
        const ReductionMap& rb = fb.reduction(k);
        GradedBuilder kb(m, CoefficientRing(k), orientable, sc);
        KunnethLayout kl = kunneth_layout(ra.modular, rb.modular, offset, kb);
        ReductionMap red;
        red.integral = out.integral;
        red.modular = kb.build(kunneth_product(ra.modular, rb.modular, kl));
        // rho acts factorwise on raw tensor generators
        for (int d = 0; d <= m; ++d) {
            const FgAbGroup& src = out.integral.group(d);
            const FgAbGroup& tgt = red.modular.group(d);
            IntMatrix mat(tgt.size(), src.size());
            for (std::size_t c = 0; c < src.size(); ++c) {
                IntVector raw_src = d == 0 ? IntVector{1} : zb.section(d, c);
                IntVector raw_tgt(kl.slots[d].size());
                for (std::size_t s = 0; s < raw_src.size(); ++s) {
                    if (raw_src[s] == 0) continue;
                    const auto [i, x, y] = zl.slots[d][s];
                    GroupElement rx = ra.hom(i).image_of_generator(x);
                    GroupElement ry = rb.hom(d - i).image_of_generator(y);
                    for (std::size_t p = 0; p < rx.size(); ++p)
                        for (std::size_t q = 0; q < ry.size(); ++q)
                            if (rx[p] != 0 && ry[q] != 0)
                                raw_tgt[kl.index[d].at({i, p, q})] += raw_src[s] * rx[p] * ry[q];
                }
                IntVector col = d == 0 ? raw_tgt : kb.to_canonical(d, raw_tgt).coordinates();
                for (std::size_t r = 0; r < col.size(); ++r) mat(r, c) = col[r];
            }
            red.per_degree.emplace_back(src, tgt, std::move(mat));
        }
        require_valid_reduction(red, "product reduction mod " + k.str());
        out.reductions.emplace(k, std::move(red));
    }
    return out;
}

}  // namespace detail

/// Künneth product, folded from the left.
inline ModelFamily eval_product(const std::vector<ModelFamily>& factors, const std::vector<Integer>& moduli) {
    if (factors.size() < 2) throw ValidationError("product needs at least two factors");
    ModelFamily acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = detail::product_of_two(acc, factors[i], moduli);
    return acc;
}

namespace detail {

inline std::string summand_name(std::size_t s, const std::string& name) {
    bool compound = name.find("⊗") != std::string::npos;
    return "summand" + std::to_string(s + 1) + "." + (compound ? "(" + name + ")" : name);
}

/// Fused direct sum of the summand models over one ring.
struct SumLayout {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> slots;  // degree -> (summand, index)
    std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>> index;
};

inline CohomologyModel fuse(const std::vector<const CohomologyModel*>& parts, GradedBuilder& builder,
                            SumLayout& lay) {
    const int m = builder.dimension();
    lay.slots.assign(static_cast<std::size_t>(m) + 1, {});
    lay.index.assign(static_cast<std::size_t>(m) + 1, {});
    for (int j = 1; j < m; ++j) {
        std::vector<RawGenerator> raw;
        for (std::size_t s = 0; s < parts.size(); ++s)
            for (std::size_t i = 0; i < parts[s]->group(j).size(); ++i) {
                lay.index[j][{s, i}] = raw.size();
                lay.slots[j].push_back({s, i});
                raw.push_back({summand_name(s, parts[s]->names(j)[i]), parts[s]->group(j).factor(i)});
            }
        builder.set_degree(j, raw);
    }
    builder.set_degree(m, {{"top", builder.group(0).factor(0)}});
    return builder.build([&](GeneratorRef p, GeneratorRef q) -> std::optional<IntVector> {
        const int d = p.degree + q.degree;
        IntVector out(d == m ? 1 : lay.slots[d].size());
        auto [s, x] = lay.slots[p.degree][p.index];
        auto [t, y] = lay.slots[q.degree][q.index];
        if (s != t) return out;
        CupResult v = parts[s]->product_entry({p.degree, x}, {q.degree, y});
        if (!v) return std::nullopt;
        if (d == m) {
            out[0] = v->value[0];
            return out;
        }
        for (std::size_t i = 0; i < v->value.size(); ++i) out[lay.index[d].at({s, i})] = v->value[i];
        return out;
    });
}

}  // namespace detail

inline ModelFamily eval_connected_sum(const std::vector<ModelFamily>& summands, const std::vector<Integer>& moduli) {
    if (summands.size() < 2) throw ValidationError("connected sum needs at least two summands");
    const int m = summands.front().dimension();
    for (std::size_t s = 0; s < summands.size(); ++s) {
        const auto& z = summands[s].integral;
        const std::string which = "connected sum operand " + std::to_string(s + 1);
        if (z.dimension() != m)
            throw ValidationError(which + " has dimension " + std::to_string(z.dimension()) + ", expected " +
                                  std::to_string(m));
        if (m < 3) throw ValidationError("connected sums need dimension at least 3");
        if (!z.simply_connected()) throw ValidationError(which + " is not simply connected");
        if (!z.orientable()) throw ValidationError(which + " is not orientable");
    }

    ModelFamily out;
    for (const auto& f : summands) out.notices.insert(out.notices.end(), f.notices.begin(), f.notices.end());

    std::vector<const CohomologyModel*> zparts;
    for (const auto& f : summands) zparts.push_back(&f.integral);
    GradedBuilder zb(m, CoefficientRing(), true, true);
    detail::SumLayout zl;
    out.integral = detail::fuse(zparts, zb, zl);
    require_valid(out.integral, "connected sum model");

    for (const auto& k : normalize_moduli(moduli)) {
        bool available = true;
        for (const auto& f : summands) available = available && f.has(k);
        if (!available) {
            out.notices.push_back("skipped Z/" + k.str() + " for a connected sum: a summand has no model over Z/" +
                                  k.str());
            continue;
        }
        std::vector<const CohomologyModel*> kparts;
        for (const auto& f : summands) kparts.push_back(&f.reduction(k).modular);
        GradedBuilder kb(m, CoefficientRing(k), true, true);
        detail::SumLayout kl;
        ReductionMap red;
        red.integral = out.integral;
        red.modular = detail::fuse(kparts, kb, kl);
        const Integer top_image = summands.front().reduction(k).hom(m).matrix()(0, 0);
        for (const auto& f : summands)
            if (f.reduction(k).hom(m).matrix()(0, 0) != top_image)
                throw ValidationError("connected sum summands reduce their top classes differently mod " + k.str());
        for (int d = 0; d <= m; ++d) {
            const FgAbGroup& src = out.integral.group(d);
            const FgAbGroup& tgt = red.modular.group(d);
            IntMatrix mat(tgt.size(), src.size());
            for (std::size_t c = 0; c < src.size(); ++c) {
                if (d == 0 || d == m) {
                    mat(0, 0) = d == 0 ? Integer(1) : top_image;
                    continue;
                }
                IntVector raw_src = zb.section(d, c);
                IntVector raw_tgt(kl.slots[d].size());
                for (std::size_t r = 0; r < raw_src.size(); ++r) {
                    if (raw_src[r] == 0) continue;
                    auto [s, x] = zl.slots[d][r];
                    GroupElement img = summands[s].reduction(k).hom(d).image_of_generator(x);
                    for (std::size_t i = 0; i < img.size(); ++i) raw_tgt[kl.index[d].at({s, i})] += raw_src[r] * img[i];
                }
                IntVector col = kb.to_canonical(d, raw_tgt).coordinates();
                for (std::size_t r = 0; r < col.size(); ++r) mat(r, c) = col[r];
            }
            red.per_degree.emplace_back(src, tgt, std::move(mat));
        }
        require_valid_reduction(red, "connected sum reduction mod " + k.str());
        out.reductions.emplace(k, std::move(red));
    }
    return out;
}

}  // namespace sgm
