#pragma once

#include "sgm/model.hpp"

#include <functional>

namespace sgm {

struct RawGenerator {
    std::string name;
    /// 0 for an infinite cyclic summand.
    Integer order;
};

/// Raw product of raw generators, as raw coordinates in the sum degree; nullopt for UNKNOWN.
using RawProduct = std::function<std::optional<IntVector>(GeneratorRef, GeneratorRef)>;

/// Assembles a model from direct sums of named cyclic groups that need not be in
/// invariant-factor order, then rewrites everything in canonical coordinates.
class GradedBuilder {
public:
    GradedBuilder(int dimension, CoefficientRing ring, bool orientable, bool simply_connected)
        : m_(dimension), ring_(ring), orientable_(orientable), simply_connected_(simply_connected) {
        raw_.resize(static_cast<std::size_t>(m_) + 1);
        parts_.resize(static_cast<std::size_t>(m_) + 1);
        set_degree(0, {{"1", ring_.modulus()}});
    }

    int dimension() const { return m_; }

    void set_degree(int j, std::vector<RawGenerator> gens) {
        if (j < 0 || j > m_) throw DegreeError("raw degree " + std::to_string(j) + " out of range");
        IntVector orders;
        for (const auto& g : gens) orders.push_back(abs(g.order));
        raw_[j] = std::move(gens);
        parts_[j] = decompose_cyclic_sum(orders);
    }

    const std::vector<RawGenerator>& raw(int j) const { return raw_.at(static_cast<std::size_t>(j)); }
    const FgAbGroup& group(int j) const { return parts_.at(static_cast<std::size_t>(j)).presentation.group; }

    GroupElement to_canonical(int j, const IntVector& raw_coords) const {
        const auto& p = parts_.at(static_cast<std::size_t>(j)).presentation;
        return p.projection.apply(p.projection.source().element(raw_coords));
    }
    /// Raw coordinates of canonical generator i.
    IntVector section(int j, std::size_t i) const {
        return parts_.at(static_cast<std::size_t>(j)).presentation.section.row(i);
    }

    std::vector<std::string> canonical_names(int j) const {
        const auto& part = parts_.at(static_cast<std::size_t>(j));
        const auto& gens = raw_.at(static_cast<std::size_t>(j));
        std::vector<std::string> out;
        for (std::size_t i = 0; i < part.presentation.group.size(); ++i) {
            if (part.permutation) {
                out.push_back(gens[(*part.permutation)[i]].name);
                continue;
            }
            // no relabeling available: name the combination
            IntVector s = section(j, i);
            std::string combo;
            for (std::size_t r = 0; r < s.size(); ++r) {
                if (s[r] == 0) continue;
                if (!combo.empty() || s[r] < 0) combo += s[r] < 0 ? "-" : "+";
                if (abs(s[r]) != 1) combo += Integer(abs(s[r])).str() + "*";
                combo += gens[r].name;
            }
            out.push_back("[" + combo + "]");
        }
        return out;
    }

    CohomologyModel build(const RawProduct& raw_product) const {
        CohomologyModel model(m_, ring_, orientable_, simply_connected_);
        for (int j = 1; j <= m_; ++j) model.set_group(j, group(j), canonical_names(j));
        for (int i = 1; i <= m_; ++i)
            for (int j = i; i + j <= m_; ++j) {
                if (group(i + j).is_trivial()) continue;
                for (std::size_t a = 0; a < group(i).size(); ++a)
                    for (std::size_t b = (i == j ? a : 0); b < group(j).size(); ++b)
                        if (auto v = canonical_product(raw_product, i, a, j, b)) model.set_product({i, a}, {j, b}, *v);
            }
        return model;
    }

private:
    std::optional<GroupElement> canonical_product(const RawProduct& raw_product, int i, std::size_t a, int j,
                                                  std::size_t b) const {
        IntVector sa = section(i, a);
        IntVector sb = section(j, b);
        IntVector total(raw(i + j).size());
        for (std::size_t p = 0; p < sa.size(); ++p) {
            if (sa[p] == 0) continue;
            for (std::size_t q = 0; q < sb.size(); ++q) {
                if (sb[q] == 0) continue;
                auto v = raw_product({i, p}, {j, q});
                if (!v) return std::nullopt;
                for (std::size_t r = 0; r < total.size(); ++r) total[r] += sa[p] * sb[q] * (*v)[r];
            }
        }
        return to_canonical(i + j, total);
    }

    int m_;
    CoefficientRing ring_;
    bool orientable_;
    bool simply_connected_;
    std::vector<std::vector<RawGenerator>> raw_;
    std::vector<CyclicSumDecomposition> parts_;
};

}  // namespace sgm
