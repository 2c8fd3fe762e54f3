#pragma once

// Finitely generated abelian groups in invariant-factor form.

#include "sgm/errors.hpp"
#include "sgm/integer.hpp"
#include "sgm/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sgm {

/// Coordinates relative to the invariant-factor generators of some group.
class GroupElement {
public:
    GroupElement() = default;
    explicit GroupElement(IntVector coords) : coords_(std::move(coords)) {}

    const IntVector& coordinates() const { return coords_; }
    std::size_t size() const { return coords_.size(); }
    const Integer& operator[](std::size_t i) const { return coords_[i]; }
    bool is_zero() const { return is_zero_vector(coords_); }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend bool operator<(const GroupElement& a, const GroupElement& b) { return a.coords_ < b.coords_; }

    friend std::ostream& operator<<(std::ostream& os, const GroupElement& x) {
        os << '(';
        for (std::size_t i = 0; i < x.coords_.size(); ++i) os << (i ? "," : "") << x.coords_[i];
        return os << ')';
    }

private:
    IntVector coords_;
};

/// Z/d_1 + ... + Z/d_s + Z^r with d_1 | ... | d_s, stored as (d_1, ..., d_s, 0, ..., 0).
class FgAbGroup {
public:
    FgAbGroup() = default;

    explicit FgAbGroup(IntVector factors) : factors_(std::move(factors)) {
        bool seen_zero = false;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            const Integer& d = factors_[i];
            if (d < 0 || d == 1) throw PresentationError("invariant factor " + d.str() + " is not allowed");
            if (d == 0) {
                seen_zero = true;
                continue;
            }
            if (seen_zero) throw PresentationError("finite invariant factors must precede infinite ones");
            if (i > 0 && d % factors_[i - 1] != 0)
                throw PresentationError("invariant factors must form a divisibility chain");
        }
    }

    static FgAbGroup trivial() { return FgAbGroup(); }
    static FgAbGroup free(std::size_t rank) { return FgAbGroup(IntVector(rank, 0)); }
    static FgAbGroup cyclic(const Integer& d) {
        if (d == 1) return FgAbGroup();
        return FgAbGroup(IntVector{abs(d)});
    }
    /// Normal form of an arbitrary direct sum of cyclic groups (0 = Z, 1 = trivial).
    static FgAbGroup from_cyclic_orders(const IntVector& orders);

    const IntVector& factors() const { return factors_; }
    std::size_t size() const { return factors_.size(); }
    const Integer& factor(std::size_t i) const { return factors_[i]; }
    bool is_trivial() const { return factors_.empty(); }

    std::size_t free_rank() const {
        return static_cast<std::size_t>(std::count(factors_.begin(), factors_.end(), Integer(0)));
    }
    std::size_t torsion_size() const { return factors_.size() - free_rank(); }
    bool is_finite() const { return free_rank() == 0; }
    bool is_free() const { return torsion_size() == 0; }

    Integer torsion_order() const {
        Integer p = 1;
        for (const auto& d : factors_)
            if (d != 0) p *= d;
        return p;
    }

    bool contains(const GroupElement& x) const {
        if (x.size() != factors_.size()) return false;
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (factors_[i] != 0 && (x[i] < 0 || x[i] >= factors_[i])) return false;
        return true;
    }
    void require(const GroupElement& x) const {
        if (!contains(x)) {
            std::ostringstream os;
            os << "element " << x << " does not belong to " << *this;
            throw OwnershipError(os.str());
        }
    }

    GroupElement zero() const { return GroupElement(IntVector(factors_.size())); }
    GroupElement generator(std::size_t i) const {
        IntVector v(factors_.size());
        v.at(i) = 1;
        return GroupElement(std::move(v));
    }
    /// Canonical representative of an arbitrary coordinate vector.
    GroupElement element(IntVector coords) const {
        if (coords.size() != factors_.size()) throw OwnershipError("coordinate count does not match group");
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = floor_mod(coords[i], factors_[i]);
        return GroupElement(std::move(coords));
    }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        require(a);
        require(b);
        IntVector v = a.coordinates();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += b[i];
        return element(std::move(v));
    }
    GroupElement negate(const GroupElement& a) const { return scale(a, -1); }
    GroupElement subtract(const GroupElement& a, const GroupElement& b) const { return add(a, negate(b)); }
    GroupElement scale(const GroupElement& a, const Integer& n) const {
        require(a);
        IntVector v = a.coordinates();
        for (auto& x : v) x *= n;
        return element(std::move(v));
    }

    friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;

    friend std::ostream& operator<<(std::ostream& os, const FgAbGroup& g) {
        if (g.factors_.empty()) return os << "0";
        for (std::size_t i = 0; i < g.factors_.size(); ++i) {
            os << (i ? " + " : "");
            if (g.factors_[i] == 0)
                os << "Z";
            else
                os << "Z/" << g.factors_[i];
        }
        return os;
    }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

private:
    IntVector factors_;
};

/// Homomorphism given by an integer matrix acting on coordinate columns.
class GroupHom {
public:
    GroupHom() = default;
    GroupHom(FgAbGroup source, FgAbGroup target, IntMatrix matrix)
        : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
        if (matrix_.rows() != target_.size() || matrix_.cols() != source_.size()) {
            if (!matrix_.empty() || (source_.size() != 0 && target_.size() != 0))
                throw PresentationError("homomorphism matrix shape does not match its groups");
            matrix_ = IntMatrix(target_.size(), source_.size());
        }
        for (std::size_t r = 0; r < matrix_.rows(); ++r)
            for (std::size_t c = 0; c < matrix_.cols(); ++c)
                matrix_(r, c) = floor_mod(matrix_(r, c), target_.factor(r));
        for (std::size_t c = 0; c < source_.size(); ++c) {
            const Integer& d = source_.factor(c);
            if (d == 0) continue;
            for (std::size_t r = 0; r < target_.size(); ++r)
                if (floor_mod(d * matrix_(r, c), target_.factor(r)) != 0)
                    throw PresentationError("homomorphism is not well defined on a generator of order " + d.str());
        }
    }

    static GroupHom identity(const FgAbGroup& g) { return GroupHom(g, g, IntMatrix::identity(g.size())); }

    const FgAbGroup& source() const { return source_; }
    const FgAbGroup& target() const { return target_; }
    const IntMatrix& matrix() const { return matrix_; }

    GroupElement apply(const GroupElement& x) const {
        source_.require(x);
        return target_.element(matrix_.apply(x.coordinates()));
    }
    GroupElement image_of_generator(std::size_t i) const { return target_.element(matrix_.column(i)); }

    friend bool operator==(const GroupHom&, const GroupHom&) = default;

private:
    FgAbGroup source_;
    FgAbGroup target_;
    IntMatrix matrix_;
};

/// base + span(kernel_generators)
struct Coset {
    GroupElement base;
    std::vector<GroupElement> kernel_generators;
};

/// Cokernel of a relation matrix together with the coordinate change.
struct Presentation {
    FgAbGroup group;
    /// Free group on the presentation generators -> group.
    GroupHom projection;
    /// Row k: a preimage of canonical generator k in presentation coordinates.
    IntMatrix section;
};

/// Cokernel of the relations (one relation per row) on generator_count generators.
inline Presentation group_from_presentation(std::size_t generator_count, const IntMatrix& relations) {
    IntMatrix rel = relations;
    if (rel.rows() == 0)
        rel = IntMatrix(0, generator_count);
    else if (rel.cols() != generator_count)
        throw PresentationError("relation matrix has " + std::to_string(rel.cols()) + " columns, expected " +
                                std::to_string(generator_count));

    // Rows of D span the relations in coordinates x' = x * V.
    SmithForm snf = smith_normal_form(rel);
    const std::size_t diag = std::min(rel.rows(), generator_count);
    IntVector factors;
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < generator_count; ++j) {
        Integer d = j < diag ? snf.D(j, j) : Integer(0);
        if (d == 1) continue;
        factors.push_back(d);
        kept.push_back(j);
    }
    FgAbGroup group(factors);
    IntMatrix proj(kept.size(), generator_count);
    for (std::size_t k = 0; k < kept.size(); ++k)
        for (std::size_t i = 0; i < generator_count; ++i) proj(k, i) = snf.V(i, kept[k]);
    IntMatrix v_inv = generator_count ? inverse_unimodular(snf.V) : IntMatrix();
    IntMatrix section(kept.size(), generator_count);
    for (std::size_t k = 0; k < kept.size(); ++k)
        for (std::size_t i = 0; i < generator_count; ++i) section(k, i) = v_inv(kept[k], i);
    GroupHom projection(FgAbGroup::free(generator_count), group, std::move(proj));
    return {std::move(group), std::move(projection), std::move(section)};
}

inline FgAbGroup FgAbGroup::from_cyclic_orders(const IntVector& orders) {
    IntMatrix rel(orders.size(), orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) rel(i, i) = abs(orders[i]);
    return group_from_presentation(orders.size(), rel).group;
}

/// Presentation of a direct sum of cyclic groups. When the orders can be put in
/// invariant-factor order by sorting, the basis change is a pure relabeling.
struct CyclicSumDecomposition {
    Presentation presentation;
    /// permutation[k] = raw index of canonical generator k, when the basis change is a relabeling.
    std::optional<std::vector<std::size_t>> permutation;
};

inline CyclicSumDecomposition decompose_cyclic_sum(const IntVector& orders) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < orders.size(); ++i)
        if (orders[i] != 1) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const Integer& x = orders[a];
        const Integer& y = orders[b];
        if ((x == 0) != (y == 0)) return y == 0;
        return x < y;
    });
    bool chain = true;
    for (std::size_t k = 1; k < idx.size() && chain; ++k) {
        const Integer& prev = orders[idx[k - 1]];
        const Integer& cur = orders[idx[k]];
        if (cur != 0 && cur % prev != 0) chain = false;
    }
    if (!chain) {
        IntMatrix rel(orders.size(), orders.size());
        for (std::size_t i = 0; i < orders.size(); ++i) rel(i, i) = abs(orders[i]);
        return {group_from_presentation(orders.size(), rel), std::nullopt};
    }
    IntVector factors;
    IntMatrix proj(idx.size(), orders.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        factors.push_back(abs(orders[idx[k]]));
        proj(k, idx[k]) = 1;
    }
    FgAbGroup group(factors);
    IntMatrix section = proj;
    GroupHom projection(FgAbGroup::free(orders.size()), group, std::move(proj));
    return {{std::move(group), std::move(projection), std::move(section)}, idx};
}

/// Order of x, or nullopt when the order is infinite.
inline std::optional<Integer> element_order(const FgAbGroup& g, const GroupElement& x) {
    g.require(x);
    Integer order = 1;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (x[i] == 0) continue;
        if (g.factor(i) == 0) return std::nullopt;
        order = ilcm(order, g.factor(i) / igcd(g.factor(i), x[i]));
    }
    return order;
}

inline bool is_divisible_by(const FgAbGroup& g, const GroupElement& x, const Integer& n) {
    g.require(x);
    if (n < 2) throw std::invalid_argument("divisibility is only asked for n >= 2");
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Integer& d = g.factor(i);
        Integer step = d == 0 ? n : igcd(n, d);
        if (x[i] % step != 0) return false;
    }
    return true;
}

/// Full preimage h^{-1}(v), or nullopt when empty.
inline std::optional<Coset> solve_hom(const GroupHom& h, const GroupElement& v) {
    h.target().require(v);
    const FgAbGroup& src = h.source();
    const FgAbGroup& tgt = h.target();
    const std::size_t s = src.size();
    const std::size_t t = tgt.size();
    if (t == 0) {
        std::vector<GroupElement> gens;
        for (std::size_t i = 0; i < s; ++i) gens.push_back(src.generator(i));
        return Coset{src.zero(), std::move(gens)};
    }

    // [M | diag(target factors)] w = v over the integers.
    IntMatrix b(t, s + t);
    for (std::size_t r = 0; r < t; ++r) {
        for (std::size_t c = 0; c < s; ++c) b(r, c) = h.matrix()(r, c);
        b(r, s + r) = tgt.factor(r);
    }
    SmithForm snf = smith_normal_form(b);
    IntVector c = snf.U.apply(v.coordinates());
    IntVector y(s + t);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < t; ++i) {
        const Integer& d = snf.D(i, i);
        if (d == 0) {
            if (c[i] != 0) return std::nullopt;
            continue;
        }
        if (c[i] % d != 0) return std::nullopt;
        y[i] = c[i] / d;
        rank = i + 1;
    }
    IntVector w = snf.V.apply(y);
    Coset out;
    out.base = src.element(IntVector(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(s)));
    std::set<GroupElement> seen;
    for (std::size_t j = rank; j < s + t; ++j) {
        IntVector col = snf.V.column(j);
        GroupElement g = src.element(IntVector(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(s)));
        if (g.is_zero() || !seen.insert(g).second) continue;
        out.kernel_generators.push_back(std::move(g));
    }
    return out;
}

/// Image of x in G modulo its torsion subgroup (the coordinates on infinite factors).
inline IntVector free_part(const FgAbGroup& g, const GroupElement& x) {
    g.require(x);
    IntVector out;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.factor(i) == 0) out.push_back(x[i]);
    return out;
}

inline bool coset_contains_infinite_order(const FgAbGroup& g, const Coset& c) {
    if (!is_zero_vector(free_part(g, c.base))) return true;
    for (const auto& k : c.kernel_generators)
        if (!is_zero_vector(free_part(g, k))) return true;
    return false;
}

/// Rank of the subgroup generated by the images of the elements modulo torsion.
inline std::size_t rank_modulo_torsion(const FgAbGroup& g, const std::vector<GroupElement>& elements) {
    if (elements.empty() || g.free_rank() == 0) return 0;
    IntMatrix m(elements.size(), g.free_rank());
    for (std::size_t r = 0; r < elements.size(); ++r) {
        IntVector f = free_part(g, elements[r]);
        for (std::size_t c = 0; c < f.size(); ++c) m(r, c) = f[c];
    }
    return integer_rank(m);
}

struct TorsionSplit {
    /// Fi(G): the finite invariant factors.
    FgAbGroup torsion;
    /// rank of Fr(G)
    std::size_t free_rank = 0;
};

inline TorsionSplit torsion_and_free(const FgAbGroup& g) {
    IntVector finite;
    for (const auto& d : g.factors())
        if (d != 0) finite.push_back(d);
    return {FgAbGroup(finite), g.free_rank()};
}

/// G (x) Z/k, with k = 0 meaning Z.
inline FgAbGroup tensor_with_cyclic(const FgAbGroup& g, const Integer& k) {
    if (k == 0) return g;
    IntVector orders;
    for (const auto& d : g.factors()) orders.push_back(d == 0 ? abs(k) : igcd(d, k));
    return FgAbGroup::from_cyclic_orders(orders);
}

/// Tor(G, Z/k), with k = 0 meaning Z.
inline FgAbGroup tor_with_cyclic(const FgAbGroup& g, const Integer& k) {
    if (k == 0) return FgAbGroup();
    IntVector orders;
    for (const auto& d : g.factors())
        if (d != 0) orders.push_back(igcd(d, k));
    return FgAbGroup::from_cyclic_orders(orders);
}

}  // namespace sgm
