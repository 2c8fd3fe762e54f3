#pragma once

#include "sgm/abelian.hpp"
#include "sgm/errors.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sgm {

/// Z (k = 0) or Z/k.
class CoefficientRing {
public:
    CoefficientRing() = default;
    explicit CoefficientRing(const Integer& k) : k_(abs(k)) {
        if (k_ == 1) throw ValidationError("coefficient ring Z/1 is the zero ring");
    }

    const Integer& modulus() const { return k_; }
    bool is_integral() const { return k_ == 0; }
    bool is_field() const { return k_ != 0 && is_prime(k_); }
    std::string name() const { return k_ == 0 ? "Z" : "Z/" + k_.str(); }
    FgAbGroup unit_group() const { return k_ == 0 ? FgAbGroup::free(1) : FgAbGroup::cyclic(k_); }

    friend bool operator==(const CoefficientRing&, const CoefficientRing&) = default;

private:
    Integer k_ = 0;
};

struct GeneratorRef {
    int degree = 0;
    std::size_t index = 0;
    auto operator<=>(const GeneratorRef&) const = default;
};

struct CohomologyClass {
    int degree = 0;
    GroupElement value;
    friend bool operator==(const CohomologyClass&, const CohomologyClass&) = default;
};

/// nullopt is the UNKNOWN marker.
using CupResult = std::optional<CohomologyClass>;

inline int koszul_sign(int i, int j) { return (i * j) % 2 ? -1 : 1; }

class CohomologyModel {
public:
    CohomologyModel() : CohomologyModel(1, CoefficientRing()) {}
    CohomologyModel(int dimension, CoefficientRing ring, bool orientable = true, bool simply_connected = false)
        : m_(dimension), ring_(ring), orientable_(orientable), simply_connected_(simply_connected) {
        if (dimension < 1) throw DegreeError("manifold dimension must be positive");
        groups_.resize(static_cast<std::size_t>(m_) + 1);
        names_.resize(static_cast<std::size_t>(m_) + 1);
        set_group(0, ring_.unit_group(), {"1"});
    }

    int dimension() const { return m_; }
    const CoefficientRing& ring() const { return ring_; }
    bool orientable() const { return orientable_; }
    bool simply_connected() const { return simply_connected_; }
    void set_orientable(bool v) { orientable_ = v; }
    void set_simply_connected(bool v) { simply_connected_ = v; }

    void set_group(int j, FgAbGroup g, std::vector<std::string> names) {
        check_degree(j);
        if (names.size() != g.size())
            throw ValidationError("degree " + std::to_string(j) + ": " + std::to_string(g.size()) +
                                  " summands but " + std::to_string(names.size()) + " generator names");
        for (std::size_t i = 0; i < names_[j].size(); ++i) lookup_.erase(names_[j][i]);
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i].empty()) throw ValidationError("empty generator name in degree " + std::to_string(j));
            if (!lookup_.emplace(names[i], GeneratorRef{j, i}).second)
                throw ValidationError("duplicate generator name '" + names[i] + "'");
        }
        groups_[j] = std::move(g);
        names_[j] = std::move(names);
        std::erase_if(products_, [j](const auto& e) {
            const auto& [x, y] = e.first;
            return x.degree == j || y.degree == j || x.degree + y.degree == j;
        });
    }

    /// Trivial outside [0, m].
    const FgAbGroup& group(int j) const {
        static const FgAbGroup trivial;
        return j < 0 || j > m_ ? trivial : groups_[static_cast<std::size_t>(j)];
    }
    const std::vector<std::string>& names(int j) const {
        static const std::vector<std::string> none;
        return j < 0 || j > m_ ? none : names_[static_cast<std::size_t>(j)];
    }
    const std::string& name(GeneratorRef g) const { return names(g.degree).at(g.index); }
    std::optional<GeneratorRef> find(const std::string& name) const {
        auto it = lookup_.find(name);
        if (it == lookup_.end()) return std::nullopt;
        return it->second;
    }
    GeneratorRef require(const std::string& name) const {
        auto g = find(name);
        if (!g) throw ValidationError("unknown generator '" + name + "'");
        return *g;
    }

    std::vector<GeneratorRef> generators() const {
        std::vector<GeneratorRef> out;
        for (int j = 0; j <= m_; ++j)
            for (std::size_t i = 0; i < group(j).size(); ++i) out.push_back({j, i});
        return out;
    }
    std::vector<GeneratorRef> generators(int j) const {
        std::vector<GeneratorRef> out;
        for (std::size_t i = 0; i < group(j).size(); ++i) out.push_back({j, i});
        return out;
    }

    CohomologyClass unit() const { return generator({0, 0}); }
    CohomologyClass generator(GeneratorRef g) const { return {g.degree, group(g.degree).generator(g.index)}; }
    CohomologyClass zero(int j) const { return {j, group(j).zero()}; }
    CohomologyClass make(int j, IntVector coords) const {
        check_degree(j);
        return {j, group(j).element(std::move(coords))};
    }

    /// Record x ∪ y. The reverse order follows from the sign rule unless it is stored too.
    void set_product(GeneratorRef x, GeneratorRef y, const GroupElement& value) {
        check_ref(x);
        check_ref(y);
        const int d = x.degree + y.degree;
        if (!group(d).contains(value))
            throw OwnershipError("product " + name(x) + " ∪ " + name(y) + " does not lie in degree " + std::to_string(d));
        products_[{x, y}] = value;
    }
    void set_named_product(const std::string& x, const std::string& y, const GroupElement& value) {
        set_product(require(x), require(y), value);
    }
    void forget_product(GeneratorRef x, GeneratorRef y) {
        products_.erase({x, y});
        products_.erase({y, x});
    }

    const std::map<std::pair<GeneratorRef, GeneratorRef>, GroupElement>& stored_products() const { return products_; }

    /// Generator-table lookup with the unit, degree and sign rules applied.
    CupResult product_entry(GeneratorRef x, GeneratorRef y) const {
        check_ref(x);
        check_ref(y);
        const int d = x.degree + y.degree;
        if (x.degree == 0) return generator(y);
        if (y.degree == 0) return generator(x);
        if (d > m_ || group(d).is_trivial()) return zero(d);
        if (auto it = products_.find({x, y}); it != products_.end()) return CohomologyClass{d, it->second};
        if (auto it = products_.find({y, x}); it != products_.end())
            return CohomologyClass{d, group(d).scale(it->second, koszul_sign(x.degree, y.degree))};
        return std::nullopt;
    }

    bool fully_known() const {
        for (const auto& x : generators())
            for (const auto& y : generators())
                if (x <= y && !product_entry(x, y)) return false;
        return true;
    }

    /// Integer combination of generator names, e.g. "2*a - b"; "0" for zero.
    std::string format(const CohomologyClass& c) const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < c.value.size(); ++i) {
            Integer x = c.value[i];
            if (x == 0) continue;
            // symmetric representative reads better for finite summands
            const Integer& d = group(c.degree).factor(i);
            if (d != 0 && 2 * x > d) x -= d;
            if (first)
                os << (x < 0 ? "-" : "");
            else
                os << (x < 0 ? " - " : " + ");
            if (abs(x) != 1) os << abs(x) << '*';
            os << names(c.degree)[i];
            first = false;
        }
        return first ? "0" : os.str();
    }

    void check_degree(int j) const {
        if (j < 0 || j > m_)
            throw DegreeError("degree " + std::to_string(j) + " is outside [0, " + std::to_string(m_) + "]");
    }

private:
    void check_ref(GeneratorRef g) const {
        check_degree(g.degree);
        if (g.index >= group(g.degree).size())
            throw DegreeError("no generator " + std::to_string(g.index) + " in degree " + std::to_string(g.degree));
    }

    int m_;
    CoefficientRing ring_;
    bool orientable_;
    bool simply_connected_;
    std::vector<FgAbGroup> groups_;
    std::vector<std::vector<std::string>> names_;
    std::map<std::string, GeneratorRef> lookup_;
    std::map<std::pair<GeneratorRef, GeneratorRef>, GroupElement> products_;
};

/// Same groups, names, flags and effective product table.
inline bool operator==(const CohomologyModel& a, const CohomologyModel& b) {
    if (a.dimension() != b.dimension() || !(a.ring() == b.ring()) || a.orientable() != b.orientable() ||
        a.simply_connected() != b.simply_connected())
        return false;
    for (int j = 0; j <= a.dimension(); ++j)
        if (!(a.group(j) == b.group(j)) || a.names(j) != b.names(j)) return false;
    for (const auto& x : a.generators())
        for (const auto& y : a.generators())
            if (a.product_entry(x, y) != b.product_entry(x, y)) return false;
    return true;
}

inline void check_class(const CohomologyModel& model, const CohomologyClass& c) {
    model.check_degree(c.degree);
    model.group(c.degree).require(c.value);
}

/// Bilinear extension of the generator table. UNKNOWN iff some pair with nonzero coefficients is UNKNOWN.
inline CupResult cup(const CohomologyModel& model, const CohomologyClass& x, const CohomologyClass& y) {
    check_class(model, x);
    check_class(model, y);
    const int d = x.degree + y.degree;
    if (d > model.dimension()) return model.zero(d);
    const FgAbGroup& target = model.group(d);
    GroupElement total = target.zero();
    for (std::size_t a = 0; a < x.value.size(); ++a) {
        if (x.value[a] == 0) continue;
        for (std::size_t b = 0; b < y.value.size(); ++b) {
            if (y.value[b] == 0) continue;
            CupResult e = model.product_entry({x.degree, a}, {y.degree, b});
            if (!e) return std::nullopt;
            total = target.add(total, target.scale(e->value, x.value[a] * y.value[b]));
        }
    }
    return CohomologyClass{d, total};
}

inline CupResult cup_sequence(const CohomologyModel& model, const std::vector<CohomologyClass>& elements) {
    if (elements.empty()) throw DegreeError("cup_sequence needs at least one element");
    check_class(model, elements.front());
    CupResult acc = elements.front();
    for (std::size_t i = 1; i < elements.size() && acc; ++i) {
        if (acc->degree > model.dimension()) {
            check_class(model, elements[i]);
            acc = model.zero(acc->degree + elements[i].degree);
            continue;
        }
        acc = cup(model, *acc, elements[i]);
    }
    return acc;
}

inline bool is_zero_class(const CohomologyClass& c) { return c.value.is_zero(); }

/// Structural checks; empty result means the model is consistent.
inline std::vector<std::string> validate(const CohomologyModel& model) {
    std::vector<std::string> out;
    const int m = model.dimension();
    const Integer& k = model.ring().modulus();
    auto label = [&](GeneratorRef g) { return model.name(g) + " (degree " + std::to_string(g.degree) + ")"; };

    if (!(model.group(0) == model.ring().unit_group()))
        out.push_back("H^0 must be one cyclic summand " + model.ring().unit_group().str() + ", found " +
                      model.group(0).str());
    if (k == 0 && model.dimension() >= 1 && !model.group(1).is_free())
        out.push_back("H^1 over Z must be free, found " + model.group(1).str());
    if (model.orientable() || k == 2) {
        if (!(model.group(m) == model.ring().unit_group()))
            out.push_back("H^" + std::to_string(m) + " must be " + model.ring().unit_group().str() +
                          " for a closed " + (model.orientable() ? "orientable" : "mod-2") + " model, found " +
                          model.group(m).str());
    }

    for (const auto& [key, value] : model.stored_products()) {
        const auto& [x, y] = key;
        const int d = x.degree + y.degree;
        const FgAbGroup& target = model.group(d);
        std::string pair = model.name(x) + " ∪ " + model.name(y);
        for (GeneratorRef g : {x, y}) {
            const Integer& ord = model.group(g.degree).factor(g.index);
            if (ord != 0 && !target.scale(value, ord).is_zero())
                out.push_back("product " + pair + " is not well defined: " + label(g) + " has order " + ord.str() +
                              " but " + ord.str() + "·(" + pair + ") != 0");
        }
        if (x.degree == 0 || y.degree == 0) {
            GeneratorRef other = x.degree == 0 ? y : x;
            if (!(value == model.generator(other).value))
                out.push_back("unit law fails: " + pair + " should equal " + model.name(other));
        }
        if (x != y) {
            auto it = model.stored_products().find({y, x});
            if (it != model.stored_products().end() &&
                !(it->second == target.scale(value, koszul_sign(x.degree, y.degree))))
                out.push_back("graded commutativity fails for " + label(x) + " and " + label(y));
        } else if (x.degree % 2 == 1 && !target.scale(value, 2).is_zero()) {
            out.push_back("graded commutativity fails: " + pair + " has odd degree factors, so 2·(" + pair +
                          ") must vanish");
        }
    }

    // associativity on generator triples of positive degree
    for (const auto& a : model.generators())
        for (const auto& b : model.generators())
            for (const auto& c : model.generators()) {
                if (a.degree == 0 || b.degree == 0 || c.degree == 0) continue;
                if (a.degree + b.degree + c.degree > m) continue;
                CupResult ab = model.product_entry(a, b);
                CupResult bc = model.product_entry(b, c);
                if (!ab || !bc) continue;
                CupResult left = cup(model, *ab, model.generator(c));
                CupResult right = cup(model, model.generator(a), *bc);
                if (left && right && !(*left == *right))
                    out.push_back("associativity fails on " + model.name(a) + ", " + model.name(b) + ", " +
                                  model.name(c));
            }

    // Poincaré pairing over a field
    if (model.ring().is_field() && (model.orientable() || k == 2) && model.group(m) == model.ring().unit_group()) {
        for (int j = 0; j <= m; ++j) {
            const auto rows = model.generators(j);
            const auto cols = model.generators(m - j);
            IntMatrix pairing(rows.size(), cols.size());
            bool known = true;
            for (std::size_t r = 0; r < rows.size() && known; ++r)
                for (std::size_t c = 0; c < cols.size() && known; ++c) {
                    CupResult e = model.product_entry(rows[r], cols[c]);
                    if (!e)
                        known = false;
                    else
                        pairing(r, c) = e->value[0];
                }
            if (!known) continue;
            std::size_t rank = rows.empty() || cols.empty() ? 0 : rank_mod_prime(pairing, k);
            if (rank != rows.size() || rank != cols.size())
                out.push_back("cup pairing H^" + std::to_string(j) + " x H^" + std::to_string(m - j) + " -> H^" +
                              std::to_string(m) + " is degenerate over " + model.ring().name() + " (rank " +
                              std::to_string(rank) + ", dimensions " + std::to_string(rows.size()) + " and " +
                              std::to_string(cols.size()) + ")");
        }
    }
    return out;
}

inline void require_valid(const CohomologyModel& model, const std::string& what) {
    auto diagnostics = validate(model);
    if (diagnostics.empty()) return;
    std::string msg = what + " over " + model.ring().name() + " fails validation:";
    for (const auto& d : diagnostics) msg += "\n  " + d;
    throw ValidationError(msg);
}

/// Parse "2*a - b + c" against the degree-j generator names. "0" is the zero class.
inline CohomologyClass parse_combination(const CohomologyModel& model, int j, const std::string& text) {
    model.check_degree(j);
    IntVector coords(model.group(j).size());
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto is_name_char = [](char ch) {
        return !std::isspace(static_cast<unsigned char>(ch)) && ch != '+' && ch != '-' && ch != '*' && ch != ',' &&
               ch != ';' && ch != '=';
    };
    bool any = false;
    skip();
    while (pos < text.size()) {
        int sign = 1;
        if (text[pos] == '+' || text[pos] == '-') {
            sign = text[pos] == '-' ? -1 : 1;
            ++pos;
            skip();
        } else if (any) {
            throw ValidationError("expected '+' or '-' in combination '" + text + "'");
        }
        Integer coeff = 1;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        bool has_number = pos > start;
        if (has_number) coeff = Integer(text.substr(start, pos - start));
        skip();
        if (pos < text.size() && text[pos] == '*') {
            if (!has_number) throw ValidationError("missing coefficient before '*' in '" + text + "'");
            ++pos;
            skip();
        } else if (has_number) {
            if (coeff != 0 || (pos < text.size() && is_name_char(text[pos])))
                throw ValidationError("expected '*' after coefficient in '" + text + "'");
            any = true;
            continue;
        }
        start = pos;
        // bracketed names such as "[a+2*b]" may contain operator characters
        for (int depth = 0; pos < text.size() && (depth > 0 || is_name_char(text[pos])); ++pos) {
            if (text[pos] == '[') ++depth;
            if (text[pos] == ']') --depth;
        }
        std::string name = text.substr(start, pos - start);
        if (name.empty()) throw ValidationError("expected a generator name in '" + text + "'");
        auto g = model.find(name);
        if (!g) throw ValidationError("unknown generator '" + name + "'");
        if (g->degree != j)
            throw DegreeError("generator '" + name + "' has degree " + std::to_string(g->degree) + ", expected " +
                              std::to_string(j));
        coords[g->index] += sign * coeff;
        any = true;
        skip();
    }
    if (!any) throw ValidationError("empty combination");
    return model.make(j, coords);
}

}  // namespace sgm
