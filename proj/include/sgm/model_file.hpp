#pragma once

// Line-oriented explicit model format:
//
//   dimension 6
//   orientable true
//   simply_connected true
//   [coefficients 0]
//   H 2 = 0,0
//   gen 2 a,b
//   cup a b = 2*t
//   [coefficients 2]
//   ...
//   reduction 2: 1,0; 0,1      (one row per integral generator)

#include "sgm/family.hpp"

#include <fstream>
#include <sstream>

namespace sgm {

namespace detail {

struct SourceLine {
    std::size_t number = 0;
    std::string text;
};

/// Cursor over one line with 1-based column reporting.
class LineCursor {
public:
    LineCursor(const SourceLine& line, std::string source) : line_(line), source_(std::move(source)) {}

    void skip_space() {
        while (pos_ < line_.text.size() && std::isspace(static_cast<unsigned char>(line_.text[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= line_.text.size();
    }
    std::size_t column() const { return pos_ + 1; }
    std::size_t next_column() {
        skip_space();
        return column();
    }
    std::size_t line() const { return line_.number; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(source_ + ": " + msg, line_.number, column()); }
    [[noreturn]] void fail_at(std::size_t col, const std::string& msg) const {
        throw ParseError(source_ + ": " + msg, line_.number, col);
    }

    std::string word() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < line_.text.size() && !std::isspace(static_cast<unsigned char>(line_.text[pos_])) &&
               line_.text[pos_] != '=' && line_.text[pos_] != ':' && line_.text[pos_] != ',')
            ++pos_;
        if (start == pos_) fail("expected a word");
        return line_.text.substr(start, pos_ - start);
    }
    Integer integer() {
        skip_space();
        std::size_t start = pos_;
        if (pos_ < line_.text.size() && (line_.text[pos_] == '-' || line_.text[pos_] == '+')) ++pos_;
        std::size_t digits = pos_;
        while (pos_ < line_.text.size() && std::isdigit(static_cast<unsigned char>(line_.text[pos_]))) ++pos_;
        if (digits == pos_) {
            pos_ = start;
            fail("expected an integer");
        }
        return Integer(line_.text.substr(start, pos_ - start));
    }
    int small_integer(const std::string& what) {
        skip_space();
        const std::size_t col = column();
        Integer v = integer();
        if (v < 0 || v > 100000) fail_at(col, what + " out of range");
        return static_cast<int>(v);
    }
    void expect(char c) {
        skip_space();
        if (pos_ >= line_.text.size() || line_.text[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool accept(char c) {
        skip_space();
        if (pos_ < line_.text.size() && line_.text[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string rest() {
        skip_space();
        std::string r = line_.text.substr(pos_);
        pos_ = line_.text.size();
        while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.pop_back();
        return r;
    }
    void expect_end() {
        if (!at_end()) fail("unexpected trailing text");
    }

private:
    const SourceLine& line_;
    std::string source_;
    std::size_t pos_ = 0;
};

inline std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        std::size_t a = cur.find_first_not_of(" \t\r");
        std::size_t b = cur.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? "" : cur.substr(a, b - a + 1));
    }
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

struct PendingCup {
    SourceLine line;
    std::string x, y;
    std::optional<std::string> value;  // nullopt for '?'
    std::size_t value_column = 0;
};

struct PendingReduction {
    SourceLine line;
    int degree = 0;
    std::string rows;
};

struct Block {
    Integer k;
    SourceLine header;
    std::map<int, std::pair<SourceLine, IntVector>> groups;
    std::map<int, std::pair<SourceLine, std::vector<std::string>>> gens;
    std::vector<PendingCup> cups;
    std::vector<PendingReduction> reductions;
};

inline bool has_torsion_for(const CohomologyModel& z, const Integer& k) {
    for (int j = 0; j <= z.dimension(); ++j)
        for (const auto& d : z.group(j).factors())
            if (d != 0 && igcd(d, k) != 1) return true;
    return false;
}

inline std::string location(const std::string& source, const SourceLine& l) {
    return source + ":" + std::to_string(l.number);
}

inline CohomologyModel build_block(const Block& b, int m, bool orientable, bool sc, const std::string& source) {
    CohomologyModel model(m, CoefficientRing(b.k), orientable, sc);
    for (const auto& [j, entry] : b.groups) {
        const auto& [line, factors] = entry;
        LineCursor cur(line, source);
        if (j > m) cur.fail("degree " + std::to_string(j) + " exceeds the dimension " + std::to_string(m));
        FgAbGroup g;
        try {
            g = FgAbGroup(factors);
        } catch (const Error& e) {
            cur.fail(std::string("invariant factors are not in canonical form: ") + e.what());
        }
        if (j == 0) {
            if (!(g == model.group(0))) cur.fail("H 0 must be " + model.group(0).str());
            continue;
        }
        auto gi = b.gens.find(j);
        if (gi == b.gens.end()) {
            if (g.is_trivial()) continue;
            cur.fail("missing 'gen " + std::to_string(j) + "' line naming the generators");
        }
        try {
            model.set_group(j, g, gi->second.second);
        } catch (const ValidationError& e) {
            LineCursor(gi->second.first, source).fail(e.what());
        }
    }
    for (const auto& [j, entry] : b.gens)
        if (!b.groups.count(j) && !(j == 0 && entry.second == std::vector<std::string>{"1"}))
            LineCursor(entry.first, source).fail("'gen " + std::to_string(j) + "' without a matching 'H " +
                                                 std::to_string(j) + "' line");

    std::set<std::pair<GeneratorRef, GeneratorRef>> seen;
    for (const auto& c : b.cups) {
        LineCursor cur(c.line, source);
        auto x = model.find(c.x);
        auto y = model.find(c.y);
        if (!x) cur.fail("unknown generator '" + c.x + "'");
        if (!y) cur.fail("unknown generator '" + c.y + "'");
        if (!seen.insert({*x, *y}).second) cur.fail("duplicate product " + c.x + " ∪ " + c.y);
        const int d = x->degree + y->degree;
        if (!c.value) continue;
        if (d > m) cur.fail("product lands in degree " + std::to_string(d) + " above the dimension");
        try {
            model.set_product(*x, *y, parse_combination(model, d, *c.value).value);
        } catch (const Error& e) {
            cur.fail_at(c.value_column, e.what());
        }
    }
    return model;
}

}  // namespace detail

struct ModelFileOptions {
    std::vector<Integer> moduli;
    bool strict = true;
    std::string source = "<input>";
};

inline ModelFamily parse_model_file(const std::string& text, const ModelFileOptions& opts = {}) {
    using namespace detail;
    std::optional<int> dimension;
    std::optional<bool> orientable;
    std::optional<bool> simply_connected;
    std::vector<Block> blocks;
    std::vector<std::string> notices;

    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    std::vector<SourceLine> lines;
    while (std::getline(in, raw)) {
        ++number;
        // a '#' that starts a token begins a comment; names such as s2#1 keep theirs
        for (std::size_t i = 0; i < raw.size(); ++i)
            if (raw[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(raw[i - 1])))) {
                raw.erase(i);
                break;
            }
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        lines.push_back({number, raw});
    }

    auto parse_bool = [](LineCursor& cur) {
        std::size_t col = cur.next_column();
        std::string w = cur.word();
        if (w == "true") return true;
        if (w == "false") return false;
        cur.fail_at(col, "expected 'true' or 'false'");
    };

    for (const auto& line : lines) {
        LineCursor cur(line, opts.source);
        if (cur.at_end()) continue;
        if (cur.accept('[')) {
            std::string kw = cur.word();
            if (kw != "coefficients") cur.fail("expected 'coefficients'");
            std::size_t col = cur.next_column();
            Integer k = cur.integer();
            cur.expect(']');
            cur.expect_end();
            k = abs(k);
            if (k == 1) cur.fail_at(col, "coefficient block k = 1 is not allowed (Z/1 is the zero ring)");
            if (blocks.empty() && k != 0) cur.fail_at(col, "the first block must be [coefficients 0]");
            for (const auto& b : blocks)
                if (b.k == k) cur.fail_at(col, "duplicate block for k = " + k.str());
            if (!dimension || !orientable || !simply_connected)
                cur.fail("header lines dimension, orientable and simply_connected must precede the first block");
            blocks.push_back({k, line, {}, {}, {}, {}});
            continue;
        }
        cur.skip_space();
        const std::size_t key_col = cur.column();
        std::string key = cur.word();
        if (key == "dimension" || key == "orientable" || key == "simply_connected") {
            if (!blocks.empty()) cur.fail_at(key_col, "header key '" + key + "' inside a coefficient block");
            if (key == "dimension") {
                std::size_t col = cur.next_column();
                Integer d = cur.integer();
                if (d < 1 || d > 4096) cur.fail_at(col, "dimension must be between 1 and 4096");
                dimension = static_cast<int>(d);
            } else if (key == "orientable") {
                orientable = parse_bool(cur);
            } else {
                simply_connected = parse_bool(cur);
            }
            cur.expect_end();
            continue;
        }
        if (key == "H" || key == "gen" || key == "cup" || key == "reduction") {
            if (blocks.empty()) cur.fail_at(key_col, "'" + key + "' outside a coefficient block");
            Block& b = blocks.back();
            if (key == "H") {
                int j = cur.small_integer("degree");
                cur.expect('=');
                IntVector factors;
                if (!cur.at_end()) {
                    do {
                        factors.push_back(cur.integer());
                    } while (cur.accept(','));
                }
                cur.expect_end();
                if (!b.groups.emplace(j, std::make_pair(line, factors)).second)
                    cur.fail_at(key_col, "duplicate 'H " + std::to_string(j) + "' line");
            } else if (key == "gen") {
                int j = cur.small_integer("degree");
                std::vector<std::string> names;
                std::string list = cur.rest();
                for (const auto& n : split_list(list, ',')) {
                    if (n.empty() || n.find_first_of(" \t") != std::string::npos)
                        cur.fail("generator names must be non-empty and contain no spaces");
                    names.push_back(n);
                }
                if (!b.gens.emplace(j, std::make_pair(line, names)).second)
                    cur.fail_at(key_col, "duplicate 'gen " + std::to_string(j) + "' line");
            } else if (key == "cup") {
                PendingCup c;
                c.line = line;
                c.x = cur.word();
                c.y = cur.word();
                cur.expect('=');
                cur.skip_space();
                c.value_column = cur.column();
                std::string v = cur.rest();
                if (v.empty()) cur.fail("expected a combination or '?'");
                if (v != "?") c.value = v;
                b.cups.push_back(std::move(c));
            } else {
                if (b.k == 0) cur.fail_at(key_col, "'reduction' lines belong to modular blocks");
                int j = cur.small_integer("degree");
                cur.expect(':');
                b.reductions.push_back({line, j, cur.rest()});
            }
            continue;
        }
        if (opts.strict) cur.fail_at(key_col, "unknown key '" + key + "'");
        notices.push_back(opts.source + ":" + std::to_string(line.number) + ": ignored unknown key '" + key + "'");
    }

    if (!dimension) throw ParseError(opts.source + ": missing 'dimension' line", number + 1, 1);
    if (blocks.empty()) throw ParseError(opts.source + ": missing [coefficients 0] block", number + 1, 1);
    const int m = *dimension;

    CohomologyModel integral = build_block(blocks[0], m, *orientable, *simply_connected, opts.source);
    {
        auto diagnostics = validate(integral);
        if (!diagnostics.empty()) {
            std::string msg = location(opts.source, blocks[0].header) + ": integral model fails validation:";
            for (const auto& d : diagnostics) msg += "\n  " + d;
            throw ValidationError(msg);
        }
    }

    ModelFamily f;
    f.integral = integral;
    f.notices = notices;
    for (std::size_t bi = 1; bi < blocks.size(); ++bi) {
        const Block& b = blocks[bi];
        ModularSupplement sup{build_block(b, m, *orientable, *simply_connected, opts.source), {}};
        sup.matrices.assign(static_cast<std::size_t>(m) + 1, IntMatrix());
        sup.matrices[0] = IntMatrix::identity(1);
        std::set<int> done;
        for (const auto& r : b.reductions) {
            LineCursor cur(r.line, opts.source);
            if (r.degree > m) cur.fail("degree exceeds the dimension");
            if (!done.insert(r.degree).second) cur.fail("duplicate reduction for degree " + std::to_string(r.degree));
            const std::size_t src = integral.group(r.degree).size();
            const std::size_t tgt = sup.model.group(r.degree).size();
            std::vector<std::string> rows = r.rows.empty() ? std::vector<std::string>{} : split_list(r.rows, ';');
            if (rows.size() != src)
                cur.fail("reduction " + std::to_string(r.degree) + " needs one row per integral generator (" +
                         std::to_string(src) + "), found " + std::to_string(rows.size()));
            IntMatrix mat(tgt, src);
            for (std::size_t c = 0; c < rows.size(); ++c) {
                auto entries = split_list(rows[c], ',');
                if (entries.size() != tgt)
                    cur.fail("row " + std::to_string(c + 1) + " of reduction " + std::to_string(r.degree) + " needs " +
                             std::to_string(tgt) + " entries");
                for (std::size_t t = 0; t < tgt; ++t) {
                    try {
                        mat(t, c) = Integer(entries[t]);
                    } catch (const std::exception&) {
                        cur.fail("'" + entries[t] + "' is not an integer");
                    }
                }
            }
            sup.matrices[r.degree] = mat;
        }
        try {
            f.reductions.emplace(b.k, reduce_model(integral, b.k, sup));
        } catch (const ValidationError& e) {
            throw ValidationError(location(opts.source, b.header) + ": " + e.what());
        }
    }
    for (const auto& k : normalize_moduli(opts.moduli)) {
        if (f.reductions.count(k)) continue;
        f.reductions.emplace(k, reduce_model(integral, k));
        if (has_torsion_for(integral, k))
            f.notices.push_back(opts.source + ": no [coefficients " + k.str() +
                                "] block; products of classes from Tor are UNKNOWN over Z/" + k.str());
    }
    return f;
}

inline ModelFamily load_explicit(const std::string& path, const ModelFileOptions& opts = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open model file '" + path + "'", 0, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    ModelFileOptions o = opts;
    o.source = path;
    return parse_model_file(ss.str(), o);
}

/// Text in the explicit format; parse_model_file reads it back to an equal family.
inline std::string format_model_file(const ModelFamily& f) {
    std::ostringstream os;
    const auto& z = f.integral;
    const int m = z.dimension();
    os << "dimension " << m << "\norientable " << (z.orientable() ? "true" : "false") << "\nsimply_connected "
       << (z.simply_connected() ? "true" : "false") << "\n";
    auto block = [&](const CohomologyModel& model, const ReductionMap* red) {
        os << "\n[coefficients " << model.ring().modulus() << "]\n";
        for (int j = 1; j <= m; ++j) {
            const auto& g = model.group(j);
            if (g.is_trivial()) continue;
            os << "H " << j << " = ";
            for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g.factor(i);
            os << "\ngen " << j << " ";
            for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << model.names(j)[i];
            os << "\n";
        }
        for (const auto& x : model.generators())
            for (const auto& y : model.generators()) {
                if (y < x || x.degree == 0 || x.degree + y.degree > m) continue;
                if (model.group(x.degree + y.degree).is_trivial()) continue;
                CupResult e = model.product_entry(x, y);
                if (e) os << "cup " << model.name(x) << " " << model.name(y) << " = " << model.format(*e) << "\n";
            }
        if (!red) return;
        for (int j = 1; j <= m; ++j) {
            const auto& h = red->hom(j);
            if (h.source().is_trivial() || h.target().is_trivial()) continue;
            os << "reduction " << j << ":";
            for (std::size_t c = 0; c < h.source().size(); ++c) {
                os << (c ? ";" : "") << " ";
                for (std::size_t r = 0; r < h.target().size(); ++r) os << (r ? "," : "") << h.matrix()(r, c);
            }
            os << "\n";
        }
    };
    block(z, nullptr);
    for (const auto& [k, red] : f.reductions) block(red.modular, &red);
    return os.str();
}

}  // namespace sgm
