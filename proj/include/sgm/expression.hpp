#pragma once

// expr := "sphere(" INT ")" | "product(" expr ("," expr)+ ")" | "connected_sum(" expr ("," expr)+ ")"
//       | "cp(" INT ")" | "rp(" INT ")" | "wu" | "m0" | "load(" STRING ")"

#include "sgm/catalog.hpp"
#include "sgm/model_file.hpp"

namespace sgm {

struct Expr {
    enum class Kind { Sphere, Product, ConnectedSum, CP, RP, Wu, M0, Load };
    Kind kind = Kind::Sphere;
    Integer arg = 0;
    std::string path;
    std::vector<Expr> children;

    friend bool operator==(const Expr&, const Expr&) = default;
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string text) : text_(std::move(text)) {}

    Expr parse() {
        Expr e = expr();
        skip();
        if (pos_ < text_.size()) fail("unexpected trailing input", {"end of input"});
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg, const std::vector<std::string>& expected) const {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string exp;
        for (const auto& e : expected) exp += (exp.empty() ? "" : ", ") + e;
        throw ParseError(msg + (exp.empty() ? "" : "; expected one of: " + exp), line, col);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'", {std::string("'") + c + "'"});
        ++pos_;
    }

    Integer integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer", {"INT"});
        return Integer(text_.substr(start, pos_ - start));
    }

    std::string string_literal() {
        skip();
        if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected a string", {"STRING"});
        ++pos_;
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
            out += text_[pos_++];
        }
        if (pos_ >= text_.size()) fail("unterminated string", {"'\"'"});
        ++pos_;
        return out;
    }

    Expr expr() {
        static const std::vector<std::string> keywords{"sphere", "product", "connected_sum", "cp", "rp", "wu", "m0", "load"};
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        std::string word;
        for (std::size_t i = start; i < pos_; ++i) word += static_cast<char>(std::tolower(static_cast<unsigned char>(text_[i])));
        if (word.empty()) fail("expected an expression", keywords);

        Expr e;
        if (word == "wu") {
            e.kind = Expr::Kind::Wu;
            return e;
        }
        if (word == "m0") {
            e.kind = Expr::Kind::M0;
            return e;
        }
        if (word == "sphere" || word == "cp" || word == "rp") {
            e.kind = word == "sphere" ? Expr::Kind::Sphere : word == "cp" ? Expr::Kind::CP : Expr::Kind::RP;
            expect('(');
            skip();
            const std::size_t at = pos_;
            e.arg = integer();
            if (e.arg < 1) {
                pos_ = at;
                fail(word + " argument must be at least 1", {"positive INT"});
            }
            expect(')');
            return e;
        }
        if (word == "load") {
            e.kind = Expr::Kind::Load;
            expect('(');
            e.path = string_literal();
            expect(')');
            return e;
        }
        if (word == "product" || word == "connected_sum") {
            e.kind = word == "product" ? Expr::Kind::Product : Expr::Kind::ConnectedSum;
            expect('(');
            e.children.push_back(expr());
            for (;;) {
                skip();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    e.children.push_back(expr());
                    continue;
                }
                if (pos_ < text_.size() && text_[pos_] == ')') {
                    if (e.children.size() < 2) fail(word + " needs at least two arguments", {"','"});
                    ++pos_;
                    return e;
                }
                fail("expected ',' or ')'", {"','", "')'"});
            }
        }
        pos_ = start;
        fail("unknown catalog name or keyword '" + word + "'", keywords);
    }

    std::string text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expression(const std::string& text) { return detail::ExprParser(text).parse(); }

inline std::string print_expression(const Expr& e) {
    auto list = [&](const char* head) {
        std::string out = std::string(head) + "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) out += (i ? ", " : "") + print_expression(e.children[i]);
        return out + ")";
    };
    switch (e.kind) {
        case Expr::Kind::Sphere: return "sphere(" + e.arg.str() + ")";
        case Expr::Kind::CP: return "cp(" + e.arg.str() + ")";
        case Expr::Kind::RP: return "rp(" + e.arg.str() + ")";
        case Expr::Kind::Wu: return "wu";
        case Expr::Kind::M0: return "m0";
        case Expr::Kind::Product: return list("product");
        case Expr::Kind::ConnectedSum: return list("connected_sum");
        case Expr::Kind::Load: {
            std::string out = "load(\"";
            for (char c : e.path) {
                if (c == '"' || c == '\\') out += '\\';
                out += c;
            }
            return out + "\")";
        }
    }
    return {};
}

struct EvalOptions {
    std::vector<Integer> moduli{2, 3};
    bool strict = true;
};

inline ModelFamily evaluate(const Expr& e, const EvalOptions& opts = {}) {
    switch (e.kind) {
        case Expr::Kind::Sphere: return eval_sphere(e.arg, opts.moduli);
        case Expr::Kind::CP: return catalog_cp(e.arg, opts.moduli);
        case Expr::Kind::RP: return catalog_rp(e.arg, opts.moduli);
        case Expr::Kind::Wu: return catalog_wu(opts.moduli);
        case Expr::Kind::M0: return catalog_m0(opts.moduli);
        case Expr::Kind::Load: return load_explicit(e.path, {opts.moduli, opts.strict, e.path});
        case Expr::Kind::Product:
        case Expr::Kind::ConnectedSum: {
            std::vector<ModelFamily> parts;
            for (const auto& c : e.children) parts.push_back(evaluate(c, opts));
            return e.kind == Expr::Kind::Product ? eval_product(parts, opts.moduli)
                                                  : eval_connected_sum(parts, opts.moduli);
        }
    }
    throw ValidationError("unhandled expression kind");
}

}  // namespace sgm
