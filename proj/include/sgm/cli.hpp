#pragma once

#include "sgm/expression.hpp"
#include "sgm/obstruction.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

namespace sgm {

inline constexpr const char* version_string = "sgm 0.1.0";

enum class OutputFormat { Text, Json };

struct CliConfig {
    std::string expression;
    std::string file;
    std::vector<Integer> coefficients{0, 2, 3};
    int bound = 3;
    std::size_t enum_cap = 4096;
    std::optional<std::pair<int, int>> targets;
    OutputFormat format = OutputFormat::Text;
    bool explain = false;
    bool strict = false;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 2;
inline constexpr int validation_error = 3;
}  // namespace exit_code

/// "a..b" or a single target "n".
inline std::pair<int, int> parse_targets(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw ParseError("bad target range '" + text + "'", 1, 1);
        return v;
    };
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        int n = to_int(text);
        return {n, n};
    }
    return {to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
}

inline std::vector<Integer> parse_coefficients(const std::string& text) {
    std::vector<Integer> out;
    for (const auto& part : detail::split_list(text, ',')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad coefficient '" + part + "'", 1, 1);
        Integer k(part);
        if (k == 1) throw ParseError("coefficient 1 is not allowed", 1, 1);
        out.push_back(k);
    }
    if (out.empty()) throw ParseError("empty coefficient list", 1, 1);
    return out;
}

namespace detail {

inline std::string ring_name(const Integer& k) { return k == 0 ? "Z" : "Z/" + k.str(); }

inline std::string replay_text(const Witness& w) {
    if (w.predicate == predicate::complex_projective) return "catalog rule for complex projective space";
    std::string s;
    for (std::size_t i = 0; i < w.elements.size(); ++i) {
        const auto& e = w.elements[i];
        const bool compound = e.expression.find_first_of(" +-*") != std::string::npos;
        s += (i ? " ∪ " : "") + (compound ? "(" + e.expression + ")" : e.expression);
    }
    if (w.predicate == predicate::square_not_divisible) s += " ∪ " + s;
    return s + " = " + w.product + " in H^" + std::to_string(w.product_degree) + "(M;" + ring_name(w.k) + ")";
}

inline nlohmann::ordered_json witness_json(const Witness& w) {
    nlohmann::ordered_json j;
    j["predicate"] = w.predicate;
    j["n"] = w.n;
    j["k"] = w.k.str();
    j["elements"] = nlohmann::ordered_json::array();
    for (const auto& e : w.elements) j["elements"].push_back({{"degree", e.degree}, {"expression", e.expression}});
    j["product"] = {{"degree", w.product_degree}, {"value", w.product}};
    if (w.certificate) j["certificate"] = to_string(*w.certificate);
    if (w.lift) j["lift"] = *w.lift;
    j["replay"] = replay_text(w);
    return j;
}

}  // namespace detail

inline nlohmann::ordered_json report_json(const ObstructionReport& r, const std::string& input) {
    nlohmann::ordered_json j;
    j["dimension"] = r.dimension;
    j["input"] = input;
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : r.verdicts) {
        nlohmann::ordered_json jv;
        jv["n"] = v.n;
        jv["status"] = to_string(v.status);
        jv["witnesses"] = nlohmann::ordered_json::array();
        for (const auto& w : v.witnesses) jv["witnesses"].push_back(detail::witness_json(w));
        j["verdicts"].push_back(std::move(jv));
    }
    const auto& b = r.component_lower_bound;
    j["component_lower_bound"] = {{"value", b.value}, {"l", b.l}, {"justification", b.justification}};
    j["component_lower_bound"]["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : b.lifts) j["component_lower_bound"]["witnesses"].push_back(detail::witness_json(w));
    j["notices"] = r.notices;
    return j;
}

inline std::string report_text(const ObstructionReport& r, const std::string& input, bool explain) {
    std::ostringstream os;
    os << "input: " << input << "\n";
    os << "dimension: " << r.dimension << "\n\n";
    os << std::left << std::setw(4) << "n" << std::setw(10) << "verdict" << "predicates\n";
    for (const auto& v : r.verdicts) {
        std::vector<std::string> names;
        for (const auto& w : v.witnesses)
            if (std::find(names.begin(), names.end(), w.predicate) == names.end()) names.push_back(w.predicate);
        std::string joined;
        for (const auto& n : names) joined += (joined.empty() ? "" : ", ") + n;
        os << std::setw(4) << v.n << std::setw(10) << to_string(v.status) << (joined.empty() ? "-" : joined) << "\n";
        if (explain)
            for (const auto& w : v.witnesses) {
                os << "      " << w.predicate << " over " << detail::ring_name(w.k) << ": " << detail::replay_text(w);
                if (w.certificate) os << " [" << to_string(*w.certificate) << "]";
                os << "\n";
            }
    }
    const auto& b = r.component_lower_bound;
    os << "\ncomponent lower bound: " << b.value << " (" << b.justification << ")\n";
    if (explain)
        for (const auto& w : b.lifts) {
            os << "      " << detail::ring_name(w.k) << ": " << detail::replay_text(w);
            if (w.lift) os << ", lift " << *w.lift;
            os << "\n";
        }
    if (!r.notices.empty()) {
        os << "\nnotices:\n";
        for (const auto& n : r.notices) os << "  - " << n << "\n";
    }
    return os.str();
}

inline int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.expression.empty() == cfg.file.empty())
            throw ParseError("give exactly one of an expression or --file", 1, 1);
        if (cfg.bound < 1) throw ParseError("--bound must be at least 1", 1, 1);
        std::vector<Integer> moduli;
        for (const auto& k : cfg.coefficients)
            if (k != 0) moduli.push_back(k);

        ModelFamily family;
        std::string input;
        if (!cfg.file.empty()) {
            family = load_explicit(cfg.file, {moduli, cfg.strict, cfg.file});
            input = "file:" + cfg.file;
        } else {
            Expr e = parse_expression(cfg.expression);
            input = print_expression(e);
            family = evaluate(e, {moduli, cfg.strict});
        }
        AnalysisOptions opts{cfg.coefficients, cfg.bound, cfg.enum_cap, cfg.targets};
        ObstructionReport rep = analyze(family, opts);
        if (cfg.format == OutputFormat::Json)
            out << report_json(rep, input).dump(2) << "\n";
        else
            out << report_text(rep, input, cfg.explain);
        return exit_code::ok;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return exit_code::validation_error;
    } catch (const PresentationError& e) {
        err << "validation error: " << e.what() << "\n";
        return exit_code::validation_error;
    } catch (const Error& e) {
        err << "input error: " << e.what() << "\n";
        return exit_code::input_error;
    }
}

/// Parses argv into a config and runs it.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Cohomology-ring obstructions to special generic maps", "sgm"};
    CliConfig cfg;
    std::string coefficients = "0,2,3", targets, format = "text";
    bool version = false;
    app.add_option("expression", cfg.expression, "manifold expression, e.g. product(sphere(2), cp(2))");
    app.add_option("--file", cfg.file, "explicit model file");
    app.add_option("--coefficients", coefficients, "comma-separated moduli; 0 means Z")->capture_default_str();
    app.add_option("--bound", cfg.bound, "witness search bound B")->capture_default_str();
    app.add_option("--enum-cap", cfg.enum_cap, "largest group enumerated exhaustively")->capture_default_str();
    app.add_option("--targets", targets, "target dimensions a..b (default 1..m-1)");
    app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_flag("--explain", cfg.explain, "print witness replays");
    app.add_flag("--strict", cfg.strict, "reject unknown keys in model files");
    app.add_flag("--version", version, "print the version and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_code::ok;
        }
        err << "input error: " << e.what() << "\n";
        return exit_code::input_error;
    }
    if (version) {
        out << version_string << "\n";
        return exit_code::ok;
    }
    try {
        cfg.coefficients = parse_coefficients(coefficients);
        if (!targets.empty()) cfg.targets = parse_targets(targets);
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return exit_code::input_error;
    }
    cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
    return run(cfg, out, err);
}

}  // namespace sgm
