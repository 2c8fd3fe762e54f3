// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails or runs past 10 s.

#include "support/checks.hpp"

#include <chrono>
#include <cstdio>

using namespace sgm;
using namespace sgm::testing;

namespace {

const std::string s2s2s3 = "product(sphere(2), sphere(2), sphere(3))";

ModelFamily family(const std::string& expr) { return evaluate(parse_expression(expr), {{2, 3}, true}); }

const Verdict* verdict(const ObstructionReport& r, int n) {
    for (const auto& v : r.verdicts)
        if (v.n == n) return &v;
    return nullptr;
}

bool fired(const Verdict& v, const std::string& p) {
    for (const auto& w : v.witnesses)
        if (w.predicate == p) return true;
    return false;
}

Failure replay_all(const ModelFamily& f, const ObstructionReport& r) {
    if (auto why = independent_replay(f, r)) return why;
    for (const auto& v : r.verdicts)
        for (const auto& w : v.witnesses)
            if (auto why = replay_failure(f, w)) return cat("n = ", v.n, ": ", *why);
    return std::nullopt;
}

Failure cp3() {
    auto f = family("cp(3)");
    auto r = analyze(f);
    if (r.verdicts.size() != 5) return "expected verdicts for n = 1..5";
    for (int n = 1; n <= 4; ++n) {
        const Verdict* v = verdict(r, n);
        if (v->status != Status::Excluded || !fired(*v, predicate::cup_length)) return cat("n = ", n, " not excluded by cup-length");
        for (const auto& w : v->witnesses)
            if (w.predicate == predicate::cup_length) {
                if (w.elements.size() > 3) return cat("witness longer than g g g at n = ", n);
                for (const auto& e : w.elements)
                    if (e.expression != "g") return cat("unexpected witness element ", e.expression);
            }
    }
    const Verdict* v5 = verdict(r, 5);
    if (v5->status != Status::Excluded || !fired(*v5, predicate::complex_projective)) return "n = 5 not excluded by the catalog rule";
    return replay_all(f, r);
}

Failure s2s2s3_criterion() {
    auto f = family(s2s2s3);
    auto r = analyze(f);
    if (verdict(r, 5)->status != Status::Unknown) return "n = 5 is not Unknown";
    if (!fired(*verdict(r, 4), predicate::cup_length)) return "n = 4 not excluded by cup-length";
    if (r.component_lower_bound.value != 2) return cat("component bound ", r.component_lower_bound.value);
    return replay_all(f, r);
}

Failure connected_sums() {
    std::string sum = s2s2s3;
    for (int l0 = 2; l0 <= 3; ++l0) {
        sum = "connected_sum(" + sum + ", " + s2s2s3 + ")";
        auto f = family(sum);
        auto r = analyze(f);
        if (r.component_lower_bound.value != l0 + 1)
            return cat("l0 = ", l0, ": bound ", r.component_lower_bound.value);
        if (auto why = replay_all(f, r)) return why;
    }
    return std::nullopt;
}

Failure wu_product() {
    auto f = family("product(sphere(2), wu)");
    if (f.integral.group(4).size() != 0) return "H^4(M;Z) is not zero";
    auto r = analyze(f);
    for (int n = 1; n <= 5; ++n) {
        const Verdict* v = verdict(r, n);
        bool ok = false;
        for (const auto& w : v->witnesses)
            ok = ok || (w.predicate == predicate::torsion_product_lift && w.k == 2 && w.product_degree == 4 &&
                        w.certificate == LiftCertificate::EmptyPreimage);
        if (v->status != Status::Excluded || !ok) return cat("n = ", n, " lacks a k = 2 empty-preimage witness");
    }
    return replay_all(f, r);
}

Failure m0() {
    auto f = evaluate(parse_expression("load(\"" + data_path("m0_fixture.sgm") + "\")"), {{2, 3}, true});
    auto r = analyze(f);
    if (verdict(r, 5)->status == Status::Excluded) return "n = 5 is Excluded";
    for (const auto& v : r.verdicts)
        for (const auto& w : v.witnesses)
            if (w.predicate != predicate::cup_length) return cat(w.predicate, " fired at n = ", v.n);
    if (six_dimensional_witness(f, 2, 3, 4096)) return "six-dimensional-lift fired for k = 2";
    const auto& b = r.component_lower_bound;
    if (b.value != 2 || b.lifts.size() != 1) return cat("component bound ", b.value);
    const auto& w = b.lifts.front();
    if (w.k != 2 || w.elements[0].expression != "e2s" || w.elements[1].expression != "e4s")
        return "bound not justified by e2s ∪ e4s over Z/2";
    return replay_all(f, r);
}

Failure cp2_s3() {
    auto f = family("product(cp(2), sphere(3))");
    auto r = analyze(f);
    if (!fired(*verdict(r, 5), predicate::square_not_divisible)) return "n = 5 not excluded by square-not-divisible";
    for (int n = 1; n <= 4; ++n)
        if (!fired(*verdict(r, n), predicate::cup_length)) return cat("n = ", n, " not excluded by cup-length");
    return replay_all(f, r);
}

Failure properties() {
    if (auto f = check_snf_oracle(500, 11)) return "snf: " + *f;
    if (auto f = check_coset_lift(200, 12)) return "coset lift: " + *f;
    if (auto f = check_catalog_naturality()) return "naturality: " + *f;
    if (auto f = check_kunneth_poincare(100, 13)) return "kunneth: " + *f;
    for (const auto& fx : fixture_corpus()) {
        auto f = fixture_family(fx);
        if (auto why = replay_all(f, analyze(f))) return fx.name + ": " + *why;
    }
    if (auto f = check_bound_monotonicity()) return "monotonicity: " + *f;
    return std::nullopt;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Failure (*check)();
    };
    const Criterion criteria[] = {
        {"CP^3 excluded for n = 1..5", cp3},
        {"S^2 x S^2 x S^3: n = 5 unknown, n = 4 excluded, bound 2", s2s2s3_criterion},
        {"connected sums of 2 and 3 copies: bound l0 + 1", connected_sums},
        {"S^2 x Wu excluded for n = 1..5 over Z/2", wu_product},
        {"M0: nothing fires at n = 5, bound 2", m0},
        {"CP^2 x S^3 excluded for n = 1..5", cp2_s3},
        {"property suites", properties},
    };
    int failures = 0, index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Failure f;
        try {
            f = c.check();
        } catch (const std::exception& e) {
            f = cat("exception: ", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!f && secs >= 10.0) f = cat("took ", secs, " s");
        std::printf("%s %d %s (%.2f s)%s%s\n", f ? "FAIL" : "PASS", index, c.name, secs, f ? ": " : "",
                    f ? f->c_str() : "");
        failures += f.has_value();
    }
    return failures == 0 ? 0 : 1;
}
