#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "biham/geometry.hpp"
#include "biham/hydro.hpp"
#include "biham/reciprocal.hpp"

using namespace biham;

namespace {

bool zero_tested(const Expr& e, const ZeroTestConfig& cfg = {}) {
    return is_identically_zero(e, cfg).zero();
}

ContravariantMetric kdv_metric() {
    return ContravariantMetric(Coords({"u"}), SymMatrix::from_rows({{parse("u")}}));
}

ContravariantMetric toda_metric() {
    return ContravariantMetric(Coords({"w", "u"}),
                               SymMatrix::from_rows({{parse("2*e^u"), parse("w")},
                                                     {parse("w"), parse("2")}}));
}

ContravariantMetric nonflat_metric() {
    return ContravariantMetric(Coords({"x", "y"}),
                               SymMatrix::from_rows({{num(1), num(0)},
                                                     {num(0), parse("1/(1-x^2)")}}));
}

ZeroTestConfig away_from_one() {
    ZeroTestConfig cfg;
    cfg.intervals["x"] = {Rational(1, 4), Rational(3, 4)};
    cfg.intervals["y"] = {Rational(1, 4), Rational(3, 4)};
    return cfg;
}

} // namespace

TEST_CASE("Levi-Civita symbols of the worked metrics") {
    ZeroTestConfig cfg;
    auto kdv = kdv_metric();
    Christoffel gk = christoffel_from_metric(kdv, cfg);
    CHECK(zero_tested(sub(gk.at(0, 0, 0), parse("-1/(2*u)"))));

    ContravariantMetric constant(Coords({"w", "u"}),
                                 SymMatrix::from_rows({{num(0), num(1)}, {num(1), num(0)}}));
    Christoffel gc = christoffel_from_metric(constant, cfg);
    for (size_t k = 0; k < 2; ++k)
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j) CHECK(is_zero(gc.at(k, i, j))); // structural zero

    auto toda = toda_metric();
    Christoffel gt = christoffel_from_metric(toda, cfg);
    ContraChristoffel ct = contravariant_christoffel(toda, gt);
    CHECK(equal(ct.at(0, 0, 1), exp_(sym("u"))));
    CHECK(equal(ct.at(1, 0, 0), num(1)));
    CHECK(is_zero(ct.at(0, 0, 0)));
    CHECK(is_zero(ct.at(0, 1, 0)));
    CHECK(is_zero(ct.at(0, 1, 1)));
    CHECK(is_zero(ct.at(1, 0, 1)));
    CHECK(is_zero(ct.at(1, 1, 0)));
    CHECK(is_zero(ct.at(1, 1, 1)));

    // KdV contravariant symbol reproduces J2 = u d_x + u_x/2
    ContraChristoffel ck = contravariant_christoffel(kdv, gk);
    CHECK(zero_tested(sub(ck.at(0, 0, 0), num(Rational(1, 2)))));
}

TEST_CASE("metricity of the Levi-Civita connection") {
    std::vector<ContravariantMetric> metrics = {kdv_metric(), toda_metric()};
    ZeroTestConfig cfg;
    for (const auto& m : metrics) {
        Christoffel g = christoffel_from_metric(m, cfg);
        for (auto& [label, r] : metricity_residuals(m, g, cfg)) CHECK(zero_tested(r));
    }
    ZeroTestConfig cfg2 = away_from_one();
    auto nf = nonflat_metric();
    Christoffel g2 = christoffel_from_metric(nf, cfg2);
    for (auto& [label, r] : metricity_residuals(nf, g2, cfg2)) CHECK(zero_tested(r, cfg2));
}

TEST_CASE("curvature against a direct expansion of the defining formula") {
    // diagonal metric diag(1, (u1)^2) contravariant, coordinates (u1, u2)
    ZeroTestConfig cfg;
    ContravariantMetric m(Coords({"u1", "u2"}),
                          SymMatrix::from_rows({{num(1), num(0)}, {num(0), parse("u1^2")}}));
    Christoffel gamma = christoffel_from_metric(m, cfg);
    Curvature r = curvature(m.coords, gamma);

    // independent route: expand the four-term formula from scratch on
    // hand-derived symbols of the covariant metric diag(1, u1^-2)
    // Gamma^1_{22} = u1^-3, Gamma^2_{12} = -1/u1, all others zero
    auto G = [&](size_t k, size_t i, size_t j) -> Expr {
        if (k == 0 && i == 1 && j == 1) return parse("u1^(-3)");
        if (k == 1 && ((i == 0 && j == 1) || (i == 1 && j == 0))) return parse("-1/u1");
        return num(0);
    };
    for (size_t k = 0; k < 2; ++k)
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j) CHECK(zero_tested(sub(gamma.at(k, i, j), G(k, i, j))));

    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j)
            for (size_t k = 0; k < 2; ++k)
                for (size_t s = 0; s < 2; ++s) {
                    std::vector<Expr> terms;
                    terms.push_back(derivative(G(s, j, k), m.coords[i]));
                    terms.push_back(neg(derivative(G(s, i, k), m.coords[j])));
                    for (size_t mm = 0; mm < 2; ++mm) {
                        terms.push_back(mul(G(s, i, mm), G(mm, j, k)));
                        terms.push_back(neg(mul(G(s, j, mm), G(mm, i, k))));
                    }
                    CHECK(zero_tested(sub(r.at(i, j, k, s), add(std::move(terms)))));
                }
}

TEST_CASE("curvature antisymmetry in the first index pair") {
    ZeroTestConfig cfg = away_from_one();
    for (const auto& m : {toda_metric(), nonflat_metric()}) {
        Christoffel gamma = christoffel_from_metric(m, cfg);
        Curvature r = curvature(m.coords, gamma);
        const size_t n = m.dim();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    for (size_t s = 0; s < n; ++s)
                        CHECK(zero_tested(add(r.at(i, j, k, s), r.at(j, i, k, s)), cfg));
    }
}

TEST_CASE("flatness verdicts") {
    ZeroTestConfig cfg;
    Report rep;
    ContravariantMetric eta(Coords({"w", "u"}),
                            SymMatrix::from_rows({{num(0), num(1)}, {num(1), num(0)}}));
    CHECK(is_flat(eta, cfg, rep, "eta") == CheckStatus::Pass);
    CHECK(is_flat(toda_metric(), cfg, rep, "toda") == CheckStatus::Pass);
    CHECK(is_flat(kdv_metric(), cfg, rep, "kdv") == CheckStatus::Pass);

    ZeroTestConfig cfg2 = away_from_one();
    Report rep2;
    CHECK(is_flat(nonflat_metric(), cfg2, rep2, "round") == CheckStatus::Fail);
    const CheckItem& item = rep2.items().back();
    REQUIRE(item.witness.has_value());
    // hand-computed component: R_{121}^2 = -1/(1-x^2)^2 at the witness
    Rational x = item.witness->point.at("x");
    EvalPoint pt;
    pt.precision = cfg2.precision;
    for (auto& [s, v] : item.witness->point) pt.set_rational(s, v);
    Expr expected = parse("-1/(1-x^2)^2");
    Real diff = (item.witness->value - evaluate(expected, pt).value).magnitude();
    CHECK(diff < Real::pow2(-100, cfg2.precision));
}

TEST_CASE("flat pencils of the worked examples") {
    ZeroTestConfig cfg;
    Report rep;
    auto r1 = check_flat_pencil(SymMatrix::from_rows({{num(1)}}), kdv_metric(), cfg, rep);
    CHECK(r1.status == CheckStatus::Pass);
    CHECK(r1.observed_degree <= 3);

    auto eta2 = SymMatrix::from_rows({{num(0), num(1)}, {num(1), num(0)}});
    auto r2 = check_flat_pencil(eta2, toda_metric(), cfg, rep);
    CHECK(r2.status == CheckStatus::Pass);
    CHECK(r2.observed_degree <= 6);

    ZeroTestConfig cfg2 = away_from_one();
    Report rep2;
    auto r3 = check_flat_pencil(SymMatrix::identity(2), nonflat_metric(), cfg2, rep2);
    CHECK(r3.status == CheckStatus::Fail);
    bool witnessed = false;
    for (const auto& it : rep2.items())
        if (it.status == CheckStatus::Fail && it.witness) witnessed = true;
    CHECK(witnessed);

    // rescaling the exponential entry is a coordinate translation in u,
    // so the pencil stays flat; the bihamiltonian checks are what reject
    // this perturbation
    Report rep_scaled;
    ContravariantMetric scaled(Coords({"w", "u"}),
                               SymMatrix::from_rows({{parse("3*e^u"), parse("w")},
                                                     {parse("w"), parse("2")}}));
    CHECK(check_flat_pencil(eta2, scaled, cfg, rep_scaled).status == CheckStatus::Pass);

    // adding w to the exponential entry genuinely breaks the pencil
    Report rep_broken;
    ContravariantMetric broken(Coords({"w", "u"}),
                               SymMatrix::from_rows({{parse("2*e^u + w"), parse("w")},
                                                     {parse("w"), parse("2")}}));
    CHECK(check_flat_pencil(eta2, broken, cfg, rep_broken).status == CheckStatus::Fail);

    // a singular eta with matching singular g degenerates the pencil
    Report rep3;
    SymMatrix eta_sing = SymMatrix::from_rows({{num(1), num(0)}, {num(0), num(0)}});
    ContravariantMetric g_sing(Coords({"w", "u"}),
                               SymMatrix::from_rows({{parse("w"), num(0)}, {num(0), num(0)}}));
    auto r4 = check_flat_pencil(eta_sing, g_sing, cfg, rep3);
    CHECK(r4.status == CheckStatus::Fail);
    CHECK(rep3.items().back().detail.find("degenerate") != std::string::npos);
}

TEST_CASE("flat pencil implies flat members at lambda = 0") {
    ZeroTestConfig cfg;
    Report rep;
    auto eta2 = SymMatrix::from_rows({{num(0), num(1)}, {num(1), num(0)}});
    REQUIRE(check_flat_pencil(eta2, toda_metric(), cfg, rep).status == CheckStatus::Pass);
    ContravariantMetric eta_metric(Coords({"w", "u"}), eta2);
    CHECK(is_flat(toda_metric(), cfg, rep, "g-at-lambda-0") == CheckStatus::Pass);
    CHECK(is_flat(eta_metric, cfg, rep, "eta-itself") == CheckStatus::Pass);
}

TEST_CASE("Christoffel transport under the reciprocal change (cross-module)") {
    ZeroTestConfig cfg;
    auto eta2 = SymMatrix::from_rows({{num(0), num(1)}, {num(1), num(0)}});
    auto b = BihamiltonianStructure::build(Coords({"w", "u"}), eta2, toda_metric().g, cfg);
    LinearReciprocalTransform lr{Rational(0), Rational(1), Rational(-1), Rational(0)};
    Report rep;
    VariableChange vc = new_dependent_variables(b, parse("e^u + w^2/2"), lr, {"wb", "ub"},
                                                std::nullopt, cfg, rep);
    PulledBackStructure pb = pullback_structure(b, vc, cfg, rep);
    const size_t n = 2;
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                std::vector<Expr> terms{b.gamma.at(k, i, j)};
                for (size_t l = 0; l < n; ++l)
                    terms.push_back(neg(mul(pb.gammabar.at(k, i, l), vc.Q.at(l, j))));
                CHECK(zero_tested(add(std::move(terms))));
            }
    CHECK(rep.overall() == CheckStatus::Pass);
}

TEST_CASE("Dubrovin certificate for the KdV pencil") {
    ZeroTestConfig cfg;
    SymMatrix eta = SymMatrix::from_rows({{num(1)}});
    Report rep;
    DubrovinCertificate good{{parse("u^2/4")}, SymMatrix::from_rows({{num(0)}})};
    CHECK(check_dubrovin_conditions(eta, kdv_metric(), good, cfg, rep) == CheckStatus::Pass);

    // constant second metric with a linear vector field
    Report rep2;
    ContravariantMetric cg(Coords({"u"}), SymMatrix::from_rows({{num(3)}}));
    DubrovinCertificate linear{{parse("3*u/2")}, SymMatrix::from_rows({{num(0)}})};
    CHECK(check_dubrovin_conditions(eta, cg, linear, cfg, rep2) == CheckStatus::Pass);

    // perturbing xi by u^3 breaks the first family with a witness
    Report rep3;
    DubrovinCertificate bad{{parse("u^2/4 + u^3")}, SymMatrix::from_rows({{num(0)}})};
    CHECK(check_dubrovin_conditions(eta, kdv_metric(), bad, cfg, rep3) == CheckStatus::Fail);
    bool witnessed = false;
    for (const auto& it : rep3.items())
        if (it.status == CheckStatus::Fail && it.witness) witnessed = true;
    CHECK(witnessed);

    // non-constant c is rejected by the constancy family
    Report rep4;
    DubrovinCertificate badc{{parse("u^2/4")}, SymMatrix::from_rows({{parse("u")}})};
    CHECK(check_dubrovin_conditions(eta, kdv_metric(), badc, cfg, rep4) == CheckStatus::Fail);
}

TEST_CASE("pencil Delta tensors of the KdV pair") {
    ZeroTestConfig cfg;
    PencilTensors d = pencil_tensors(SymMatrix::from_rows({{num(1)}}), kdv_metric(), cfg);
    CHECK(zero_tested(sub(d.delta_up(0, 0, 0), num(Rational(1, 2)))));
    CHECK(zero_tested(sub(d.delta_low(0, 0, 0), num(Rational(1, 2)))));

    // consistency with the defining contractions for Toda
    auto eta2 = SymMatrix::from_rows({{num(0), num(1)}, {num(1), num(0)}});
    auto m = toda_metric();
    PencilTensors dt = pencil_tensors(eta2, m, cfg);
    Christoffel gamma = christoffel_from_metric(m, cfg);
    ContraChristoffel contra = contravariant_christoffel(m, gamma);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j)
            for (size_t k = 0; k < 2; ++k) {
                std::vector<Expr> terms{neg(dt.delta_up(i, j, k))};
                for (size_t s = 0; s < 2; ++s) terms.push_back(mul(eta2.at(i, s), contra.at(j, k, s)));
                CHECK(zero_tested(add(std::move(terms))));
            }
}

TEST_CASE("fresh symbol avoids coordinate names") {
    CHECK(fresh_symbol({"u", "w"}, "lam") == "lam");
    CHECK(fresh_symbol({"lam", "lam0"}, "lam") == "lam1");
}
