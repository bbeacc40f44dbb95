#include "biham/pipeline.hpp"

#include <sstream>

#include "biham/polytools.hpp"

namespace biham {

namespace {

std::vector<std::pair<std::string, Expr>> matrix_residuals(const std::string& label,
                                                           const SymMatrix& m) {
    std::vector<std::pair<std::string, Expr>> out;
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            out.emplace_back(label + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]",
                             m.at(i, j));
    return out;
}

void fail_item(Report& report, const std::string& name, const std::string& why) {
    CheckItem item;
    item.name = name;
    item.status = CheckStatus::Fail;
    item.detail = why;
    report.add(std::move(item));
}

std::string render_matrix(const SymMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < m.rows(); ++i) {
        os << "[";
        for (size_t j = 0; j < m.cols(); ++j) {
            os << render(m.at(i, j));
            if (j + 1 < m.cols()) os << ", ";
        }
        os << "]";
        if (i + 1 < m.rows()) os << ", ";
    }
    os << "]";
    return os.str();
}

std::vector<Expr> gradient_of(const Expr& e, const std::vector<std::string>& coords) {
    std::vector<Expr> g;
    for (const auto& c : coords) g.push_back(derivative(e, c));
    return g;
}

struct CheckedSystem {
    std::optional<BihamiltonianStructure> b;
    std::optional<Expr> h0;
    std::optional<Expr> f0;
    std::vector<SymMatrix> extra_V;
};

CheckedSystem check_stage(const SystemDefinition& def, const ZeroTestConfig& cfg, Report& report) {
    CheckedSystem out;

    std::vector<std::pair<std::string, Expr>> sym_res;
    for (size_t i = 0; i < def.g.rows(); ++i)
        for (size_t j = i + 1; j < def.g.cols(); ++j)
            sym_res.emplace_back("g[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]",
                                 sub(def.g.at(i, j), def.g.at(j, i)));
    if (sym_res.empty()) sym_res.emplace_back("g[1,1]", num(0));
    if (check_zero(report, cfg, "metric-symmetry", sym_res) == CheckStatus::Fail) return out;

    if (check_nonzero(report, cfg, "metric-nondegenerate", mat_det(def.g)) == CheckStatus::Fail)
        return out;

    try {
        out.b = BihamiltonianStructure::build(Coords(def.coords), def.eta, def.g, cfg);
        HamiltonianDensity{def.h, "h"}.validate(out.b->coords);
        HamiltonianDensity{def.f, "f"}.validate(out.b->coords);
        for (size_t i = 0; i < def.extra_flows.size(); ++i) {
            HamiltonianDensity{def.extra_flows[i].first, "h" + std::to_string(i + 1)}
                .validate(out.b->coords);
            HamiltonianDensity{def.extra_flows[i].second, "f" + std::to_string(i + 1)}
                .validate(out.b->coords);
        }
    } catch (const std::exception& ex) {
        out.b.reset();
        fail_item(report, "structure-valid", ex.what());
        return out;
    }
    const BihamiltonianStructure& b = *out.b;

    check_bihamiltonian(b, def.h, def.f, cfg, report);
    check_flat_pencil(b.eta, b.metric, cfg, report);
    check_semisimple(b, cfg, report);

    SymMatrix V = flow_from_eta(b.eta, b.coords, def.h);
    for (size_t i = 0; i < def.extra_flows.size(); ++i) {
        std::string suffix = "-t" + std::to_string(i + 1);
        const auto& [h1, f1] = def.extra_flows[i];
        check_bihamiltonian(b, h1, f1, cfg, report, suffix);
        SymMatrix A = flow_from_eta(b.eta, b.coords, h1);
        check_commuting(HydroFlow{b.coords, V, "t"}, HydroFlow{b.coords, A, "t" + std::to_string(i + 1)},
                        cfg, report, "commuting" + suffix);
        out.extra_V.push_back(std::move(A));
    }

    TranslationHamiltonians th = translation_hamiltonians(b, def.flatcoords, cfg, report);
    out.h0 = th.h0;
    out.f0 = th.f0;
    return out;
}

void transform_stage(const SystemDefinition& def, const CheckedSystem& sys,
                     const ZeroTestConfig& cfg, Report& report, std::ostringstream& rendered) {
    const BihamiltonianStructure& b = *sys.b;
    const LinearReciprocalTransform& lr = *def.transform;

    VariableChange vc =
        new_dependent_variables(b, def.h, lr, def.vcoords, def.inverse, cfg, report);

    rendered << "transformation: y = " << lr.a.str() << "*x + " << lr.b.str() << "*t, s = "
             << lr.p.str() << "*x + " << lr.q.str() << "*t\n";
    rendered << "new dependent variables:\n";
    for (size_t i = 0; i < vc.v.size(); ++i)
        rendered << "  " << vc.vcoords[i] << " = " << render(vc.v[i]) << "\n";
    rendered << "Q = " << render_matrix(vc.Q) << "\n";
    rendered << "W = " << render_matrix(vc.W) << "\n";

    SymMatrix V = flow_from_eta(b.eta, b.coords, def.h);
    TransformedFlows flows = transform_flows(V, sys.extra_V, lr, vc.W, cfg, report);
    rendered << "s-flow (u-parametrized) = " << render_matrix(flows.s_flow) << "\n";
    rendered << "t0-flow (u-parametrized) = " << render_matrix(flows.t0_flow) << "\n";
    for (size_t i = 0; i < flows.t1_flows.size(); ++i)
        rendered << "t" << i + 1 << "-flow (u-parametrized) = " << render_matrix(flows.t1_flows[i])
                 << "\n";

    PulledBackStructure pb = pullback_structure(b, vc, cfg, report);
    rendered << "gbar (u-parametrized) = " << render_matrix(pb.gbar_u) << "\n";
    const size_t n = b.dim();
    rendered << "Gammabar (u-parametrized, nonzero entries):\n";
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l)
                if (!is_zero(pb.gammabar.at(k, i, l)))
                    rendered << "  Gammabar^" << k + 1 << "_{" << i + 1 << "," << l + 1
                             << "} = " << render(pb.gammabar.at(k, i, l)) << "\n";
    if (pb.gbar_v) rendered << "gbar(v) = " << render_matrix(pb.gbar_v->g) << "\n";

    Expr hbar = pavlov_transformed_hamiltonian(b, def.h, lr, cfg, report);
    rendered << "pavlov hbar (u-parametrized) = " << render(hbar) << "\n";
    if (vc.inverse)
        rendered << "pavlov hbar (v-coordinates) = "
                 << render(rational_normalize(substitute(hbar, vc.u_of_v()))) << "\n";

    // candidate potentials against their role targets
    if (def.hbar)
        verify_potential(*def.hbar,
                         gradient_of(sub(mul(num(lr.a), def.h), mul(num(lr.b), *sys.h0)), def.coords),
                         vc, cfg, report, "potential-hbar");
    if (def.fbar) {
        if (sys.f0)
            verify_potential(
                *def.fbar,
                gradient_of(sub(mul(num(lr.a), def.f), mul(num(lr.b), *sys.f0)), def.coords), vc,
                cfg, report, "potential-fbar");
        else
            add_skipped(report, "potential-fbar",
                        "no flat-coordinate data for f0; fbar is checked through theorem2 instead");
    }
    for (size_t i = 0; i < def.extra_flows.size(); ++i) {
        const auto& [h1, f1] = def.extra_flows[i];
        std::string suffix = i == 0 ? "" : std::to_string(i + 1);
        if (def.hbar1[i])
            verify_potential(*def.hbar1[i],
                             gradient_of(mul(num(lr.jacobian_det()), h1), def.coords), vc, cfg,
                             report, "potential-hbar1" + suffix);
        if (def.fbar1[i])
            verify_potential(*def.fbar1[i],
                             gradient_of(mul(num(lr.jacobian_det()), f1), def.coords), vc, cfg,
                             report, "potential-fbar1" + suffix);
        closedness_certificate(b.coords, h1, vc.W, cfg, report, "closedness-h1" + suffix);
        closedness_certificate(b.coords, f1, vc.W, cfg, report, "closedness-f1" + suffix);
    }

    verify_theorem1(b, vc, pb, cfg, report);

    TheoremCandidates cands{def.hbar, def.fbar, def.hbar1, def.fbar1};
    verify_theorem2_3(b, vc, lr, def.h, def.f, *sys.h0, sys.f0, def.extra_flows, flows, pb, hbar,
                      cands, cfg, report);
}

} // namespace

PipelineResult run_check(const SystemDefinition& def) {
    PipelineResult out;
    out.cfg = def.zerotest;
    check_stage(def, out.cfg, out.report);
    return out;
}

PipelineResult run_transform(const SystemDefinition& def) {
    PipelineResult out;
    out.cfg = def.zerotest;
    if (!def.transform) {
        fail_item(out.report, "transform-present", "definition has no [transform] section");
        return out;
    }
    std::ostringstream rendered;
    CheckedSystem sys = check_stage(def, out.cfg, out.report);
    if (sys.b) transform_stage(def, sys, out.cfg, out.report, rendered);
    out.rendered = rendered.str();
    return out;
}

SystemDefinition kdv_definition(int m, int k) {
    if (m < 1 || k < 1)
        throw std::invalid_argument("kdv example requires integer parameters m >= 1 and k >= 1");
    SystemDefinition def;
    def.coords = {"u"};
    def.eta = SymMatrix::from_rows({{num(1)}});
    def.g = SymMatrix::from_rows({{sym("u")}});
    auto upow = [](long e, long den) {
        return pow(sym("u"), Rational(e) / Rational(den));
    };
    def.h = mul(num(Rational(1, m + 2)), upow(m + 2, 1));
    def.f = mul(num(Rational(2, 2 * m + 1)), upow(m + 1, 1));
    def.extra_flows.emplace_back(mul(num(Rational(1, k + 2)), upow(k + 2, 1)),
                                 mul(num(Rational(2, 2 * k + 1)), upow(k + 1, 1)));
    def.transform = LinearReciprocalTransform{Rational(0), Rational(1), Rational(-1), Rational(0)};
    def.vcoords = {"v"};
    def.inverse = std::vector<Expr>{pow(sym("v"), Rational(1, m + 1))};
    def.flatcoords = TranslationData{{mul(num(2), pow(sym("u"), Rational(1, 2)))},
                                     SymMatrix::from_rows({{num(1)}})};
    auto vpow = [](long nume, long den) { return pow(sym("v"), Rational(nume) / Rational(den)); };
    def.hbar = mul(num(-Rational(m + 1, m + 2)), vpow(m + 2, m + 1));
    def.fbar = mul(num(-2), sym("v"));
    def.hbar1 = {mul(num(Rational(m + 1, k + m + 2)), vpow(k + m + 2, m + 1))};
    def.fbar1 = {mul(num(Rational(2 * (k + 1) * (m + 1), (2 * k + 1) * (m + k + 1))),
                     vpow(m + k + 1, m + 1))};
    return def;
}

SystemDefinition toda_definition() {
    SystemDefinition def;
    def.coords = {"w", "u"};
    def.eta = SymMatrix::from_rows({{num(0), num(1)}, {num(1), num(0)}});
    def.g = SymMatrix::from_rows(
        {{parse("2*exp(u)"), parse("w")}, {parse("w"), parse("2")}});
    def.h = parse("exp(u) + w^2/2");
    def.f = parse("w");
    def.extra_flows.emplace_back(parse("exp(u)*w + w^3/6"), parse("(exp(u) + w^2/2)/2"));
    def.transform = LinearReciprocalTransform{Rational(0), Rational(1), Rational(-1), Rational(0)};
    def.vcoords = {"wb", "ub"};
    def.inverse = std::vector<Expr>{parse("ub"), parse("log(wb)")};
    def.hbar = parse("-wb*log(wb) + wb - ub^2/2");
    def.fbar = parse("-ub*log(wb)/2 + ub - sqrt(-4*wb + ub^2)*ArcTanh(ub/sqrt(-4*wb + ub^2))");
    def.hbar1 = {parse("(ub^2*wb + wb^2)/2")};
    def.fbar1 = {parse("ub*wb/2")};
    // keep ub^2 > 4*wb > 0 so the square root stays real on samples
    def.zerotest.intervals["wb"] = {Rational(1, 10), Rational(3, 10)};
    def.zerotest.intervals["ub"] = {Rational(3, 2), Rational(2)};
    return def;
}

namespace {

// reference closed forms of the transformed kdv objects, v-explicit
struct KdvExpected {
    Expr v_of_u;     // u^{m+1}
    Expr sflow_v;    // -(1/(m+1)) v^{-m/(m+1)}
    Expr t1flow_v;   // ((k+1)/(m+1)) v^{(k-m)/(m+1)}
    Expr hbar_v;     // -((m+1)/(m+2)) v^{(m+2)/(m+1)}
    Expr gbar_v;     // v^{1/(m+1)}
    Expr gammabar_v; // (1/(2(m+1))) v^{-m/(m+1)}
};

KdvExpected kdv_expected(int m, int k) {
    auto vpow = [](long nume, long den) { return pow(sym("v"), Rational(nume) / Rational(den)); };
    KdvExpected e;
    e.v_of_u = pow(sym("u"), Rational(m + 1));
    e.sflow_v = mul(num(-Rational(1, m + 1)), vpow(-m, m + 1));
    e.t1flow_v = mul(num(Rational(k + 1, m + 1)), vpow(k - m, m + 1));
    e.hbar_v = mul(num(-Rational(m + 1, m + 2)), vpow(m + 2, m + 1));
    e.gbar_v = vpow(1, m + 1);
    e.gammabar_v = mul(num(Rational(1, 2 * (m + 1))), vpow(-m, m + 1));
    return e;
}

void expected_stage_kdv(const SystemDefinition& def, int m, int k, const ZeroTestConfig& cfg,
                        Report& report) {
    KdvExpected exp_ = kdv_expected(m, k);
    BihamiltonianStructure b = BihamiltonianStructure::build(Coords(def.coords), def.eta, def.g, cfg);
    Report scratch;
    VariableChange vc =
        new_dependent_variables(b, def.h, *def.transform, def.vcoords, def.inverse, cfg, scratch);
    check_zero(report, cfg, "expected-v", {{"v", sub(vc.v[0], substitute(exp_.v_of_u, {}))}});

    SymMatrix V = flow_from_eta(b.eta, b.coords, def.h);
    SymMatrix A = flow_from_eta(b.eta, b.coords, def.extra_flows[0].first);
    TransformedFlows flows = transform_flows(V, {A}, *def.transform, vc.W, cfg, scratch);
    auto vmap = vc.v_of_u();
    check_zero(report, cfg, "expected-sflow",
               {{"s", sub(flows.s_flow.at(0, 0), substitute(exp_.sflow_v, vmap))}});
    check_zero(report, cfg, "expected-t1flow",
               {{"t1", sub(flows.t1_flows[0].at(0, 0), substitute(exp_.t1flow_v, vmap))}});

    Expr hbar = pavlov_transformed_hamiltonian(b, def.h, *def.transform, cfg, scratch);
    check_zero(report, cfg, "expected-hbar", {{"hbar", sub(hbar, substitute(exp_.hbar_v, vmap))}});

    PulledBackStructure pb = pullback_structure(b, vc, cfg, scratch);
    check_zero(report, cfg, "expected-gbar",
               {{"gbar[1,1]", sub(pb.gbar_v->g.at(0, 0), exp_.gbar_v)}});
    BihamiltonianStructure bv =
        BihamiltonianStructure::build(Coords(def.vcoords), def.eta, pb.gbar_v->g, cfg);
    check_zero(report, cfg, "expected-gammabar",
               {{"Gammabar^{11}_1", sub(bv.contra.at(0, 0, 0), exp_.gammabar_v)}});
}

void expected_stage_toda(const SystemDefinition& def, const ZeroTestConfig& cfg, Report& report) {
    BihamiltonianStructure b = BihamiltonianStructure::build(Coords(def.coords), def.eta, def.g, cfg);
    Report scratch;
    VariableChange vc =
        new_dependent_variables(b, def.h, *def.transform, def.vcoords, def.inverse, cfg, scratch);
    check_zero(report, cfg, "expected-v",
               {{"wb", sub(vc.v[0], parse("exp(u)"))}, {"ub", sub(vc.v[1], parse("w"))}});

    SymMatrix V = flow_from_eta(b.eta, b.coords, def.h);
    check_zero(report, cfg, "expected-V", matrix_residuals("V", V - SymMatrix::from_rows({
                                              {num(0), parse("exp(u)")},
                                              {num(1), num(0)},
                                          })));
    SymMatrix A = flow_from_eta(b.eta, b.coords, def.extra_flows[0].first);
    check_zero(report, cfg, "expected-A",
               matrix_residuals("A", A - SymMatrix::from_rows({
                                          {parse("exp(u)"), parse("w*exp(u)")},
                                          {parse("w"), parse("exp(u)")},
                                      })));

    TransformedFlows flows = transform_flows(V, {A}, *def.transform, vc.W, cfg, scratch);
    auto u_of_v = vc.u_of_v();
    auto to_v = [&](const SymMatrix& mat) {
        return mat.map([&](const Expr& e) { return rational_normalize(substitute(e, u_of_v)); });
    };
    // tr-3: wb_s = -ub_y, ub_s = -wb_y/wb
    SymMatrix tr3 = SymMatrix::from_rows({{num(0), num(-1)}, {parse("-1/wb"), num(0)}});
    check_zero(report, cfg, "expected-sflow", matrix_residuals("s", to_v(flows.s_flow) - tr3));
    // tr-4: wb_t1 = ub wb_y + wb ub_y, ub_t1 = wb_y + ub ub_y
    SymMatrix tr4 = SymMatrix::from_rows({{parse("ub"), parse("wb")}, {num(1), parse("ub")}});
    check_zero(report, cfg, "expected-t1flow", matrix_residuals("t1", to_v(flows.t1_flows[0]) - tr4));

    Expr hbar = pavlov_transformed_hamiltonian(b, def.h, *def.transform, cfg, scratch);
    check_zero(report, cfg, "expected-hbar",
               {{"hbar", sub(hbar, substitute(*def.hbar, vc.v_of_u()))}});

    PulledBackStructure pb = pullback_structure(b, vc, cfg, scratch);
    SymMatrix gbar = SymMatrix::from_rows({{parse("2*wb"), parse("ub")}, {parse("ub"), num(2)}});
    check_zero(report, cfg, "expected-gbar", matrix_residuals("gbar", pb.gbar_v->g - gbar));

    // reference entries of the transformed second operator
    BihamiltonianStructure bv =
        BihamiltonianStructure::build(Coords(def.vcoords), def.eta, pb.gbar_v->g, cfg);
    std::vector<std::pair<std::string, Expr>> gb;
    const char* names[2] = {"wb", "ub"};
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j)
            for (size_t kk = 0; kk < 2; ++kk) {
                Expr want = num(0);
                if (i == 0 && j == 0 && kk == 0) want = num(1); // Gammabar^{11}_wb = 1
                if (i == 1 && j == 0 && kk == 1) want = num(1); // Gammabar^{21}_ub = 1
                gb.emplace_back("Gammabar^{" + std::to_string(i + 1) + std::to_string(j + 1) + "}_" +
                                    names[kk],
                                sub(bv.contra.at(i, j, kk), want));
            }
    check_zero(report, cfg, "expected-gammabar", gb);
}

} // namespace

PipelineResult run_example_definition(const SystemDefinition& def, const std::string& name, int m,
                                      int k) {
    if (name != "kdv" && name != "toda")
        throw std::invalid_argument("unknown example '" + name + "' (expected kdv or toda)");
    PipelineResult out = run_transform(def);
    if (name == "kdv")
        expected_stage_kdv(def, m, k, out.cfg, out.report);
    else
        expected_stage_toda(def, out.cfg, out.report);
    return out;
}

PipelineResult run_example(const std::string& name, int m, int k) {
    SystemDefinition def = name == "kdv" ? kdv_definition(m, k) : toda_definition();
    return run_example_definition(def, name, m, k);
}

} // namespace biham
