#include "biham/reciprocal.hpp"

#include "biham/polytools.hpp"

namespace biham {

namespace {

std::string idx2(size_t i, size_t j) {
    return "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
}

std::vector<std::pair<std::string, Expr>> matrix_residuals(const std::string& label,
                                                           const SymMatrix& m) {
    std::vector<std::pair<std::string, Expr>> out;
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            out.emplace_back(label + idx2(i, j), m.at(i, j));
    return out;
}

SymMatrix normalized(const SymMatrix& m) {
    return m.map([](const Expr& e) { return rational_normalize(e); });
}

} // namespace

LinearReciprocalTransform::LinearReciprocalTransform(Rational a_, Rational b_, Rational p_,
                                                     Rational q_)
    : a(std::move(a_)), b(std::move(b_)), p(std::move(p_)), q(std::move(q_)) {
    if (jacobian_det().is_zero())
        throw std::invalid_argument("reciprocal transformation needs a q - b p != 0");
}

bool LinearReciprocalTransform::is_identity() const {
    return a.is_one() && b.is_zero() && p.is_zero() && q.is_one();
}

std::map<std::string, Expr> VariableChange::v_of_u() const {
    std::map<std::string, Expr> m;
    for (size_t i = 0; i < vcoords.size(); ++i) m.emplace(vcoords[i], v[i]);
    return m;
}

std::map<std::string, Expr> VariableChange::u_of_v() const {
    if (!inverse) throw std::logic_error("no inverse map supplied");
    std::map<std::string, Expr> m;
    for (size_t i = 0; i < ucoords.size(); ++i) m.emplace(ucoords.names[i], (*inverse)[i]);
    return m;
}

VariableChange new_dependent_variables(const BihamiltonianStructure& b, const Expr& h,
                                       const LinearReciprocalTransform& lr,
                                       std::vector<std::string> vnames,
                                       std::optional<std::vector<Expr>> inverse_map,
                                       const ZeroTestConfig& cfg, Report& report) {
    const size_t n = b.dim();
    if (vnames.size() != n) throw std::invalid_argument("need one v-name per coordinate");
    for (const auto& vn : vnames)
        for (const auto& un : b.coords.names)
            if (vn == un) throw std::invalid_argument("v-coordinate name collides with " + un);

    // h0 = eta_{ij} u^i u^j / 2, potential of the translation flow
    std::vector<Expr> h0_terms;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            h0_terms.push_back(mul({num(Rational(1, 2)), b.eta_cov.at(i, j),
                                    sym(b.coords[i]), sym(b.coords[j])}));
    Expr density = sub(mul(num(lr.q), add(std::move(h0_terms))), mul(num(lr.p), h));

    VariableChange vc{b.coords, std::move(vnames), {}, {}, {}, std::nullopt};
    for (size_t i = 0; i < n; ++i) {
        std::vector<Expr> terms;
        for (size_t k = 0; k < n; ++k)
            terms.push_back(mul(b.eta.at(i, k), derivative(density, b.coords[k])));
        vc.v.push_back(rational_normalize(add(std::move(terms))));
    }

    SymMatrix Q(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) Q.set(i, j, derivative(vc.v[i], b.coords[j]));
    vc.Q = Q;

    SymMatrix V = flow_from_eta(b.eta, b.coords, h);
    SymMatrix expected = mat_scale(num(lr.q), SymMatrix::identity(n)) - mat_scale(num(lr.p), V);
    check_zero(report, cfg, "jacobian-consistency", matrix_residuals("Q", Q - expected));

    check_zero(report, cfg, "eta-transport",
               matrix_residuals("etaQ", mat_mul(b.eta, Q.transpose()) - mat_mul(Q, b.eta)));
    check_zero(report, cfg, "g-transport",
               matrix_residuals("gQ", mat_mul(b.metric.g, Q.transpose()) - mat_mul(Q, b.metric.g)));

    vc.W = mat_inverse(Q, cfg); // throws SingularMatrix when degenerate

    if (inverse_map) {
        if (inverse_map->size() != n)
            throw std::invalid_argument("inverse map needs one expression per coordinate");
        vc.inverse = std::move(inverse_map);
        std::map<std::string, Expr> u_of_v = vc.u_of_v();
        std::vector<std::pair<std::string, Expr>> residuals;
        for (size_t i = 0; i < n; ++i)
            residuals.emplace_back("v[" + std::to_string(i + 1) + "]",
                                   sub(substitute(vc.v[i], u_of_v), sym(vc.vcoords[i])));
        check_zero(report, cfg, "inverse-consistency", residuals);
    }
    return vc;
}

TransformedFlows transform_flows(const SymMatrix& V, const std::vector<SymMatrix>& extra_flows,
                                 const LinearReciprocalTransform& lr, const SymMatrix& W,
                                 const ZeroTestConfig& cfg, Report& report) {
    const size_t n = V.rows();
    TransformedFlows out;
    SymMatrix aV_bI = mat_scale(num(lr.a), V) - mat_scale(num(lr.b), SymMatrix::identity(n));
    out.s_flow = normalized(mat_mul(aV_bI, W));
    out.t0_flow = normalized(mat_scale(num(lr.jacobian_det()), W));
    for (const auto& A : extra_flows)
        out.t1_flows.push_back(normalized(mat_scale(num(lr.jacobian_det()), mat_mul(A, W))));

    // s-flow = (aq-bp)^{-1} (a t-flow - b t0-flow) with the t-flow of v
    // being (aq-bp) V W
    SymMatrix t_flow_v = mat_scale(num(lr.jacobian_det()), mat_mul(V, W));
    SymMatrix rhs = mat_scale(num(Rational(1) / lr.jacobian_det()),
                              mat_scale(num(lr.a), t_flow_v) - mat_scale(num(lr.b), out.t0_flow));
    check_zero(report, cfg, "sflow-identity", matrix_residuals("sflow", out.s_flow - rhs));
    return out;
}

SymMatrix general_reciprocal_flow(const Coords& coords, const SymMatrix& V, const Expr& a,
                                  const Expr& b, const Expr& p, const Expr& q,
                                  const ZeroTestConfig& cfg, Report& report) {
    const size_t n = coords.size();
    CheckStatus ca = check_conservation_law(coords, V, a, b, cfg, report, "grf-conservation-ab");
    CheckStatus cp = check_conservation_law(coords, V, p, q, cfg, report, "grf-conservation-pq");
    if (ca == CheckStatus::Fail || cp == CheckStatus::Fail)
        throw std::invalid_argument("(a,b) and (p,q) must be conservation-law pairs");
    CheckStatus nd =
        check_nonzero(report, cfg, "grf-nondegenerate", sub(mul(a, q), mul(p, b)));
    if (nd != CheckStatus::Pass)
        throw std::invalid_argument("a(u) q(u) - p(u) b(u) vanishes identically");

    SymMatrix qI_pV = mat_scale(q, SymMatrix::identity(n)) - mat_scale(p, V);
    SymMatrix W = mat_inverse(qI_pV, cfg);
    SymMatrix aV_bI = mat_scale(a, V) - mat_scale(b, SymMatrix::identity(n));
    return normalized(mat_mul(aV_bI, W));
}

PulledBackStructure pullback_structure(const BihamiltonianStructure& b, const VariableChange& vc,
                                       const ZeroTestConfig& cfg, Report& report) {
    const size_t n = b.dim();
    PulledBackStructure out{b.metric.g, Christoffel(n), std::nullopt};

    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l) {
                std::vector<Expr> terms;
                for (size_t j = 0; j < n; ++j)
                    terms.push_back(mul(b.gamma.at(k, i, j), vc.W.at(j, l)));
                out.gammabar.set(k, i, l, rational_normalize(add(std::move(terms))));
            }

    // Gamma^k_{ij} = Gammabar^k_{il} Q^l_j
    std::vector<std::pair<std::string, Expr>> lemma1;
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                std::vector<Expr> terms{b.gamma.at(k, i, j)};
                for (size_t l = 0; l < n; ++l)
                    terms.push_back(neg(mul(out.gammabar.at(k, i, l), vc.Q.at(l, j))));
                lemma1.emplace_back("Gamma[" + std::to_string(k + 1) + "," + std::to_string(i + 1) +
                                        "," + std::to_string(j + 1) + "]",
                                    add(std::move(terms)));
            }
    check_zero(report, cfg, "lemma1", lemma1);

    // Rbar_{mlk}^s = R_{ijk}^s W^i_m W^j_l must vanish
    Curvature r = curvature(b.coords, b.gamma);
    std::vector<std::pair<std::string, Expr>> lemma2;
    for (size_t m = 0; m < n; ++m)
        for (size_t l = 0; l < n; ++l)
            for (size_t k = 0; k < n; ++k)
                for (size_t s = 0; s < n; ++s) {
                    std::vector<Expr> terms;
                    for (size_t i = 0; i < n; ++i)
                        for (size_t j = 0; j < n; ++j)
                            terms.push_back(
                                mul({r.at(i, j, k, s), vc.W.at(i, m), vc.W.at(j, l)}));
                    lemma2.emplace_back("Rbar[" + std::to_string(m + 1) + "," + std::to_string(l + 1) +
                                            "," + std::to_string(k + 1) + "]^" + std::to_string(s + 1),
                                        add(std::move(terms)));
                }
    check_zero(report, cfg, "lemma2", lemma2);

    if (vc.inverse) {
        std::map<std::string, Expr> u_of_v = vc.u_of_v();
        SymMatrix gv(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                gv.set(i, j, rational_normalize(substitute(b.metric.g.at(i, j), u_of_v)));
        out.gbar_v = ContravariantMetric(Coords(vc.vcoords), gv);
        is_flat(*out.gbar_v, cfg, report, "pullback-flat-v");
    }
    return out;
}

Expr pavlov_transformed_hamiltonian(const BihamiltonianStructure& b, const Expr& h,
                                    const LinearReciprocalTransform& lr, const ZeroTestConfig& cfg,
                                    Report& report) {
    const size_t n = b.dim();
    std::vector<Expr> grad;
    for (size_t i = 0; i < n; ++i) grad.push_back(derivative(h, b.coords[i]));

    std::vector<Expr> h0_terms, grad_sq_terms, euler_terms;
    for (size_t i = 0; i < n; ++i) {
        euler_terms.push_back(mul(sym(b.coords[i]), grad[i]));
        for (size_t j = 0; j < n; ++j) {
            h0_terms.push_back(mul({num(Rational(1, 2)), b.eta_cov.at(i, j),
                                    sym(b.coords[i]), sym(b.coords[j])}));
            grad_sq_terms.push_back(mul({b.eta.at(i, j), grad[i], grad[j]}));
        }
    }
    Expr h0 = add(std::move(h0_terms));
    Expr grad_sq = add(std::move(grad_sq_terms));
    Expr euler = add(std::move(euler_terms));

    Expr first = mul(num(lr.a),
                     sub(mul(num(lr.q), h), mul({num(Rational(1, 2)), num(lr.p), grad_sq})));
    Expr second =
        mul(num(lr.b), sub(mul(num(lr.q), h0), mul(num(lr.p), sub(euler, h))));
    Expr hbar = rational_normalize(sub(first, second));

    // d_j hbar = d_i(a h - b h0) Q^i_j
    SymMatrix V = flow_from_eta(b.eta, b.coords, h);
    SymMatrix Q = mat_scale(num(lr.q), SymMatrix::identity(n)) - mat_scale(num(lr.p), V);
    Expr source = sub(mul(num(lr.a), h), mul(num(lr.b), h0));
    std::vector<std::pair<std::string, Expr>> residuals;
    for (size_t j = 0; j < n; ++j) {
        std::vector<Expr> terms{derivative(hbar, b.coords[j])};
        for (size_t i = 0; i < n; ++i)
            terms.push_back(neg(mul(derivative(source, b.coords[i]), Q.at(i, j))));
        residuals.emplace_back("component[" + std::to_string(j + 1) + "]", add(std::move(terms)));
    }
    check_zero(report, cfg, "pavlov-consistency", residuals);
    return hbar;
}

CheckStatus verify_potential(const Expr& candidate_v, const std::vector<Expr>& target_grad_u,
                             const VariableChange& vc, const ZeroTestConfig& cfg, Report& report,
                             const std::string& name) {
    const size_t n = vc.ucoords.size();
    Expr cand_u = substitute(candidate_v, vc.v_of_u());
    std::vector<std::pair<std::string, Expr>> residuals;
    for (size_t j = 0; j < n; ++j) {
        std::vector<Expr> terms{derivative(cand_u, vc.ucoords[j])};
        for (size_t i = 0; i < n; ++i)
            terms.push_back(neg(mul(target_grad_u[i], vc.Q.at(i, j))));
        residuals.emplace_back("component[" + std::to_string(j + 1) + "]", add(std::move(terms)));
    }
    return check_zero(report, cfg, name, residuals);
}

CheckStatus closedness_certificate(const Coords& coords, const Expr& density, const SymMatrix& W,
                                   const ZeroTestConfig& cfg, Report& report,
                                   const std::string& name) {
    auto [grad, hess] = derivative_tensors(density, coords.names);
    SymMatrix hw = mat_mul(hess, W);
    std::vector<std::pair<std::string, Expr>> residuals;
    for (size_t i = 0; i < W.rows(); ++i)
        for (size_t j = i + 1; j < W.cols(); ++j)
            residuals.emplace_back("HW" + idx2(i, j), sub(hw.at(i, j), hw.at(j, i)));
    if (residuals.empty())
        residuals.emplace_back("HW[1,1]", num(0)); // 1x1 is trivially symmetric
    return check_zero(report, cfg, name, residuals);
}

CheckStatus verify_theorem1(const BihamiltonianStructure& b, const VariableChange& vc,
                            const PulledBackStructure& pb, const ZeroTestConfig& cfg,
                            Report& report) {
    const size_t n = b.dim();
    PencilCurvature pc = pencil_curvature(b.eta, b.metric, cfg);
    if (!pc.eta_constant || pc.degenerate) {
        CheckItem item;
        item.name = "theorem1";
        item.status = CheckStatus::Fail;
        item.detail = pc.degenerate ? "pencil degenerate" : pc.nonconstant_entry;
        report.add(std::move(item));
        return CheckStatus::Fail;
    }

    // Rbar_lambda = R_lambda(g - lambda eta) contracted with W on both
    // lower indices, coefficient by coefficient in lambda.
    std::vector<std::pair<std::string, Expr>> residuals;
    size_t max_len = 0;
    for (const auto& c : pc.curvature_coeffs) max_len = std::max(max_len, c.size());
    for (size_t m = 0; m < n; ++m)
        for (size_t l = 0; l < n; ++l)
            for (size_t k = 0; k < n; ++k)
                for (size_t s = 0; s < n; ++s) {
                    std::string label = "Rbar[" + std::to_string(m + 1) + "," + std::to_string(l + 1) +
                                        "," + std::to_string(k + 1) + "]^" + std::to_string(s + 1);
                    for (size_t d = 0; d < max_len; ++d) {
                        std::vector<Expr> terms;
                        for (size_t i = 0; i < n; ++i)
                            for (size_t j = 0; j < n; ++j) {
                                const auto& coeffs = pc.curv(i, j, k, s);
                                if (d >= coeffs.size() || is_zero(coeffs[d])) continue;
                                terms.push_back(mul({coeffs[d], vc.W.at(i, m), vc.W.at(j, l)}));
                            }
                        if (terms.empty()) continue;
                        residuals.emplace_back(label + " lambda^" + std::to_string(d),
                                               add(std::move(terms)));
                    }
                }
    CheckStatus st = check_zero(report, cfg, "theorem1", residuals);

    if (pb.gbar_v) {
        FlatPencilResult direct = check_flat_pencil(b.eta, *pb.gbar_v, cfg, report, "flat-pencil-v");
        if (direct.status == CheckStatus::Fail) return CheckStatus::Fail;
        if (direct.status == CheckStatus::Inconclusive && st == CheckStatus::Pass)
            st = CheckStatus::Inconclusive;
    }
    return st;
}

namespace {

// J1bar flow matrix in u-parametrization from a target gradient T:
// M^i_j = eta^{ik} W^m_j d_m T_k.
SymMatrix j1bar_flow(const BihamiltonianStructure& b, const VariableChange& vc,
                     const std::vector<Expr>& target) {
    const size_t n = b.dim();
    SymMatrix out(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::vector<Expr> terms;
            for (size_t k = 0; k < n; ++k)
                for (size_t m = 0; m < n; ++m)
                    terms.push_back(
                        mul({b.eta.at(i, k), vc.W.at(m, j), derivative(target[k], b.coords[m])}));
            out.set(i, j, add(std::move(terms)));
        }
    return out;
}

// J2bar flow matrix in u-parametrization:
// M^i_j = g^{ik} W^m_j d_m T_k + Gamma^{ik}_m W^m_j T_k.
SymMatrix j2bar_flow(const BihamiltonianStructure& b, const VariableChange& vc,
                     const std::vector<Expr>& target) {
    const size_t n = b.dim();
    SymMatrix out(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::vector<Expr> terms;
            for (size_t k = 0; k < n; ++k)
                for (size_t m = 0; m < n; ++m) {
                    terms.push_back(mul({b.metric.g.at(i, k), vc.W.at(m, j),
                                         derivative(target[k], b.coords[m])}));
                    terms.push_back(mul({b.contra.at(i, k, m), vc.W.at(m, j), target[k]}));
                }
            out.set(i, j, add(std::move(terms)));
        }
    return out;
}

std::vector<Expr> gradient_of(const Expr& e, const Coords& coords) {
    std::vector<Expr> g;
    for (const auto& c : coords.names) g.push_back(derivative(e, c));
    return g;
}

// gradient of a v-symbol candidate, substituted back to u-parametrization
std::vector<Expr> candidate_gradient_u(const Expr& cand, const VariableChange& vc) {
    std::vector<Expr> out;
    auto map = vc.v_of_u();
    for (const auto& vn : vc.vcoords) out.push_back(substitute(derivative(cand, vn), map));
    return out;
}

} // namespace

CheckStatus verify_theorem2_3(const BihamiltonianStructure& b, const VariableChange& vc,
                              const LinearReciprocalTransform& lr, const Expr& h, const Expr& f,
                              const Expr& h0, const std::optional<Expr>& f0,
                              const std::vector<std::pair<Expr, Expr>>& extra_densities,
                              const TransformedFlows& flows, const PulledBackStructure& pb,
                              const Expr& pavlov_hbar_u, const TheoremCandidates& cands,
                              const ZeroTestConfig& cfg, Report& report) {
    std::vector<CheckStatus> statuses;

    // --- theorem 2: the s-flow ---
    std::vector<Expr> t_h = gradient_of(sub(mul(num(lr.a), h), mul(num(lr.b), h0)), b.coords);
    std::vector<std::pair<std::string, Expr>> residuals =
        matrix_residuals("J1", j1bar_flow(b, vc, t_h) - flows.s_flow);

    std::optional<std::vector<Expr>> t_f;
    if (f0)
        t_f = gradient_of(sub(mul(num(lr.a), f), mul(num(lr.b), *f0)), b.coords);
    else if (cands.fbar)
        t_f = candidate_gradient_u(*cands.fbar, vc);
    if (t_f) {
        auto more = matrix_residuals("J2", j2bar_flow(b, vc, *t_f) - flows.s_flow);
        residuals.insert(residuals.end(), more.begin(), more.end());
    }
    statuses.push_back(check_zero(report, cfg, "theorem2", residuals));
    if (!t_f)
        add_skipped(report, "theorem2-fbar", "no f0 data and no fbar candidate supplied");

    // --- theorem 3: each commuting flow ---
    for (size_t idx3 = 0; idx3 < extra_densities.size(); ++idx3) {
        const auto& [h1, f1] = extra_densities[idx3];
        std::string name = idx3 == 0 ? "theorem3" : "theorem3-" + std::to_string(idx3 + 1);
        std::vector<Expr> t1 = gradient_of(mul(num(lr.jacobian_det()), h1), b.coords);
        std::vector<Expr> t1f = gradient_of(mul(num(lr.jacobian_det()), f1), b.coords);
        auto res = matrix_residuals("J1", j1bar_flow(b, vc, t1) - flows.t1_flows[idx3]);
        auto more = matrix_residuals("J2", j2bar_flow(b, vc, t1f) - flows.t1_flows[idx3]);
        res.insert(res.end(), more.begin(), more.end());
        statuses.push_back(check_zero(report, cfg, name, res));
    }

    // --- direct re-verification in v-coordinates ---
    if (vc.inverse && pb.gbar_v) {
        auto u_of_v = vc.u_of_v();
        Coords vcoords(vc.vcoords);
        BihamiltonianStructure bv =
            BihamiltonianStructure::build(vcoords, b.eta, pb.gbar_v->g, cfg);

        auto to_v = [&](const SymMatrix& m) {
            return m.map([&](const Expr& e) { return rational_normalize(substitute(e, u_of_v)); });
        };
        SymMatrix s_flow_v = to_v(flows.s_flow);

        Expr hbar_v = cands.hbar ? *cands.hbar
                                 : rational_normalize(substitute(pavlov_hbar_u, u_of_v));
        auto res_v = matrix_residuals("J1", flow_from_eta(b.eta, vcoords, hbar_v) - s_flow_v);
        if (cands.fbar) {
            auto more =
                matrix_residuals("J2", flow_from_g(bv, *cands.fbar, cfg) - s_flow_v);
            res_v.insert(res_v.end(), more.begin(), more.end());
        }
        statuses.push_back(check_zero(report, cfg, "theorem2-v", res_v));

        for (size_t idx3 = 0; idx3 < extra_densities.size(); ++idx3) {
            std::string name = idx3 == 0 ? "theorem3-v" : "theorem3-v-" + std::to_string(idx3 + 1);
            SymMatrix t1_flow_v = to_v(flows.t1_flows[idx3]);
            std::vector<std::pair<std::string, Expr>> res3;
            bool any = false;
            if (idx3 < cands.hbar1.size() && cands.hbar1[idx3]) {
                auto r1 = matrix_residuals(
                    "J1", flow_from_eta(b.eta, vcoords, *cands.hbar1[idx3]) - t1_flow_v);
                res3.insert(res3.end(), r1.begin(), r1.end());
                any = true;
            }
            if (idx3 < cands.fbar1.size() && cands.fbar1[idx3]) {
                auto r2 =
                    matrix_residuals("J2", flow_from_g(bv, *cands.fbar1[idx3], cfg) - t1_flow_v);
                res3.insert(res3.end(), r2.begin(), r2.end());
                any = true;
            }
            if (any)
                statuses.push_back(check_zero(report, cfg, name, res3));
            else
                add_skipped(report, name, "no transformed candidates for this flow");
        }
    }

    for (CheckStatus s : statuses)
        if (s == CheckStatus::Fail) return CheckStatus::Fail;
    for (CheckStatus s : statuses)
        if (s == CheckStatus::Inconclusive) return CheckStatus::Inconclusive;
    return CheckStatus::Pass;
}

} // namespace biham
