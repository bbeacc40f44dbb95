#include "biham/hydro.hpp"

#include <sstream>

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

} // namespace

void HamiltonianDensity::validate(const Coords& coords) const {
    for (const auto& s : free_symbols(expr)) {
        bool known = false;
        for (const auto& c : coords.names)
            if (c == s) known = true;
        if (!known)
            throw std::invalid_argument("density " + role + " uses unknown symbol " + s);
    }
}

BihamiltonianStructure BihamiltonianStructure::build(Coords coords, SymMatrix eta, SymMatrix g,
                                                     const ZeroTestConfig& cfg) {
    const size_t n = coords.size();
    if (!eta.square() || eta.rows() != n || !g.square() || g.rows() != n)
        throw std::invalid_argument("metric dimensions do not match coordinates");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (!is_rational(eta.at(i, j)))
                throw std::invalid_argument("eta must have rational constant entries");
            if (!(rat_value(eta.at(i, j)) == rat_value(eta.at(j, i))))
                throw std::invalid_argument("eta must be symmetric");
        }
    SymMatrix eta_cov = rational_inverse(eta); // throws SingularMatrix if degenerate

    ContravariantMetric metric(coords, std::move(g));
    Christoffel gamma = christoffel_from_metric(metric, cfg);
    ContraChristoffel contra = contravariant_christoffel(metric, gamma);
    return BihamiltonianStructure{std::move(coords), std::move(eta), std::move(eta_cov),
                                  std::move(metric), std::move(gamma), std::move(contra)};
}

SymMatrix flow_from_eta(const SymMatrix& eta, const Coords& coords, const Expr& h) {
    auto [grad, hess] = derivative_tensors(h, coords.names);
    return mat_mul(eta, hess);
}

SymMatrix flow_from_g(const BihamiltonianStructure& b, const Expr& f, const ZeroTestConfig& cfg) {
    const size_t n = b.dim();
    auto [grad, hess] = derivative_tensors(f, b.coords.names);

    // covariant Hessian form: g^{ik} (f_{kj} - Gamma^m_{kj} f_m)
    SymMatrix cov_hess(n, n);
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j) {
            std::vector<Expr> terms{hess.at(k, j)};
            for (size_t m = 0; m < n; ++m)
                terms.push_back(neg(mul(b.gamma.at(m, k, j), grad[m])));
            cov_hess.set(k, j, add(std::move(terms)));
        }
    SymMatrix v1 = mat_mul(b.metric.g, cov_hess);

    // contraction form through the Hamiltonian operator
    SymMatrix v2 = HydroHamOp{b.metric, b.contra}.apply(f);

    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Verdict v = is_identically_zero(sub(v1.at(i, j), v2.at(i, j)), cfg);
            if (v.nonzero())
                throw std::logic_error("second-structure flow forms disagree at entry " + idx2(i, j));
        }
    return v1.map([](const Expr& e) { return rational_normalize(e); });
}

CheckStatus check_bihamiltonian(const BihamiltonianStructure& b, const Expr& h, const Expr& f,
                                const ZeroTestConfig& cfg, Report& report,
                                const std::string& suffix) {
    const size_t n = b.dim();
    SymMatrix v_eta = flow_from_eta(b.eta, b.coords, h);
    SymMatrix v_g = flow_from_g(b, f, cfg);

    CheckStatus consistency =
        check_zero(report, cfg, "biham-consistency" + suffix, matrix_residuals("V", v_eta - v_g));

    const SymMatrix& V = v_eta;
    SymMatrix vt = V.transpose();
    CheckStatus eta_sym = check_zero(report, cfg, "eta-symmetry" + suffix,
                                     matrix_residuals("etaV", mat_mul(b.eta, vt) - mat_mul(V, b.eta)));
    CheckStatus g_sym =
        check_zero(report, cfg, "g-symmetry" + suffix,
                   matrix_residuals("gV", mat_mul(b.metric.g, vt) - mat_mul(V, b.metric.g)));

    // grad_k V^i_j = grad_j V^i_k for the Levi-Civita connection of g
    std::vector<std::pair<std::string, Expr>> cov_residuals;
    auto nabla = [&](size_t k, size_t i, size_t j) {
        std::vector<Expr> terms{derivative(V.at(i, j), b.coords[k])};
        for (size_t m = 0; m < n; ++m) {
            terms.push_back(mul(b.gamma.at(i, k, m), V.at(m, j)));
            terms.push_back(neg(mul(b.gamma.at(m, k, j), V.at(i, m))));
        }
        return add(std::move(terms));
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k)
                cov_residuals.emplace_back("nablaV[" + std::to_string(k + 1) + "," +
                                               std::to_string(i + 1) + "," + std::to_string(j + 1) + "]",
                                           sub(nabla(k, i, j), nabla(j, i, k)));
    CheckStatus cov_sym = check_zero(report, cfg, "covariant-symmetry" + suffix, cov_residuals);

    std::vector<std::pair<std::string, Expr>> y3;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                std::vector<Expr> terms;
                for (size_t l = 0; l < n; ++l) {
                    terms.push_back(mul(b.gamma.at(i, j, l), V.at(l, k)));
                    terms.push_back(neg(mul(b.gamma.at(i, k, l), V.at(l, j))));
                }
                y3.emplace_back("y3[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                                    std::to_string(k + 1) + "]",
                                add(std::move(terms)));
            }
    CheckStatus y3_st = check_zero(report, cfg, "y3-contraction" + suffix, y3);

    for (CheckStatus s : {consistency, eta_sym, g_sym, cov_sym, y3_st})
        if (s == CheckStatus::Fail) return CheckStatus::Fail;
    for (CheckStatus s : {consistency, eta_sym, g_sym, cov_sym, y3_st})
        if (s == CheckStatus::Inconclusive) return CheckStatus::Inconclusive;
    return CheckStatus::Pass;
}

CheckStatus check_commuting(const HydroFlow& v, const HydroFlow& a, const ZeroTestConfig& cfg,
                            Report& report, const std::string& name) {
    if (v.coords.names != a.coords.names)
        throw std::invalid_argument("flows live on different coordinates");
    SymMatrix commutator = mat_mul(a.V, v.V) - mat_mul(v.V, a.V);
    return check_zero(report, cfg, name, matrix_residuals("AV-VA", commutator));
}

TranslationHamiltonians translation_hamiltonians(const BihamiltonianStructure& b,
                                                 const std::optional<TranslationData>& td,
                                                 const ZeroTestConfig& cfg, Report& report) {
    const size_t n = b.dim();
    std::vector<Expr> h0_terms;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            h0_terms.push_back(mul({num(Rational(1, 2)), b.eta_cov.at(i, j),
                                    sym(b.coords[i]), sym(b.coords[j])}));
    Expr h0 = add(std::move(h0_terms));

    CheckStatus eta_flow = check_zero(
        report, cfg, "translation-eta",
        matrix_residuals("V0", flow_from_eta(b.eta, b.coords, h0) - SymMatrix::identity(n)));
    (void)eta_flow;

    TranslationHamiltonians out{h0, std::nullopt};
    if (!td) return out;

    if (td->uhat.size() != n || td->ghat.rows() != n || td->ghat.cols() != n)
        throw std::invalid_argument("flat-coordinate data has wrong dimensions");

    // pushforward (duhat^i/du^a) g^{ab} (duhat^j/du^b) must equal ghat
    SymMatrix jac(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t a = 0; a < n; ++a) jac.set(i, a, derivative(td->uhat[i], b.coords[a]));
    SymMatrix push = mat_mul(mat_mul(jac, b.metric.g), jac.transpose());
    CheckStatus push_st = check_zero(report, cfg, "translation-pushforward",
                                     matrix_residuals("push", push - td->ghat));

    SymMatrix ghat_cov = rational_inverse(td->ghat);
    std::vector<Expr> f0_terms;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            f0_terms.push_back(
                mul({num(Rational(1, 2)), ghat_cov.at(i, j), td->uhat[i], td->uhat[j]}));
    Expr f0 = rational_normalize(add(std::move(f0_terms)));

    CheckStatus g_flow =
        check_zero(report, cfg, "translation-g",
                   matrix_residuals("V0", flow_from_g(b, f0, cfg) - SymMatrix::identity(n)));
    if (push_st == CheckStatus::Pass && g_flow == CheckStatus::Pass) out.f0 = f0;
    return out;
}

CheckStatus check_conservation_law(const Coords& coords, const SymMatrix& V, const Expr& a,
                                   const Expr& b, const ZeroTestConfig& cfg, Report& report,
                                   const std::string& name) {
    const size_t n = coords.size();
    std::vector<std::pair<std::string, Expr>> residuals;
    for (size_t j = 0; j < n; ++j) {
        std::vector<Expr> terms;
        for (size_t i = 0; i < n; ++i)
            terms.push_back(mul(derivative(a, coords[i]), V.at(i, j)));
        terms.push_back(neg(derivative(b, coords[j])));
        residuals.emplace_back("component[" + std::to_string(j + 1) + "]", add(std::move(terms)));
    }
    return check_zero(report, cfg, name, residuals);
}

namespace {

// Sylvester resultant of p (degree m) and its derivative, both given by
// coefficient lists lowest-first.
Expr sylvester_resultant(const std::vector<Expr>& p, const std::vector<Expr>& dp) {
    const size_t m = p.size() - 1;
    const size_t l = dp.size() - 1;
    const size_t dim = m + l;
    SymMatrix s(dim, dim);
    for (size_t r = 0; r < l; ++r)
        for (size_t c = 0; c <= m; ++c) s.set(r, r + c, p[m - c]);
    for (size_t r = 0; r < m; ++r)
        for (size_t c = 0; c <= l; ++c) s.set(l + r, r + c, dp[l - c]);
    return mat_det(s);
}

} // namespace

CheckStatus check_semisimple(const BihamiltonianStructure& b, const ZeroTestConfig& cfg,
                             Report& report, const std::string& name) {
    const size_t n = b.dim();
    if (n == 1) {
        CheckItem item;
        item.name = name;
        item.status = CheckStatus::Pass;
        item.detail = "characteristic polynomial has degree 1, roots vacuously distinct";
        item.identity = "1";
        report.add(std::move(item));
        return CheckStatus::Pass;
    }
    std::string lam = fresh_symbol(b.coords.names, "lam");
    SymMatrix pencil = b.metric.g - mat_scale(sym(lam), b.eta);
    Expr charpoly = mat_det(pencil);
    std::vector<Expr> coeffs = poly_coeffs(charpoly, lam, static_cast<int>(n));
    if (coeffs.size() != n + 1)
        throw std::logic_error("characteristic polynomial degenerated");
    std::vector<Expr> dcoeffs;
    for (size_t i = 1; i < coeffs.size(); ++i) dcoeffs.push_back(mul(num(long(i)), coeffs[i]));
    Expr resultant = expand(sylvester_resultant(coeffs, dcoeffs));
    return check_nonzero(report, cfg, name, resultant);
}

} // namespace biham
