#pragma once

#include "biham/hydro.hpp"

namespace biham {

/// Constants of the change of independent variables y = a x + b t,
/// s = p x + q t.
struct LinearReciprocalTransform {
    Rational a, b, p, q;

    LinearReciprocalTransform(Rational a_, Rational b_, Rational p_, Rational q_);
    Rational jacobian_det() const { return a * q - b * p; }
    bool is_identity() const;
};

/// Change of dependent variables v = eta grad(q h0 - p h) together with
/// its Jacobian Q = dv/du, the inverse W, and an optional user-supplied
/// inverse map u(v).
struct VariableChange {
    Coords ucoords;
    std::vector<std::string> vcoords;
    std::vector<Expr> v;                       // v^i as functions of u
    SymMatrix Q;
    SymMatrix W;
    std::optional<std::vector<Expr>> inverse;  // u^i as functions of v

    /// Substitution map v-symbol -> v(u).
    std::map<std::string, Expr> v_of_u() const;
    /// Substitution map u-symbol -> u(v); requires `inverse`.
    std::map<std::string, Expr> u_of_v() const;
};

/// Builds the new dependent variables. Checks "jacobian-consistency"
/// (dv/du = qI - pV), "eta-transport" / "g-transport"
/// (eta Q^T = Q eta, g Q^T = Q g), and "inverse-consistency" when an
/// inverse map is supplied. Throws SingularMatrix when Q is degenerate.
VariableChange new_dependent_variables(const BihamiltonianStructure& b, const Expr& h,
                                       const LinearReciprocalTransform& lr,
                                       std::vector<std::string> vnames,
                                       std::optional<std::vector<Expr>> inverse_map,
                                       const ZeroTestConfig& cfg, Report& report);

/// s-flow (aV - bI) W, t0-flow (aq - bp) W, and one t1-flow
/// (aq - bp) A W per extra flow, all in u-parametrization.
struct TransformedFlows {
    SymMatrix s_flow;
    SymMatrix t0_flow;
    std::vector<SymMatrix> t1_flows;
};

TransformedFlows transform_flows(const SymMatrix& V, const std::vector<SymMatrix>& extra_flows,
                                 const LinearReciprocalTransform& lr, const SymMatrix& W,
                                 const ZeroTestConfig& cfg, Report& report);

/// Reciprocal transformation with function coefficients: checks the two
/// conservation laws and a q - p b != 0, then returns
/// (aV - bI)(qI - pV)^{-1}. No Hamiltonian claims attach to the result.
SymMatrix general_reciprocal_flow(const Coords& coords, const SymMatrix& V, const Expr& a,
                                  const Expr& b, const Expr& p, const Expr& q,
                                  const ZeroTestConfig& cfg, Report& report);

/// Pulled-back second structure in u-parametrization:
/// Gammabar^k_{il} = Gamma^k_{ij} W^j_l, with the curvature contraction
/// Rbar_{mlk}^s = R_{ijk}^s W^i_m W^j_l zero-tested ("lemma2") and the
/// transport identity Gamma = Gammabar Q zero-tested ("lemma1"). When the
/// inverse map is available the explicit gbar(v) is produced and
/// re-checked flat ("pullback-flat-v").
struct PulledBackStructure {
    SymMatrix gbar_u;
    Christoffel gammabar;
    std::optional<ContravariantMetric> gbar_v;
};

PulledBackStructure pullback_structure(const BihamiltonianStructure& b, const VariableChange& vc,
                                       const ZeroTestConfig& cfg, Report& report);

/// Closed-form transformed Hamiltonian density
/// hbar = a (q h - p eta^{ij} h_i h_j / 2) - b (q h0 - p (u^i h_i - h))
/// as a function of u; the gradient relation
/// d_j hbar = d_i(a h - b h0) Q^i_j is zero-tested ("pavlov-consistency").
Expr pavlov_transformed_hamiltonian(const BihamiltonianStructure& b, const Expr& h,
                                    const LinearReciprocalTransform& lr, const ZeroTestConfig& cfg,
                                    Report& report);

/// Verifies that a candidate potential in the v-symbols has the
/// role-appropriate gradient: d_{u^j} [cand(v(u))] = T_i Q^i_j for the
/// supplied target gradient T (u-parametrized).
CheckStatus verify_potential(const Expr& candidate_v, const std::vector<Expr>& target_grad_u,
                             const VariableChange& vc, const ZeroTestConfig& cfg, Report& report,
                             const std::string& name);

/// Certifies existence of a transformed potential: Hess(density) W must
/// be symmetric. A pass certifies existence without construction.
CheckStatus closedness_certificate(const Coords& coords, const Expr& density, const SymMatrix& W,
                                   const ZeroTestConfig& cfg, Report& report,
                                   const std::string& name);

/// Theorem 1: the transformed pencil is flat. Runs the curvature of
/// g - lambda*eta contracted with W in u-parametrization ("theorem1"),
/// and when the inverse map is available re-runs the direct flat-pencil
/// check on gbar(v) in v-coordinates ("flat-pencil-v").
CheckStatus verify_theorem1(const BihamiltonianStructure& b, const VariableChange& vc,
                            const PulledBackStructure& pb, const ZeroTestConfig& cfg,
                            Report& report);

/// Candidate potentials for the transformed systems, all in v-symbols.
struct TheoremCandidates {
    std::optional<Expr> hbar;
    std::optional<Expr> fbar;
    std::vector<std::optional<Expr>> hbar1; // per extra flow
    std::vector<std::optional<Expr>> fbar1;
};

/// Theorems 2 and 3: the transformed s-flow is J1bar grad hbar and
/// J2bar grad fbar ("theorem2"), and each transformed extra flow is
/// J1bar grad hbar1 and J2bar grad fbar1 ("theorem3", "theorem3-2", ...).
/// With an inverse map the same identities are re-verified directly in
/// v-coordinates ("theorem2-v", "theorem3-v").
CheckStatus verify_theorem2_3(const BihamiltonianStructure& b, const VariableChange& vc,
                              const LinearReciprocalTransform& lr, const Expr& h, const Expr& f,
                              const Expr& h0, const std::optional<Expr>& f0,
                              const std::vector<std::pair<Expr, Expr>>& extra_densities,
                              const TransformedFlows& flows, const PulledBackStructure& pb,
                              const Expr& pavlov_hbar_u, const TheoremCandidates& cands,
                              const ZeroTestConfig& cfg, Report& report);

} // namespace biham
