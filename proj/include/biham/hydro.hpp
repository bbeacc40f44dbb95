#pragma once

#include <optional>

#include "biham/geometry.hpp"

namespace biham {

/// Coefficient matrix of a quasilinear flow u_t = V(u) u_x.
struct HydroFlow {
    Coords coords;
    SymMatrix V;
    std::string role; // "t", "t0", "t1", ...
};

/// Candidate bihamiltonian structure: constant first metric eta plus a
/// second metric g with its derived Levi-Civita data.
struct BihamiltonianStructure {
    Coords coords;
    SymMatrix eta;     // rational constants, symmetric, nondegenerate
    SymMatrix eta_cov; // exact inverse of eta
    ContravariantMetric metric;
    Christoffel gamma;
    ContraChristoffel contra;

    /// Validates eta exactly (rational, symmetric, invertible) and derives
    /// the connection of g. Throws std::invalid_argument / SingularMatrix.
    static BihamiltonianStructure build(Coords coords, SymMatrix eta, SymMatrix g,
                                        const ZeroTestConfig& cfg);

    size_t dim() const { return coords.size(); }
};

/// Hamiltonian density with its role in the hierarchy.
struct HamiltonianDensity {
    Expr expr;
    std::string role; // "h", "f", "h0", "f0", "h1", "f1", ...

    /// free symbols must lie in the coordinate chart
    void validate(const Coords& coords) const;
};

/// Flat-coordinate data for the second metric, used for f0.
struct TranslationData {
    std::vector<Expr> uhat; // flat coordinates of g as functions of u
    SymMatrix ghat;         // constant components of g in those coordinates
};

/// V^i_j = eta^{ik} d^2 h / du^k du^j.
SymMatrix flow_from_eta(const SymMatrix& eta, const Coords& coords, const Expr& h);

/// V^i_j = g^{ik} (f_{kj} - Gamma^m_{kj} f_m); the equivalent contraction
/// g^{ik} f_{kj} + Gamma^{ik}_j f_k is computed as well and the two are
/// cross-checked by the zero test.
SymMatrix flow_from_g(const BihamiltonianStructure& b, const Expr& f, const ZeroTestConfig& cfg);

/// Verifies J1 grad h = J2 grad f together with the symmetry identities
/// eta V^T = V eta, g V^T = V g, the covariant symmetry
/// grad_k V^i_j = grad_j V^i_k, and Gamma^i_{jl} V^l_k = Gamma^i_{kl} V^l_j.
/// Appends items "biham-consistency", "eta-symmetry", "g-symmetry",
/// "covariant-symmetry", "y3-contraction" (with `suffix` appended).
CheckStatus check_bihamiltonian(const BihamiltonianStructure& b, const Expr& h, const Expr& f,
                                const ZeroTestConfig& cfg, Report& report,
                                const std::string& suffix = "");

/// Commutativity A V = V A.
CheckStatus check_commuting(const HydroFlow& v, const HydroFlow& a, const ZeroTestConfig& cfg,
                            Report& report, const std::string& name = "commuting");

struct TranslationHamiltonians {
    Expr h0;
    std::optional<Expr> f0;
};

/// h0 = eta_{ij} u^i u^j / 2 (always); f0 = ghat_{ij} uhat^i uhat^j / 2
/// when flat coordinates are supplied. Verifies that the pushforward of g
/// under uhat is the constant ghat and that both flows equal the identity.
TranslationHamiltonians translation_hamiltonians(const BihamiltonianStructure& b,
                                                 const std::optional<TranslationData>& td,
                                                 const ZeroTestConfig& cfg, Report& report);

/// Conservation-law residual (da/du^i) V^i_j - db/du^j.
CheckStatus check_conservation_law(const Coords& coords, const SymMatrix& V, const Expr& a,
                                   const Expr& b, const ZeroTestConfig& cfg, Report& report,
                                   const std::string& name = "conservation-law");

/// Semisimplicity: the discriminant of det(g - lambda eta) must be
/// certified nonzero. Degree 1 passes vacuously.
CheckStatus check_semisimple(const BihamiltonianStructure& b, const ZeroTestConfig& cfg,
                             Report& report, const std::string& name = "semisimple");

} // namespace biham
