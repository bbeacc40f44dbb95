#pragma once

#include "biham/matrix.hpp"
#include "biham/report.hpp"

namespace biham {

/// Ordered coordinate names, pairwise distinct, n <= 4.
struct Coords {
    std::vector<std::string> names;

    explicit Coords(std::vector<std::string> n);
    size_t size() const { return names.size(); }
    const std::string& operator[](size_t i) const { return names[i]; }
};

/// Contravariant metric g^{ij}(u) with its coordinate chart.
struct ContravariantMetric {
    Coords coords;
    SymMatrix g;

    ContravariantMetric(Coords c, SymMatrix m);
    size_t dim() const { return coords.size(); }
};

/// Levi-Civita symbols Gamma^k_{ij}, symmetric in the lower pair.
class Christoffel {
public:
    explicit Christoffel(size_t n) : n_(n), v_(n * n * n, num(0)) {}
    size_t dim() const { return n_; }
    const Expr& at(size_t k, size_t i, size_t j) const { return v_[(k * n_ + i) * n_ + j]; }
    void set(size_t k, size_t i, size_t j, Expr e) { v_[(k * n_ + i) * n_ + j] = std::move(e); }

private:
    size_t n_;
    std::vector<Expr> v_;
};

/// Contravariant components Gamma^{ij}_k = -g^{is} Gamma^j_{sk}.
class ContraChristoffel {
public:
    explicit ContraChristoffel(size_t n) : n_(n), v_(n * n * n, num(0)) {}
    size_t dim() const { return n_; }
    const Expr& at(size_t i, size_t j, size_t k) const { return v_[(i * n_ + j) * n_ + k]; }
    void set(size_t i, size_t j, size_t k, Expr e) { v_[(i * n_ + j) * n_ + k] = std::move(e); }

private:
    size_t n_;
    std::vector<Expr> v_;
};

/// Curvature tensor R_{ijk}^s.
class Curvature {
public:
    explicit Curvature(size_t n) : n_(n), v_(n * n * n * n, num(0)) {}
    size_t dim() const { return n_; }
    const Expr& at(size_t i, size_t j, size_t k, size_t s) const {
        return v_[((i * n_ + j) * n_ + k) * n_ + s];
    }
    void set(size_t i, size_t j, size_t k, size_t s, Expr e) {
        v_[((i * n_ + j) * n_ + k) * n_ + s] = std::move(e);
    }

private:
    size_t n_;
    std::vector<Expr> v_;
};

/// Levi-Civita connection of a contravariant metric. The covariant
/// components are obtained by symbolic inversion; pivots are certified by
/// the zero test. Throws SingularMatrix for a degenerate metric.
Christoffel christoffel_from_metric(const ContravariantMetric& m, const ZeroTestConfig& cfg);

ContraChristoffel contravariant_christoffel(const ContravariantMetric& m, const Christoffel& gamma);

/// R_{ijk}^s = d_i Gamma^s_{jk} - d_j Gamma^s_{ik}
///           + Gamma^s_{im} Gamma^m_{jk} - Gamma^s_{jm} Gamma^m_{ik}.
Curvature curvature(const Coords& coords, const Christoffel& gamma);

/// Metricity residuals d_k g_{ij} - g_{sj} Gamma^s_{ki} - g_{is} Gamma^s_{kj}
/// over the covariant components, labelled by index triple.
std::vector<std::pair<std::string, Expr>> metricity_residuals(const ContravariantMetric& m,
                                                              const Christoffel& gamma,
                                                              const ZeroTestConfig& cfg);

/// Flatness check: every curvature component identically zero.
CheckStatus is_flat(const ContravariantMetric& m, const ZeroTestConfig& cfg, Report& report,
                    const std::string& check_name = "flat");

struct FlatPencilResult {
    CheckStatus status = CheckStatus::Inconclusive;
    /// Highest lambda power with a structurally nonzero curvature
    /// numerator coefficient; -1 when everything cancels symbolically.
    int observed_degree = -1;
};

/// Curvature of the pencil g - lambda*eta and the lambda-dependence
/// residual of its contravariant connection, both as lists of
/// lambda-coefficient expressions (numerators over powers of
/// det(g - lambda*eta), exactly reduced where possible).
struct PencilCurvature {
    bool eta_constant = true;
    std::string nonconstant_entry;
    bool degenerate = false;
    size_t n = 0;
    std::vector<std::vector<Expr>> curvature_coeffs;  // ((i*n+j)*n+k)*n+s
    std::vector<std::vector<Expr>> connection_coeffs; // (i*n+j)*n+k
    int observed_degree = -1;

    const std::vector<Expr>& curv(size_t i, size_t j, size_t k, size_t s) const {
        return curvature_coeffs[((i * n + j) * n + k) * n + s];
    }
};

PencilCurvature pencil_curvature(const SymMatrix& eta, const ContravariantMetric& g,
                                 const ZeroTestConfig& cfg);

/// Certifies that (eta, g) is a flat pencil: with a fresh symbol l,
/// every lambda-coefficient of every curvature component of g - l*eta is
/// identically zero, and the contravariant connection of g - l*eta is
/// lambda-independent and equal to that of g. Appends one check item
/// under `check_name` (plus `<check_name>-connection`).
FlatPencilResult check_flat_pencil(const SymMatrix& eta, const ContravariantMetric& g,
                                   const ZeroTestConfig& cfg, Report& report,
                                   const std::string& check_name = "flat-pencil");

/// First-order Hamiltonian operator of hydrodynamic type,
/// J^{ij} = g^{ij} d_x + Gamma^{ij}_k u^k_x.
struct HydroHamOp {
    ContravariantMetric metric;
    ContraChristoffel contra;

    /// Flow matrix of J grad(h): g^{ik} h_{kj} + Gamma^{ik}_j h_k.
    SymMatrix apply(const Expr& density) const;
};

/// Delta tensors of a pencil in eta-flat coordinates:
/// Delta^{ijk} = eta^{is} Gamma^{jk}_s and Delta^{ij}_k = eta_{ks} Delta^{sij}.
struct PencilTensors {
    size_t n = 0;
    std::vector<Expr> up;  // Delta^{ijk}
    std::vector<Expr> low; // Delta^{ij}_k

    const Expr& delta_up(size_t i, size_t j, size_t k) const { return up[(i * n + j) * n + k]; }
    const Expr& delta_low(size_t i, size_t j, size_t k) const { return low[(i * n + j) * n + k]; }
};

PencilTensors pencil_tensors(const SymMatrix& eta, const ContravariantMetric& g,
                             const ZeroTestConfig& cfg);

/// Candidate data for Dubrovin's flat-pencil conditions.
struct DubrovinCertificate {
    std::vector<Expr> xi; // vector field components
    SymMatrix c;          // constant symmetric tensor
};

/// Verifies the four identity families (with d^i = eta^{ik} d_k):
///   Delta^{ijk} = d^i d^j xi^k = Delta^{jik}
///   g^{ij} = d^i xi^j + d^j xi^i + c^{ij}
///   Delta_s^{ij} Delta_l^{sk} = Delta_s^{ik} Delta_l^{sj}
///   (g^{im} eta^{jl} - eta^{im} g^{jl}) d_m d_l xi^k = 0
CheckStatus check_dubrovin_conditions(const SymMatrix& eta, const ContravariantMetric& g,
                                      const DubrovinCertificate& cert, const ZeroTestConfig& cfg,
                                      Report& report, const std::string& check_name = "dubrovin");

/// Exact inverse of a rational constant matrix (used for eta).
SymMatrix rational_inverse(const SymMatrix& m);

/// Picks a symbol name not colliding with the given names.
std::string fresh_symbol(const std::vector<std::string>& taken, const std::string& base);

} // namespace biham
