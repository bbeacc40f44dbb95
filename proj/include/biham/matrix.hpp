#pragma once

#include <functional>
#include <vector>

#include "biham/zerotest.hpp"

namespace biham {

/// Dense matrix of expressions, row-major, dimensions capped at 8.
class SymMatrix {
public:
    SymMatrix() = default;
    SymMatrix(size_t rows, size_t cols);
    static SymMatrix identity(size_t n);
    static SymMatrix from_rows(std::vector<std::vector<Expr>> rows);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    const Expr& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }
    void set(size_t i, size_t j, Expr e) { data_[i * cols_ + j] = std::move(e); }

    SymMatrix transpose() const;
    SymMatrix map(const std::function<Expr(const Expr&)>& f) const;

    friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
    friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);

    bool all_rational() const;

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<Expr> data_;
};

SymMatrix mat_mul(const SymMatrix& a, const SymMatrix& b);
SymMatrix mat_scale(const Expr& s, const SymMatrix& a);

/// Determinant by cofactor expansion; square matrices up to 8x8.
Expr mat_det(const SymMatrix& a);

struct SingularMatrix : std::runtime_error {
    Expr det;
    explicit SingularMatrix(Expr d)
        : std::runtime_error("singular matrix, det = " + render(d)), det(std::move(d)) {}
};

/// Inverse by Gauss-Jordan elimination with symbolic pivots; each pivot is
/// certified nonvanishing by the zero test. Square matrices up to 4x4.
/// Throws SingularMatrix when det is identically zero.
SymMatrix mat_inverse(const SymMatrix& a, const ZeroTestConfig& cfg);

/// Gradient and Hessian of a scalar expression over ordered coordinates.
/// The Hessian is built from the upper triangle, so it is symmetric by
/// construction.
std::pair<std::vector<Expr>, SymMatrix> derivative_tensors(const Expr& e,
                                                           const std::vector<std::string>& coords);

} // namespace biham
