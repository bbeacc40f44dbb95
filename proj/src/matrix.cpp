#include "biham/matrix.hpp"

#include <set>

#include "biham/polytools.hpp"

namespace biham {

namespace {
constexpr size_t kMaxDim = 8;
constexpr size_t kMaxInverseDim = 4;
} // namespace

SymMatrix::SymMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0 || rows > kMaxDim || cols > kMaxDim)
        throw std::invalid_argument("matrix dimensions out of range");
    data_.assign(rows * cols, num(0));
}

SymMatrix SymMatrix::identity(size_t n) {
    SymMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, num(1));
    return m;
}

SymMatrix SymMatrix::from_rows(std::vector<std::vector<Expr>> rows) {
    if (rows.empty()) throw std::invalid_argument("empty matrix");
    SymMatrix m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
        for (size_t j = 0; j < m.cols_; ++j) m.set(i, j, std::move(rows[i][j]));
    }
    return m;
}

SymMatrix SymMatrix::transpose() const {
    SymMatrix m(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) m.set(j, i, at(i, j));
    return m;
}

SymMatrix SymMatrix::map(const std::function<Expr(const Expr&)>& f) const {
    SymMatrix m(rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) m.set(i, j, f(at(i, j)));
    return m;
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("matrix shape mismatch");
    SymMatrix m(a.rows_, a.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
        for (size_t j = 0; j < a.cols_; ++j) m.set(i, j, add(a.at(i, j), b.at(i, j)));
    return m;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("matrix shape mismatch");
    SymMatrix m(a.rows_, a.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
        for (size_t j = 0; j < a.cols_; ++j) m.set(i, j, sub(a.at(i, j), b.at(i, j)));
    return m;
}

bool SymMatrix::all_rational() const {
    for (const auto& e : data_)
        if (!is_rational(e)) return false;
    return true;
}

SymMatrix mat_mul(const SymMatrix& a, const SymMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
    SymMatrix m(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) {
            std::vector<Expr> terms;
            terms.reserve(a.cols());
            for (size_t k = 0; k < a.cols(); ++k)
                terms.push_back(mul(a.at(i, k), b.at(k, j)));
            m.set(i, j, add(std::move(terms)));
        }
    return m;
}

SymMatrix mat_scale(const Expr& s, const SymMatrix& a) {
    return a.map([&s](const Expr& e) { return mul(s, e); });
}

namespace {

Expr det_rec(const SymMatrix& a, std::vector<size_t> cols, size_t row) {
    if (cols.size() == 1) return a.at(row, cols[0]);
    std::vector<Expr> terms;
    for (size_t idx = 0; idx < cols.size(); ++idx) {
        const Expr& pivot = a.at(row, cols[idx]);
        if (is_zero(pivot)) continue;
        std::vector<size_t> rest;
        rest.reserve(cols.size() - 1);
        for (size_t k = 0; k < cols.size(); ++k)
            if (k != idx) rest.push_back(cols[k]);
        Expr minor = det_rec(a, std::move(rest), row + 1);
        Expr term = mul(pivot, std::move(minor));
        terms.push_back(idx % 2 == 0 ? term : neg(term));
    }
    return add(std::move(terms));
}

} // namespace

Expr mat_det(const SymMatrix& a) {
    if (!a.square()) throw std::invalid_argument("determinant of non-square matrix");
    std::vector<size_t> cols(a.cols());
    for (size_t j = 0; j < a.cols(); ++j) cols[j] = j;
    return det_rec(a, std::move(cols), 0);
}

SymMatrix mat_inverse(const SymMatrix& a, const ZeroTestConfig& cfg) {
    if (!a.square()) throw std::invalid_argument("inverse of non-square matrix");
    const size_t n = a.rows();
    if (n > kMaxInverseDim) throw std::invalid_argument("inverse capped at 4x4");

    // Work on [A | I] and zero-test candidate pivots before dividing by them.
    std::vector<std::vector<Expr>> w(n, std::vector<Expr>(2 * n, num(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) w[i][j] = a.at(i, j);
        w[i][n + i] = num(1);
    }

    for (size_t col = 0; col < n; ++col) {
        size_t pivot_row = n;
        for (size_t r = col; r < n; ++r) {
            if (is_zero(w[r][col])) continue;
            if (is_identically_zero(w[r][col], cfg).nonzero()) {
                pivot_row = r;
                break;
            }
        }
        if (pivot_row == n) throw SingularMatrix(mat_det(a));
        std::swap(w[col], w[pivot_row]);
        Expr inv_pivot = pow(w[col][col], Rational(-1));
        for (size_t j = 0; j < 2 * n; ++j)
            w[col][j] = rational_normalize(mul(w[col][j], inv_pivot));
        for (size_t r = 0; r < n; ++r) {
            if (r == col || is_zero(w[r][col])) continue;
            Expr factor = w[r][col];
            for (size_t j = 0; j < 2 * n; ++j)
                w[r][j] = rational_normalize(sub(w[r][j], mul(factor, w[col][j])));
        }
    }

    SymMatrix inv(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv.set(i, j, w[i][n + j]);
    return inv;
}

std::pair<std::vector<Expr>, SymMatrix> derivative_tensors(const Expr& e,
                                                           const std::vector<std::string>& coords) {
    std::set<std::string> seen(coords.begin(), coords.end());
    if (seen.size() != coords.size())
        throw std::invalid_argument("coordinates must be pairwise distinct");
    std::vector<Expr> grad;
    grad.reserve(coords.size());
    for (const auto& c : coords) grad.push_back(derivative(e, c));
    SymMatrix hess(coords.size(), coords.size());
    for (size_t i = 0; i < coords.size(); ++i)
        for (size_t j = i; j < coords.size(); ++j) {
            Expr h = derivative(grad[i], coords[j]);
            hess.set(i, j, h);
            if (i != j) hess.set(j, i, h);
        }
    return {std::move(grad), std::move(hess)};
}

} // namespace biham
