#ifndef FORMALITY_LINALG_HPP
#define FORMALITY_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace formality {

using Vector = std::vector<Rational>;

// Dense exact-rational matrix, row-major. Dimensions stay at desk scale, so
// plain Gaussian elimination over normalized fractions is the whole story.
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static RationalMatrix from_columns(std::size_t ambient_dim, const std::vector<Vector>& columns) {
        RationalMatrix m(ambient_dim, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != ambient_dim)
                throw Error(ErrorCode::InvalidInput, "column length mismatch");
            for (std::size_t i = 0; i < ambient_dim; ++i) m.at(i, j) = columns[j][i];
        }
        return m;
    }

    static RationalMatrix from_rows(std::size_t cols, const std::vector<Vector>& rows) {
        RationalMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw Error(ErrorCode::InvalidInput, "row length mismatch");
            for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector column(std::size_t j) const {
        Vector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }

    bool operator==(const RationalMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    RationalMatrix operator*(const RationalMatrix& o) const {
        if (cols_ != o.rows_) throw Error(ErrorCode::InvalidInput, "matrix product shape mismatch");
        RationalMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (at(i, k) == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
            }
        return r;
    }

    RationalMatrix operator-(const RationalMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw Error(ErrorCode::InvalidInput, "matrix difference shape mismatch");
        RationalMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
        return r;
    }

    RationalMatrix operator*(const Rational& s) const {
        RationalMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
        return r;
    }

    Vector apply(const Vector& v) const {
        if (v.size() != cols_) throw Error(ErrorCode::InvalidInput, "matrix apply shape mismatch");
        Vector r(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (at(i, j) != 0 && v[j] != 0) r[i] += at(i, j) * v[j];
        return r;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (x != 0) return false;
        return true;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rational> data_;
};

struct SubspaceBasis {
    std::size_t ambient_dim = 0;
    std::vector<Vector> vectors;

    std::size_t dim() const { return vectors.size(); }
};

struct RrefResult {
    RationalMatrix matrix;
    std::vector<std::size_t> pivot_columns;
};

// Unique reduced row echelon form; pivot columns strictly increasing.
inline RrefResult rref(const RationalMatrix& m) {
    RationalMatrix a = m;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t pivot_row = row;
        while (pivot_row < a.rows() && a.at(pivot_row, col) == 0) ++pivot_row;
        if (pivot_row == a.rows()) continue;
        if (pivot_row != row)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(row, j), a.at(pivot_row, j));
        Rational inv = Rational(1) / a.at(row, col);
        for (std::size_t j = col; j < a.cols(); ++j) a.at(row, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a.at(i, col) == 0) continue;
            Rational f = a.at(i, col);
            for (std::size_t j = col; j < a.cols(); ++j) a.at(i, j) -= f * a.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(a), std::move(pivots)};
}

inline std::size_t rank(const RationalMatrix& m) { return rref(m).pivot_columns.size(); }

// Null-space basis with the standard one-free-coordinate vectors, in
// ascending order of the free column.
inline SubspaceBasis kernel_basis(const RationalMatrix& m) {
    auto [r, pivots] = rref(m);
    SubspaceBasis basis;
    basis.ambient_dim = m.cols();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        Vector v(m.cols());
        v[free_col] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r.at(i, free_col);
        basis.vectors.push_back(std::move(v));
    }
    return basis;
}

// Column-space basis: the original columns at pivot positions.
inline SubspaceBasis image_basis(const RationalMatrix& m) {
    auto pivots = rref(m).pivot_columns;
    SubspaceBasis basis;
    basis.ambient_dim = m.rows();
    for (auto p : pivots) basis.vectors.push_back(m.column(p));
    return basis;
}

// Unique solution with zero free coordinates, or absent when inconsistent.
inline std::optional<Vector> solve(const RationalMatrix& m, const Vector& target) {
    if (target.size() != m.rows()) throw Error(ErrorCode::InvalidInput, "solve: target length mismatch");
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = target[i];
    }
    auto [r, pivots] = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    Vector x(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = r.at(i, m.cols());
    return x;
}

inline bool in_span(const std::vector<Vector>& spanning, const Vector& v) {
    if (spanning.empty()) {
        for (const auto& c : v)
            if (c != 0) return false;
        return true;
    }
    return solve(RationalMatrix::from_columns(v.size(), spanning), v).has_value();
}

// First-pivot complement: among `candidates`, pick the ones whose classes
// extend span(fixed) to span(fixed + candidates). Returns candidate indices.
inline std::vector<std::size_t> complement_indices(std::size_t ambient_dim,
                                                   const std::vector<Vector>& fixed,
                                                   const std::vector<Vector>& candidates) {
    RationalMatrix m(ambient_dim, fixed.size() + candidates.size());
    for (std::size_t j = 0; j < fixed.size(); ++j)
        for (std::size_t i = 0; i < ambient_dim; ++i) m.at(i, j) = fixed[j][i];
    for (std::size_t j = 0; j < candidates.size(); ++j)
        for (std::size_t i = 0; i < ambient_dim; ++i) m.at(i, fixed.size() + j) = candidates[j][i];
    std::vector<std::size_t> chosen;
    for (auto p : rref(m).pivot_columns)
        if (p >= fixed.size()) chosen.push_back(p - fixed.size());
    return chosen;
}

// Eigenspace bases for eigenvalues q^j over the given exponents. The spaces
// must jointly exhaust the ambient space or the map is rejected.
inline std::vector<SubspaceBasis> weight_decompose(const RationalMatrix& m, const Rational& q,
                                                   const std::vector<int>& weights) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidInput, "weight_decompose: matrix not square");
    if (!is_valid_grading_scalar(q))
        throw Error(ErrorCode::InvalidInput, "weight_decompose: q must satisfy |q| not in {0,1}");
    std::size_t n = m.rows();
    std::vector<SubspaceBasis> spaces;
    std::size_t total = 0;
    for (int j : weights) {
        RationalMatrix shifted = m - RationalMatrix::identity(n) * rational_pow(q, j);
        SubspaceBasis eig = kernel_basis(shifted);
        total += eig.dim();
        spaces.push_back(std::move(eig));
    }
    if (total != n)
        throw Error(ErrorCode::NotWeightDiagonalizable,
                    "eigenspaces for the candidate weights span " + std::to_string(total) + " of " +
                        std::to_string(n) + " dimensions");
    return spaces;
}

} // namespace formality

#endif
