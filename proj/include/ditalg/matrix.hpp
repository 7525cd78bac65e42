// Dense exact matrices over a Field.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ditalg/scalar.hpp"

namespace ditalg {

class Matrix {
public:
    Matrix(Field f, std::size_t rows, std::size_t cols);
    static Matrix identity(Field f, std::size_t n);
    static Matrix from_rows(Field f, const std::vector<std::vector<Scalar>>& rows);
    static Matrix column(Field f, const std::vector<Scalar>& v);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    const Field& field() const { return F_; }
    bool empty() const { return r_ == 0 || c_ == 0; }

    Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator*(const Scalar& s) const;
    Matrix operator-() const;
    Matrix& operator+=(const Matrix& o);
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix transpose() const;
    bool is_zero() const;
    bool is_identity() const;
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
    void add_block(std::size_t r0, std::size_t c0, const Matrix& b);
    Matrix hstack(const Matrix& o) const;
    Matrix vstack(const Matrix& o) const;
    Matrix col(std::size_t j) const { return block(0, j, r_, 1); }
    Matrix select_cols(const std::vector<std::size_t>& idx) const;
    // Re-expresses every entry in field g (e.g. F_p into F_p(x)).
    Matrix in_field(const Field& g) const;

    struct Rref;
    Rref rref() const;
    std::size_t rank() const;
    // Columns form a basis of the right kernel {v : A v = 0}.
    Matrix kernel() const;
    // Columns form a basis of the column space.
    Matrix image() const;
    std::optional<Matrix> inverse() const;
    Scalar det() const;
    Scalar trace() const;
    Matrix pow(std::int64_t e) const;

    std::string to_string() const;

private:
    Field F_;
    std::size_t r_, c_;
    std::vector<Scalar> a_;
};

struct Matrix::Rref {
    Matrix reduced;
    std::vector<std::size_t> pivots;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);

// Solution set of A X = B: particular solution plus kernel basis of A, or
// inconsistency reported through `consistent`.
struct LinearSolution {
    bool consistent = false;
    std::optional<Matrix> particular;
    Matrix kernel;
};
LinearSolution solve_linear(const Matrix& a, const Matrix& b);

// Minimal polynomial of a square matrix (Krylov on the whole space).
Poly min_poly(const Matrix& a);
Matrix eval_poly(const Poly& p, const Matrix& a);

// Coordinates of vectors in the column space of a fixed basis.
class SpanCoordinates {
public:
    explicit SpanCoordinates(const Matrix& basis);
    // Coordinates of v (column); nullopt when v is outside the span.
    std::optional<Matrix> coords(const Matrix& v) const;
    bool contains(const Matrix& v) const { return coords(v).has_value(); }
    std::size_t dim() const { return basis_.cols(); }

private:
    Matrix basis_;
    Matrix left_;                     // row operations bringing basis to echelon form
    std::vector<std::size_t> pivots_; // pivot rows of each basis column
    std::size_t rank_;
};

}  // namespace ditalg
