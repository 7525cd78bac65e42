// Matrices over k[x]: Smith normal form and the localization-to-free lemma.
#pragma once

#include <vector>

#include "ditalg/matrix.hpp"
#include "ditalg/scalar.hpp"

namespace ditalg {

class PolyMatrix {
public:
    PolyMatrix(Field f, std::size_t rows, std::size_t cols);
    static PolyMatrix identity(Field f, std::size_t n);
    static PolyMatrix from_rows(Field f, const std::vector<std::vector<Poly>>& rows);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    const Field& field() const { return F_; }
    Poly& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Poly& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    PolyMatrix operator*(const PolyMatrix& o) const;
    PolyMatrix operator+(const PolyMatrix& o) const;
    bool operator==(const PolyMatrix& o) const;
    PolyMatrix hstack(const PolyMatrix& o) const;
    PolyMatrix select_cols(const std::vector<std::size_t>& idx) const;
    PolyMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    PolyMatrix transpose() const;
    bool is_diagonal() const;
    // Same entries viewed in the rational function field k(x).
    Matrix over_function_field() const;
    Poly det() const;
    int max_degree() const;
    std::string to_string() const;

private:
    Field F_;
    std::size_t r_, c_;
    std::vector<Poly> a_;
};

struct SmithForm {
    PolyMatrix P, D, Q;
    PolyMatrix P_inv, Q_inv;
    std::size_t rank = 0;
    std::vector<Poly> invariant_factors() const;
};

// P * m * Q = D with D diagonal, d_i | d_{i+1}, P and Q unimodular. Pivots are
// the minimal-degree nonzero entry, ties broken in row-major order.
SmithForm smith_normal_form(const PolyMatrix& m);

// U = k[x]_g^n / image(relations).
struct ModulePresentation {
    Field field;
    std::size_t generators;
    PolyMatrix relations;  // generators x m
    Poly inverted;         // g, already invertible in the base ring
};

// Free bases after inverting h: bases[i] holds the cumulative basis of layer
// i (columns are elements of k[x]^n); layer t+1 is U itself.
struct Localization {
    Poly h;
    std::vector<PolyMatrix> bases;
    std::vector<std::size_t> ranks;
};

// filtration[i] are generator columns of U_{i+1}, ascending.
Localization localize_to_free(const ModulePresentation& u, const std::vector<PolyMatrix>& filtration);

// Columns spanning the kernel of m over k[x].
PolyMatrix syzygies(const PolyMatrix& m);

}  // namespace ditalg
