// The category (A, I)-Mod at finite dimension.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ditalg/dit.hpp"
#include "ditalg/interlace.hpp"
#include "ditalg/matrix.hpp"

namespace ditalg {

// Spaces per point, the action of x at rational points, and one matrix per
// solid arrow (dashed arrows carry empty placeholders).
struct Rep {
    Field field;
    std::vector<std::size_t> dims;
    std::vector<Matrix> X;
    std::vector<Matrix> maps;

    std::size_t total_dim() const;
    bool operator==(const Rep& o) const;
    bool operator!=(const Rep& o) const { return !(*this == o); }
};

Rep zero_rep(const Dit& d, const Field& f, std::vector<std::size_t> dims);
// One-dimensional module at a point; the rational case uses x -> lambda.
Rep simple_rep(const Dit& d, int point, const Scalar& lambda = Scalar(0));
Rep direct_sum(const Rep& a, const Rep& b);
// The module with entries specialized x -> lambda (entries in k(x)).
Rep specialize(const Rep& m, const Field& base, const Scalar& lambda);

Matrix act_deco(const Dit& d, const Rep& m, int point, const Deco& c);
// Degree-0 word acting from m_src to m_tgt.
Matrix act_word(const Dit& d, const Rep& m, const Word& w);
// Action of a degree-0 element between points i and j.
Matrix act(const Dit& d, const Rep& m, const TensorElement& e, int i, int j);

// Checks sizes, admissibility of X at rational points and I·M = 0.
void validate_rep(const Dit& d, const Rep& m);
bool is_valid_rep(const Dit& d, const Rep& m, std::string* why = nullptr);

// (f0, f1): f0 per point, f1 per arrow (empty at solid arrows).
struct Morphism {
    std::vector<Matrix> f0;
    std::vector<Matrix> f1;
    bool operator==(const Morphism& o) const;
    bool operator!=(const Morphism& o) const { return !(*this == o); }
};

Morphism identity_morphism(const Dit& d, const Rep& m);
Morphism zero_morphism(const Dit& d, const Rep& m, const Rep& n);
Morphism operator+(const Morphism& a, const Morphism& b);
Morphism scale(const Morphism& a, const Scalar& s);
Morphism direct_sum(const Morphism& a, const Morphism& b);

// f1 extended to a degree-1 element of e_j T e_i: L v R ↦ N(L) f1(v) M(R).
Matrix eval_f1(const Dit& d, const Rep& m, const Rep& n, const Morphism& f, const TensorElement& v, int i, int j);
// (g1 * f1) on a degree-2 element: L v' Mid v R ↦ L(L) g1(v') N(Mid) f1(v) M(R).
Matrix eval_star(const Dit& d, const Rep& m, const Rep& n, const Rep& l, const Morphism& g, const Morphism& f,
                 const TensorElement& w, int i, int j);

// Membership in U(M, N): commuting with x, and the condition on solid arrows.
bool is_morphism(const Dit& d, const Rep& m, const Rep& n, const Morphism& f);

std::vector<Morphism> hom(const Dit& d, const Rep& m, const Rep& n);
std::size_t hom_dim(const Dit& d, const Rep& m, const Rep& n);

// g ∘ f for f: M -> N, g: N -> L.
Morphism compose(const Dit& d, const Rep& m, const Rep& n, const Rep& l, const Morphism& g, const Morphism& f);

bool f0_bijective(const Morphism& f);
// Inverse of f: M -> N when f0 is bijective; nullopt otherwise.
std::optional<Morphism> inverse(const Dit& d, const Rep& m, const Rep& n, const Morphism& f);

// The module M' for which (f0, f1): M' -> M is an isomorphism (f0 bijective).
Rep roiter_transport(const Dit& d, const Rep& m, const std::vector<Matrix>& f0, const std::vector<Matrix>& f1);

// Coordinates of morphisms: f0 blocks then f1 blocks, column-major.
Matrix flatten(const Morphism& f, const Field& F);

// Endomorphism algebra with its Jacobson radical.
class EndAlgebra {
public:
    EndAlgebra(const Dit& d, const Rep& m);
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Morphism>& basis() const { return basis_; }
    Morphism element(const Matrix& coords) const;
    Matrix coords(const Morphism& f) const;
    Matrix left_mult(const Matrix& a) const;  // columns: a * b_k
    Matrix one() const;
    // Columns spanning J(End M) in coordinates.
    const Matrix& radical() const { return radical_; }
    bool in_radical(const Matrix& a) const;

private:
    void compute_radical();
    const Dit& d_;
    Rep m_;
    std::vector<Morphism> basis_;
    std::vector<Matrix> left_;  // left multiplication by each basis element
    std::optional<SpanCoordinates> span_;
    Matrix radical_;
};

struct IdempotentSearch {
    std::optional<Matrix> idempotent;  // nontrivial, in coordinates
    bool local = false;                // certified no nontrivial idempotent
};
IdempotentSearch find_idempotent(const EndAlgebra& e, std::uint64_t seed);

struct Split {
    Rep m1, m2;
    Morphism h;  // M1 ⊕ M2 -> M
};
Split split_idempotent(const Dit& d, const Rep& m, const Morphism& e);

struct Decomposition {
    std::vector<Rep> summands;
    Morphism iso;  // ⊕ summands -> M
};
Decomposition decompose(const Dit& d, const Rep& m, std::uint64_t seed = 1);
bool is_indecomposable(const Dit& d, const Rep& m, std::uint64_t seed = 1);

bool iso_test(const Dit& d, const Rep& m, const Rep& n, std::uint64_t seed = 1);

// Hom dimension computed on the quotient ditalgebra A/J (trivial points,
// directed bigraphs): f1 ranges over bimodule maps on V/(IV + δ(I) + VI).
std::size_t hom_dim_quotient(const QuotientPresentation& q, const Rep& m, const Rep& n);

}  // namespace ditalg
