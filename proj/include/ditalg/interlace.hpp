// Ideals of A, the graded ideal J they generate, and the interlacing,
// balance and triangularity certificates; quotients and differential lifts.
//
// Membership is decided inside truncated graded pieces: words up to
// `Caps::word_length` arrows and decorations up to `Caps::deco`. A positive
// answer is exact; a negative one is exact whenever the piece is finite
// (trivial interior points, directed bigraph, cap at least the path length).
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ditalg/dit.hpp"
#include "ditalg/matrix.hpp"

namespace ditalg {

struct Caps {
    int word_length = 6;
    int deco = 2;
};

// Linear span of tensor elements, with membership and canonical reduction.
class ElementSpan {
public:
    ElementSpan(const Field& f, const std::vector<TensorElement>& gens);
    bool contains(const TensorElement& x) const;
    // Representative of x modulo the span: pivots are taken at the largest
    // words, so the remainder avoids them.
    TensorElement reduce(const TensorElement& x) const;
    std::size_t dim() const { return rank_; }
    const std::vector<Word>& words() const { return words_; }

private:
    Field F_;
    std::vector<Word> words_;  // descending
    std::map<Word, std::size_t> index_;
    Matrix echelon_;  // rows: reduced basis vectors over words_
    std::vector<std::size_t> pivot_col_;
    std::size_t rank_ = 0;
};

// Spanning set of e_j J e_i in the given degree, where J is the two-sided
// ideal generated by gens (and their differentials when with_delta is set).
std::vector<TensorElement> ideal_piece(const Dit& d, const std::vector<TensorElement>& gens, int i, int j,
                                       int degree, bool with_delta, const Caps& caps);

struct GeneratedIdeal {
    std::vector<TensorElement> I;    // e_j I e_i
    std::vector<TensorElement> I_V;  // e_j (IV + δ(I) + VI) e_i
};
GeneratedIdeal generated_ideal(const Dit& d, int i, int j, const Caps& caps);

struct Certificate {
    bool ok = false;
    std::string detail;  // witness on success, first failure otherwise
};

Certificate check_directed_cert(const Dit& d);
Certificate check_balanced(const Dit& d, const Caps& caps = {});
// Uses the supplied filtration, or builds the pair-height one for directed
// bigraphs.
Certificate check_triangular_ideal(const Dit& d, const Caps& caps = {});
Certificate check_interlaced(const Dit& d, const Caps& caps = {});
// Generator levels: a solid arrow sits one above the solid arrows in its
// differential, a dashed one above the dashed arrows in its differential.
Certificate check_triangular_layer(const Dit& d);
std::optional<std::vector<int>> generator_levels(const Dit& d);

struct Certificates {
    Certificate directed, triangular_layer, triangular_ideal, balanced, interlaced;
    bool roiter() const { return triangular_layer.ok && triangular_ideal.ok && interlaced.ok; }
};
Certificates certify(const Dit& d, const Caps& caps = {});

// A/J in degrees 0 and 1, piece by piece: coordinates of each word of
// e_j T e_i modulo J.
class QuotientPresentation {
public:
    QuotientPresentation(const Dit& d, const Caps& caps);
    struct Piece {
        std::vector<Word> words;
        Matrix projection;  // quotient dim x words
        std::map<Word, std::size_t> index;
    };
    const Piece& piece(int i, int j, int degree) const;
    // Coordinates in the quotient piece of an element of e_j T e_i.
    Matrix project(const TensorElement& x, int i, int j, int degree) const;
    const Dit& dit() const { return d_; }
    const Caps& caps() const { return caps_; }

private:
    const Dit& d_;
    Caps caps_;
    mutable std::map<std::tuple<int, int, int>, Piece> pieces_;
};

// Lifts differential values given on representatives of the quotient
// generators: each value is replaced by its normal form modulo the kernel
// of the projection, then balance and interlacing are certified.
Dit lift_differential(Layer layer, const std::vector<TensorElement>& ideal,
                      const std::vector<TensorElement>& delta_dot, const Caps& caps = {});

}  // namespace ditalg
