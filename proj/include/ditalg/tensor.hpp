// The layered tensor algebra T_R(W0 + W1): decorated words, products, and
// differentials extended by the Leibniz rule.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ditalg/bigraph.hpp"
#include "ditalg/minalg.hpp"

namespace ditalg {

class Layer {
public:
    Layer(Field f, Bigraph g);

    const Field& field() const { return F_; }
    const Bigraph& graph() const { return g_; }
    const FactorRing& ring(int point) const { return rings_[static_cast<std::size_t>(point)]; }
    int npoints() const { return static_cast<int>(g_.points.size()); }
    int narrows() const { return static_cast<int>(g_.arrows.size()); }
    const Arrow& arrow(int a) const { return g_.arrows[static_cast<std::size_t>(a)]; }
    const Point& point(int p) const { return g_.points[static_cast<std::size_t>(p)]; }
    bool dashed(int a) const { return arrow(a).dashed; }
    bool rational(int p) const { return point(p).factor.rational; }

private:
    Field F_;
    Bigraph g_;
    std::vector<FactorRing> rings_;
};

// Arrows in application order (arrows[0] acts first); decos[k] sits at the
// point before arrows[k], decos.back() at the target.
struct Word {
    int src = 0;
    std::vector<int> arrows;
    std::vector<Deco> decos{Deco{}};

    std::size_t length() const { return arrows.size(); }
    bool operator<(const Word& o) const;
    bool operator==(const Word& o) const;
};

int word_target(const Layer& L, const Word& w);
int word_degree(const Layer& L, const Word& w);

class TensorElement {
public:
    TensorElement() = default;
    static TensorElement idempotent(const Layer& L, int point);
    static TensorElement arrow(const Layer& L, int a);
    static TensorElement word(const Word& w, const Scalar& c);
    static TensorElement local(const Layer& L, int point, const LocalElem& e);

    const std::map<Word, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add_term(const Word& w, const Scalar& c);

    TensorElement operator+(const TensorElement& o) const;
    TensorElement operator-(const TensorElement& o) const;
    TensorElement operator-() const;
    TensorElement operator*(const Scalar& s) const;
    TensorElement& operator+=(const TensorElement& o);
    bool operator==(const TensorElement& o) const;
    bool operator!=(const TensorElement& o) const { return !(*this == o); }

    TensorElement component(const Layer& L, int degree) const;
    // Degree when homogeneous and nonzero.
    std::optional<int> degree(const Layer& L) const;
    // Terms running from point i to point j.
    TensorElement between(const Layer& L, int i, int j) const;
    std::string to_string(const Layer& L) const;

private:
    std::map<Word, Scalar> terms_;
};

// u * v: v acts first; non-composable words multiply to zero.
TensorElement multiply(const Layer& L, const TensorElement& u, const TensorElement& v);
TensorElement multiply(const Layer& L, const std::vector<TensorElement>& factors);

// Unique Leibniz extension of generator values (indexed by arrow; R maps to 0).
TensorElement extend_differential(const Layer& L, const std::vector<TensorElement>& delta, const TensorElement& e);

// Spanning words of e_j T e_i of the given degree. Decorations at rational
// points range over r, n <= deco_cap. Rejects non-directed bigraphs.
std::vector<Word> graded_component_basis(const Layer& L, int i, int j, int degree, int word_length_cap,
                                         int deco_cap = 2);
// Same enumeration without the directedness requirement.
std::vector<Word> enumerate_words(const Layer& L, int i, int j, int degree, int max_len, int deco_cap);
// All decorations of a point up to the cap.
std::vector<Deco> decorations(const Layer& L, int point, int deco_cap);

// Image of e under the algebra map sending arrow a to arrow_img(a) and the
// decoration d at point p to deco_img(p, d), all in the target layer.
TensorElement apply_morphism(const Layer& src, const Layer& tgt, const TensorElement& e,
                             const std::function<TensorElement(int)>& arrow_img,
                             const std::function<TensorElement(int, const Deco&)>& deco_img);

// Readable form c_n a_n ... a_1 c_0 (right-to-left application).
std::string word_string(const Layer& L, const Word& w);

}  // namespace ditalg
