// Reductions of interlaced weak ditalgebras and their comparison functors.
//
// Every reduction maps modules of its target back to modules of its source.
// Steps are recorded by point and arrow names so that the same step can be
// replayed on a ditalgebra with an extra source point.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ditalg/dit.hpp"
#include "ditalg/modcat.hpp"

namespace ditalg {

struct ReductionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A representation described by names, independent of arrow numbering.
struct NamedModule {
    std::map<std::string, std::size_t> dims;
    std::map<std::string, Matrix> X;     // rational points
    std::map<std::string, Matrix> maps;  // solid arrows
};
NamedModule to_named(const Dit& d, const Rep& m);
Rep from_named(const Dit& d, const NamedModule& m);

// Finite-dimensional B-module summand with End/rad = k; becomes a trivial point.
struct FinSummand {
    std::string label;
    NamedModule module;
};
// The localization of a rational point at further polynomials; becomes a
// rational point. With no polynomials this is the point itself. B arrows
// act by zero on it.
struct LocSummand {
    std::string label;
    std::string point;
    std::vector<Poly> inverted;
};
struct AdmissibleSpec {
    std::vector<std::string> b_arrows;  // solid arrows with δ = 0 generating B
    std::vector<FinSummand> fin;
    std::vector<LocSummand> loc;  // points touched by no B arrow and not listed get identity summands
};

enum class StepKind { deletion, regularization, factor_out, absorption, basechange, admissible, composite };
std::string to_string(StepKind k);

struct Step {
    StepKind kind = StepKind::deletion;
    std::vector<std::string> points;     // deletion: removed points
    std::vector<std::string> arrows;     // regularization {α, v}; factor_out S; absorption {ℓ}; basechange old
    std::vector<std::string> new_names;  // basechange: names of the new arrows
    std::optional<Matrix> matrix;        // basechange: new_l = Σ_k M(l,k) old_k
    std::optional<AdmissibleSpec> admissible;
    std::string describe() const;
};

class Reduction {
public:
    virtual ~Reduction() = default;
    StepKind kind() const { return step_.kind; }
    const Step& step() const { return step_; }
    const Dit& source() const { return *src_; }
    const Dit& target() const { return *tgt_; }
    std::shared_ptr<const Dit> source_ptr() const { return src_; }
    std::shared_ptr<const Dit> target_ptr() const { return tgt_; }

    // F on objects and morphisms: target modules to source modules.
    virtual Rep apply(const Rep& n) const = 0;
    virtual Morphism apply(const Rep& n, const Rep& n2, const Morphism& f) const = 0;
    // c with dim F(N) <= c dim N.
    virtual std::size_t dim_factor() const { return 1; }
    // Weight of each target point, given source weights (dimension contributed per unit).
    virtual std::vector<std::size_t> target_weights(const std::vector<std::size_t>& w) const = 0;

protected:
    Reduction(Step s, std::shared_ptr<const Dit> src, std::shared_ptr<const Dit> tgt)
        : step_(std::move(s)), src_(std::move(src)), tgt_(std::move(tgt)) {}
    Step step_;
    std::shared_ptr<const Dit> src_, tgt_;
};
using ReductionPtr = std::shared_ptr<const Reduction>;

// Reduction induced by a surjection φ of tensor algebras: points map to
// points (or vanish), arrows map to elements of the target. The target
// differential must satisfy δ′φ = φδ on every source generator.
class QuotientReduction : public Reduction {
public:
    QuotientReduction(Step s, std::shared_ptr<const Dit> src, std::shared_ptr<const Dit> tgt,
                      std::vector<int> point_map, std::vector<TensorElement> arrow_img);
    Rep apply(const Rep& n) const override;
    Morphism apply(const Rep& n, const Rep& n2, const Morphism& f) const override;
    std::vector<std::size_t> target_weights(const std::vector<std::size_t>& w) const override;
    const std::vector<int>& point_map() const { return point_map_; }
    const std::vector<TensorElement>& arrow_images() const { return arrow_img_; }
    // Restriction of a source module killed by the deleted points; nullopt otherwise.
    std::optional<Rep> preimage(const Rep& m) const;
    // φ applied to a source element.
    TensorElement map(const TensorElement& e) const;

private:
    std::vector<int> point_map_;
    std::vector<TensorElement> arrow_img_;
};

// Structure of the admissible module X: bases, dual bases and the radical part P.
struct AdmissibleData {
    struct Summand {
        std::string label;
        bool fin = true;
        int point = -1;                // Loc: source point
        std::optional<Rep> module;     // Fin: B-module over the B-ditalgebra
        std::vector<Poly> inverted;    // Loc: extra inverted polynomials
        int target_point = -1;
    };
    struct Basis {
        int summand = 0;
        int point = 0;  // source point
        std::size_t index = 0;  // coordinate inside the summand at that point
    };
    struct RadicalElement {
        int from = 0, to = 0;      // summands
        std::vector<Matrix> f0;    // per source point
        int gamma_arrow = -1;      // dashed arrow of the target dual to it
    };
    std::shared_ptr<const Dit> b_dit;  // points of the source with the B arrows only
    std::vector<Summand> summands;
    std::vector<Basis> basis;                     // x_i; ν_i is the dual coordinate
    std::vector<std::vector<int>> basis_at;       // per source point
    std::vector<RadicalElement> P;                // p_j
    // p_k ∘ p_j = Σ_l c[l][k][j] p_l, when composable.
    std::vector<std::vector<std::vector<Scalar>>> structure;
    std::size_t c_X = 1;
    std::map<std::tuple<int, int, int>, int> new_arrow;  // (arrow, ν index, x index) -> target arrow

    // Coordinates of p_j(x_m) in the basis.
    std::vector<std::pair<int, Scalar>> apply_p(int j, int m) const;
    bool coassociative() const;
    bool dual_bases_ok() const;
};

class AdmissibleReduction : public Reduction {
public:
    AdmissibleReduction(Step s, std::shared_ptr<const Dit> src, std::shared_ptr<const Dit> tgt,
                        std::shared_ptr<const AdmissibleData> data);
    Rep apply(const Rep& n) const override;
    Morphism apply(const Rep& n, const Rep& n2, const Morphism& f) const override;
    std::size_t dim_factor() const override { return data_->c_X; }
    std::vector<std::size_t> target_weights(const std::vector<std::size_t>& w) const override;
    const AdmissibleData& data() const { return *data_; }
    // σ_{ν,x} on a source element, ν and x basis indices.
    TensorElement sigma(const TensorElement& e, int nu, int x) const;

private:
    std::shared_ptr<const AdmissibleData> data_;
};

class CompositeReduction : public Reduction {
public:
    // Steps in application order: children[0] acts on the source first.
    CompositeReduction(std::shared_ptr<const Dit> src, std::vector<ReductionPtr> children);
    Rep apply(const Rep& n) const override;
    Morphism apply(const Rep& n, const Rep& n2, const Morphism& f) const override;
    std::size_t dim_factor() const override;
    std::vector<std::size_t> target_weights(const std::vector<std::size_t>& w) const override;
    const std::vector<ReductionPtr>& children() const { return children_; }

private:
    std::vector<ReductionPtr> children_;
};

ReductionPtr delete_points(std::shared_ptr<const Dit> d, const std::vector<std::string>& points);
ReductionPtr regularize(std::shared_ptr<const Dit> d, const std::string& alpha, const std::string& v);
ReductionPtr factor_out(std::shared_ptr<const Dit> d, const std::vector<std::string>& arrows);
ReductionPtr absorb(std::shared_ptr<const Dit> d, const std::string& loop);
ReductionPtr basechange(std::shared_ptr<const Dit> d, const std::vector<std::string>& old_arrows,
                        const std::vector<std::string>& new_names, const Matrix& m);
ReductionPtr reduce_admissible(std::shared_ptr<const Dit> d, const AdmissibleSpec& spec);
ReductionPtr compose_reductions(std::shared_ptr<const Dit> d, std::vector<ReductionPtr> steps);

// Builds the step on d (by names); composite steps are not replayable this way.
ReductionPtr make_reduction(std::shared_ptr<const Dit> d, const Step& s);
// Replays a list of steps from d, returning the composite.
ReductionPtr replay(std::shared_ptr<const Dit> d, const std::vector<Step>& steps);

// Edge reduction data for a solid arrow α: s -> t between trivial points
// with δα = 0: X = S_s ⊕ S_t ⊕ P_α.
AdmissibleSpec edge_spec(const Dit& d, const std::string& alpha);
// Kills a solid arrow with δα = 0: X = S_s ⊕ S_t, with identity summands
// at rational ends on which α acts by zero.
AdmissibleSpec kill_spec(const Dit& d, const std::string& alpha);

// Detachment of a source point e0: arrows out of e0 and ideal generators
// touching it are dropped.
std::shared_ptr<const Dit> detach(const Dit& d, const std::string& e0);
// Res: the module with its space at e0 cut to zero.
Rep restrict_detached(const Dit& d, const Dit& detached, const std::string& e0, const Rep& m);

// Generic module Γ at a rational point over k(x): dimension 1, x acting as x.
Rep generic_module(const Dit& d, const std::string& point);
// The parametrizing bimodule Z = F(Γ) as a module over k(x).
Rep evaluate_functor_on_bimodule(const Reduction& f, const std::string& point);

}  // namespace ditalg
