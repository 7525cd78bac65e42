// The bounded-dimension driver: reduction to a minimal ditalgebra,
// classification of indecomposables and parametrizing bimodules.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ditalg/reduce.hpp"

namespace ditalg {

struct Obstruction {
    std::string reason;
    std::string presentation;  // canonical form of the stuck ditalgebra
};

struct ReductionPlan {
    std::vector<Step> steps;
    std::size_t d = 0;
    // Per step: the dimension each point of the step's target contributes at
    // the original source, so a point of weight w supports modules of dim ≤ d / w.
    std::vector<std::vector<std::size_t>> weights;
    std::vector<std::size_t> bounds;  // d_i: bound on target dimension after step i
    int budget = 0;
    std::vector<std::string> log;
};

struct ReduceOutcome {
    ReductionPlan plan;
    std::shared_ptr<const Dit> minimal;  // last ditalgebra reached
    ReductionPtr functor;                // composite from minimal to source
    std::vector<std::size_t> weights;    // of the points of minimal
    std::optional<Obstruction> obstruction;
};

// Reduction until the ideal meets no point and no solid arrow lies in it.
ReduceOutcome stellar_to_seminested(std::shared_ptr<const Dit> d, std::size_t bound, int budget);
ReduceOutcome reduce_to_minimal(std::shared_ptr<const Dit> d, std::size_t bound, int budget);

struct ClassifiedModule {
    std::string origin;  // "S(p)" or "G(p)/(x-λ)^t"
    Rep module;          // over the source ditalgebra
    std::size_t dim = 0;
};

struct Family {
    std::string point;
    std::vector<Poly> inverted;
    std::size_t weight = 0;
    std::optional<Rep> Z;  // over k(x)
    std::vector<Scalar> lambdas;
    bool specializations_ok = false;
};

struct ClassificationReport {
    ReduceOutcome reduction;
    std::vector<std::string> simples;  // trivial points of the minimal ditalgebra within the bound
    std::vector<Family> families;
    std::vector<ClassifiedModule> indecomposables;  // pairwise non-isomorphic
    std::vector<std::string> dedup;                 // merged duplicates
    std::string exceptions;
    bool ok() const { return !reduction.obstruction; }
};

// Default λ sample {0, 1, 2} with roots of the inverted polynomials removed.
std::vector<Scalar> default_lambdas(const Field& f, const std::vector<Poly>& inverted);

ClassificationReport classify(std::shared_ptr<const Dit> d, std::size_t bound, int budget,
                              const std::optional<std::vector<Scalar>>& lambdas = std::nullopt,
                              std::uint64_t seed = 1);

// Z ⊗ Γ/(x-λ)^t: entries of Z evaluated at the Jordan block J_t(λ).
Rep tensor_jordan(const Rep& z, const Field& base, const Scalar& lambda, std::size_t t);
Rep jordan_module(const Dit& d, int point, const Scalar& lambda, std::size_t t);

// A bimodule over the free algebra k<x,y>: each point carries a free right
// module of the given rank, each solid arrow a sum of coefficient matrices
// times words in x and y (words read right to left, "" the unit).
struct WildBimodule {
    std::vector<std::size_t> ranks;
    std::vector<std::vector<std::pair<std::string, Matrix>>> arrows;  // per arrow id
};
struct FreeModule {
    Matrix x, y;
};
Rep tensor_wild(const Dit& d, const WildBimodule& z, const FreeModule& n);

struct WildReport {
    bool rank_ok = false;
    bool modules_ok = true;  // every image is annihilated by I
    std::vector<std::string> violations;
    std::size_t pairs_checked = 0;
    bool passed() const { return rank_ok && modules_ok && violations.empty(); }
};
WildReport verify_wild_certificate(const Dit& d, const WildBimodule& z, const std::vector<FreeModule>& sample);

}  // namespace ditalg
