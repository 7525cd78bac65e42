// Layered weak ditalgebras with an ideal: the pair (A, I) as a presentation.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ditalg/tensor.hpp"

namespace ditalg {

struct Dit {
    Layer layer;
    std::vector<TensorElement> delta;  // indexed by arrow id
    std::vector<TensorElement> ideal;  // degree-0 generators, each e_j h e_i
    // Cumulative generator index sets H_1 ⊆ ... ⊆ H_t, when supplied.
    std::optional<std::vector<std::vector<int>>> ideal_filtration;

    Dit(Layer l) : layer(std::move(l)), delta(static_cast<std::size_t>(layer.narrows())) {}

    const Field& field() const { return layer.field(); }
    const Bigraph& graph() const { return layer.graph(); }
    int npoints() const { return layer.npoints(); }
    int narrows() const { return layer.narrows(); }
    int point(const std::string& name) const;  // throws when absent
    int arrow(const std::string& name) const;   // throws when absent
};

// Splits generators into single-endpoint components and drops zeros.
std::vector<TensorElement> normalize_ideal(const Layer& L, const std::vector<TensorElement>& gens);

// Degree and endpoint compatibility of delta and ideal; throws with the offender.
void validate(const Dit& d);

struct Endpoints {
    int src = 0;
    int tgt = 0;
};
// Endpoints of a nonzero element supported on a single pair of points.
std::optional<Endpoints> endpoints(const Layer& L, const TensorElement& e);

// Terms printed one by one and sorted, so equal elements print equally
// regardless of arrow numbering.
std::string canonical_string(const Layer& L, const TensorElement& e);
// Text form of the whole presentation with every list sorted by name.
std::string canonical_form(const Dit& d);
bool structurally_equal(const Dit& a, const Dit& b);

// Solid arrows without incoming arrows at the point (the point is a source).
bool is_source(const Dit& d, int p);

}  // namespace ditalg
