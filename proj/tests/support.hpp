// Random modules and morphisms shared by the test binaries.
#pragma once

#include <random>

#include "ditalg/modcat.hpp"

namespace ditalg::testing {

inline Matrix rand_mat(const Field& F, std::mt19937_64& rng, std::size_t r, std::size_t c, int spread = 7) {
    Matrix m(F, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = F(static_cast<std::int64_t>(rng() % static_cast<unsigned>(spread)));
    return m;
}

// A random module of the given dimension vector; arrows are zeroed at random
// until the ideal and the inverted polynomials are respected.
inline Rep rand_rep(const Dit& d, std::mt19937_64& rng, const std::vector<std::size_t>& dims, int spread = 7) {
    const Field& F = d.field();
    for (int attempt = 0; attempt < 400; ++attempt) {
        Rep m = zero_rep(d, F, dims);
        bool sparse = attempt >= 40;
        for (int p = 0; p < d.npoints(); ++p)
            if (d.layer.rational(p)) m.X[static_cast<std::size_t>(p)] = rand_mat(F, rng, dims[static_cast<std::size_t>(p)], dims[static_cast<std::size_t>(p)], spread);
        for (int a = 0; a < d.narrows(); ++a) {
            const Arrow& ar = d.layer.arrow(a);
            if (ar.dashed || (sparse && rng() % 2)) continue;
            m.maps[static_cast<std::size_t>(a)] = rand_mat(F, rng, dims[static_cast<std::size_t>(ar.t)], dims[static_cast<std::size_t>(ar.s)], spread);
        }
        if (is_valid_rep(d, m)) return m;
    }
    Rep m = zero_rep(d, F, dims);
    for (int p = 0; p < d.npoints(); ++p)
        if (d.layer.rational(p)) {
            // x -> λ·1 for a λ avoiding the inverted roots.
            for (std::int64_t l = 0; l < 50; ++l) {
                Matrix x = Matrix::identity(F, dims[static_cast<std::size_t>(p)]) * F(l);
                if (d.layer.ring(p).admissible_operator(x)) {
                    m.X[static_cast<std::size_t>(p)] = x;
                    break;
                }
            }
        }
    return m;
}

inline Morphism rand_combo(const Dit& d, const Rep& m, const Rep& n, std::mt19937_64& rng) {
    Morphism f = zero_morphism(d, m, n);
    for (const auto& b : hom(d, m, n)) f = f + scale(b, d.field()(static_cast<std::int64_t>(rng() % 13)));
    return f;
}

inline std::vector<std::size_t> rand_dims(std::mt19937_64& rng, int npoints, std::size_t total_max) {
    std::vector<std::size_t> dims(static_cast<std::size_t>(npoints), 0);
    std::size_t total = rng() % (total_max + 1);
    for (std::size_t k = 0; k < total; ++k) dims[rng() % dims.size()]++;
    return dims;
}

}  // namespace ditalg::testing
