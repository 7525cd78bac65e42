// Small presentations used by tests, examples and the CLI.
#pragma once

#include "ditalg/dit.hpp"

namespace ditalg {

// 1 -a-> 2.
Dit fixture_ex1(const Field& f);
// Solid a and dashed v from 1 to 2 with δa = v.
Dit fixture_ex2(const Field& f);
// 1 -a-> 2 -b-> 3, dashed u: 1 ~> 3, I = <ba>, δ = 0.
Dit fixture_exi(const Field& f);
// Kronecker: a, b: 1 -> 2.
Dit fixture_exk(const Field& f);
// Lift of a quotient with nonzero δ² ∈ VIV: points 0..4, solid a:1→2,
// b:2→3, t:0→2, s:0→4, dashed x:0→1, y:3→4, I = <ba>, δs = y b t, δt = a x.
Dit fixture_exl(const Field& f);

}  // namespace ditalg
