#include "ditalg/pipeline.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ditalg/interlace.hpp"

namespace ditalg {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

struct Stuck {
    std::string reason;
    std::string presentation;
};

class Driver {
public:
    Driver(std::shared_ptr<const Dit> d, std::vector<std::size_t> w, std::size_t bound, int budget, int* used)
        : d_(bound), budget_(budget), used_(used), cur_(std::move(d)), w_(std::move(w)) {
        plan_.d = bound;
        plan_.budget = budget;
    }

    void push(ReductionPtr r) {
        chain_.push_back(r);
        w_ = r->target_weights(w_);
        cur_ = r->target_ptr();
        plan_.steps.push_back(r->step());
        plan_.weights.push_back(w_);
        plan_.bounds.push_back(d_);
        plan_.log.push_back(r->step().describe() + "  -> " + std::to_string(cur_->npoints()) + " points, " +
                            std::to_string(cur_->graph().solid().size()) + " solid, " +
                            std::to_string(cur_->graph().dashed().size()) + " dashed");
    }

    [[noreturn]] void fail(const std::string& reason) const { throw Stuck{reason, canonical_form(*cur_)}; }

    void spend() {
        if (*used_ >= budget_) fail("step budget of " + std::to_string(budget_) + " exhausted");
        ++*used_;
    }

    const Dit& cur() const { return *cur_; }
    std::shared_ptr<const Dit> cur_ptr() const { return cur_; }
    const std::vector<std::size_t>& weights() const { return w_; }
    std::size_t bound() const { return d_; }
    int budget() const { return budget_; }
    int* used() const { return used_; }
    ReductionPlan& plan() { return plan_; }
    const std::vector<ReductionPtr>& chain() const { return chain_; }

private:
    std::size_t d_;
    int budget_;
    int* used_;
    std::shared_ptr<const Dit> cur_;
    std::vector<std::size_t> w_;
    ReductionPlan plan_;
    std::vector<ReductionPtr> chain_;
};

bool point_in_ideal(const Dit& d, int p) {
    if (d.ideal.empty()) return false;
    ElementSpan J(d.field(), ideal_piece(d, d.ideal, p, p, 0, false, Caps{}));
    return J.contains(TensorElement::idempotent(d.layer, p));
}

// Deletes overweight points and trivial points lying in I.
bool prune(Driver& dr) {
    const Dit& d = dr.cur();
    std::vector<std::string> gone;
    for (int p = 0; p < d.npoints(); ++p)
        if (dr.weights()[uz(p)] > dr.bound() || (!d.layer.rational(p) && point_in_ideal(d, p)))
            gone.push_back(d.layer.point(p).name);
    if (gone.empty()) return false;
    dr.spend();
    dr.push(delete_points(dr.cur_ptr(), gone));
    return true;
}

// A polynomial q in I at a rational point: X is the sum of the Jordan
// modules k[x]/(x-λ)^s that q admits within the bound.
bool case_one(Driver& dr) {
    const Dit& d = dr.cur();
    for (const auto& h : d.ideal) {
        auto ep = endpoints(d.layer, h);
        if (!ep || ep->src != ep->tgt || !d.layer.rational(ep->src)) continue;
        bool pure = true;
        for (const auto& [w, c] : h.terms()) pure = pure && w.arrows.empty();
        if (!pure) continue;
        int p = ep->src;
        const FactorRing& R = d.layer.ring(p);
        DecoSum ds;
        for (const auto& [w, c] : h.terms()) ds.emplace_back(w.decos[0], c);
        Poly q = R.combine(ds).num;
        AdmissibleSpec spec;
        const std::string& name = d.layer.point(p).name;
        std::size_t cap = dr.bound() / dr.weights()[uz(p)];
        for (const auto& [f, mult] : factor(q)) {
            if (gcd(f, R.h()).degree() > 0) continue;  // a unit of the localized ring
            if (f.degree() != 1)
                dr.fail("ideal polynomial " + q.to_string() + " at " + name + " has a nonlinear factor " +
                        f.to_string());
            Scalar lambda = -f.coeff(0);
            for (std::size_t s = 1; s <= std::min<std::size_t>(static_cast<std::size_t>(mult), cap); ++s) {
                NamedModule m;
                m.dims[name] = s;
                m.X.emplace(name, jordan_module(d, p, lambda, s).X[uz(p)]);
                spec.fin.push_back({name + "[" + lambda.to_string() + (s > 1 ? "^" + std::to_string(s) : "") + "]", m});
            }
        }
        dr.spend();
        if (spec.fin.empty())
            dr.push(delete_points(dr.cur_ptr(), {name}));
        else
            dr.push(reduce_admissible(dr.cur_ptr(), spec));
        return true;
    }
    return false;
}

std::set<std::string> taken_arrow_names(const Dit& d) {
    std::set<std::string> s;
    for (const auto& a : d.graph().arrows) s.insert(a.name);
    return s;
}

// Solid arrows in I are factored out; a generator that is a combination of
// parallel arrows between trivial points is first made an arrow by basechange.
bool factor_arrows(Driver& dr) {
    const Dit& d = dr.cur();
    if (d.ideal.empty()) return false;
    std::vector<std::string> in_ideal;
    for (int k : d.graph().solid()) {
        const Arrow& ar = d.layer.arrow(k);
        ElementSpan J(d.field(), ideal_piece(d, d.ideal, ar.s, ar.t, 0, false, Caps{}));
        if (J.contains(TensorElement::arrow(d.layer, k))) in_ideal.push_back(ar.name);
    }
    if (!in_ideal.empty()) {
        try {
            auto r = factor_out(dr.cur_ptr(), in_ideal);
            dr.spend();
            dr.push(r);
            return true;
        } catch (const ReductionError&) {
        }
        for (const auto& n : in_ideal) {
            try {
                auto r = factor_out(dr.cur_ptr(), {n});
                dr.spend();
                dr.push(r);
                return true;
            } catch (const ReductionError&) {
            }
        }
    }
    for (const auto& h : d.ideal) {
        std::vector<int> arrows;
        std::vector<Scalar> coeffs;
        bool linear = true;
        for (const auto& [w, c] : h.terms()) {
            linear = linear && w.arrows.size() == 1 && !d.layer.dashed(w.arrows[0]) && w.decos[0].is_unit_deco() &&
                     w.decos[1].is_unit_deco();
            if (!linear) break;
            arrows.push_back(w.arrows[0]);
            coeffs.push_back(c);
        }
        if (!linear || arrows.size() < 2) continue;
        const Arrow& first = d.layer.arrow(arrows[0]);
        if (d.layer.rational(first.s) || d.layer.rational(first.t)) continue;
        std::size_t n = arrows.size();
        Matrix m(d.field(), n, n);
        for (std::size_t k = 0; k < n; ++k) m(0, k) = coeffs[k];
        for (std::size_t k = 1; k < n; ++k) m(k, k) = d.field().one();
        std::set<std::string> taken = taken_arrow_names(d);
        std::vector<std::string> old, fresh;
        for (int a : arrows) {
            old.push_back(d.layer.arrow(a).name);
            std::string nm = d.layer.arrow(a).name + "'";
            while (taken.count(nm)) nm += "'";
            taken.insert(nm);
            fresh.push_back(nm);
        }
        dr.spend();
        dr.push(basechange(dr.cur_ptr(), old, fresh, m));
        return true;
    }
    return false;
}

bool try_regularize(Driver& dr) {
    const Dit& d = dr.cur();
    for (int k : d.graph().solid()) {
        for (const auto& [w, c] : d.delta[uz(k)].terms()) {
            if (w.arrows.size() != 1 || !w.decos[0].is_unit_deco() || !w.decos[1].is_unit_deco()) continue;
            int v = w.arrows[0];
            if (!d.layer.dashed(v)) continue;
            try {
                auto r = regularize(dr.cur_ptr(), d.layer.arrow(k).name, d.layer.arrow(v).name);
                dr.spend();
                dr.push(r);
                return true;
            } catch (const ReductionError&) {
            }
        }
    }
    return false;
}

// Edge reduction, kill or absorption of a solid arrow with zero differential.
bool reduce_free_arrow(Driver& dr) {
    const Dit& d = dr.cur();
    auto levels = generator_levels(d);
    std::vector<int> solid;
    for (int k : d.graph().solid())
        if (d.delta[uz(k)].is_zero()) solid.push_back(k);
    std::stable_sort(solid.begin(), solid.end(), [&](int a, int b) {
        return levels ? (*levels)[uz(a)] < (*levels)[uz(b)] : a < b;
    });
    const auto& w = dr.weights();
    for (int k : solid) {
        const Arrow& ar = d.layer.arrow(k);
        bool rs = d.layer.rational(ar.s), rt = d.layer.rational(ar.t);
        if (ar.s == ar.t) {
            if (rs) continue;
            dr.spend();
            dr.push(absorb(dr.cur_ptr(), ar.name));
            return true;
        }
        if (w[uz(ar.s)] + w[uz(ar.t)] > dr.bound()) {
            dr.spend();
            dr.push(reduce_admissible(dr.cur_ptr(), kill_spec(d, ar.name)));
            return true;
        }
        if (!rs && !rt) {
            dr.spend();
            dr.push(reduce_admissible(dr.cur_ptr(), edge_spec(d, ar.name)));
            return true;
        }
    }
    return false;
}

std::string stuck_reason(const Dit& d) {
    std::ostringstream os;
    if (!d.ideal.empty()) {
        os << "ideal generator " << d.ideal[0].to_string(d.layer) << " admits no reduction";
        return os.str();
    }
    for (int k : d.graph().solid()) {
        const Arrow& ar = d.layer.arrow(k);
        os << "solid arrow " << ar.name;
        if (!d.delta[uz(k)].is_zero())
            os << " has differential " << d.delta[uz(k)].to_string(d.layer) << " that does not regularize";
        else if (ar.s == ar.t)
            os << " is a loop at a rational point";
        else
            os << " joins a rational point within the bound";
        return os.str();
    }
    return "no move available";
}

// One pass of the ideal phase; false when the ideal is gone.
bool ideal_phase(Driver& dr) {
    if (prune(dr)) return true;
    if (dr.cur().ideal.empty()) return false;
    if (case_one(dr)) return true;
    if (factor_arrows(dr)) return true;
    dr.fail(stuck_reason(dr.cur()));
}

void minimal_loop(Driver& dr) {
    while (true) {
        if (prune(dr)) continue;
        if (!dr.cur().ideal.empty()) {
            ideal_phase(dr);
            continue;
        }
        if (dr.cur().graph().solid().empty()) return;
        if (try_regularize(dr)) continue;
        if (reduce_free_arrow(dr)) continue;
        dr.fail(stuck_reason(dr.cur()));
    }
}

int pick_source(const Dit& d) {
    for (int p : topological_order(d.graph())) {
        if (!is_source(d, p) || point_in_ideal(d, p)) continue;
        bool others = false;
        for (const auto& a : d.graph().arrows) others = others || a.s != p;
        if (others) return p;
        return -1;
    }
    return -1;
}

// Source recursion: the ditalgebra without its first source is reduced
// first and the same steps are replayed with the source present.
void reduce_recursive(Driver& dr) {
    while (prune(dr)) {
    }
    int e0 = pick_source(dr.cur());
    if (e0 >= 0) {
        auto rest = delete_points(dr.cur_ptr(), {dr.cur().layer.point(e0).name});
        Driver sub(rest->target_ptr(), rest->target_weights(dr.weights()), dr.bound(), dr.budget(), dr.used());
        reduce_recursive(sub);
        for (const auto& s : sub.plan().steps) dr.push(make_reduction(dr.cur_ptr(), s));
    }
    minimal_loop(dr);
}

ReduceOutcome finish(Driver& dr, std::shared_ptr<const Dit> src, std::optional<Obstruction> ob) {
    ReduceOutcome out;
    out.plan = dr.plan();
    out.minimal = dr.cur_ptr();
    out.functor = compose_reductions(src, dr.chain());
    out.weights = dr.weights();
    out.obstruction = std::move(ob);
    return out;
}

template <class Body>
ReduceOutcome drive(std::shared_ptr<const Dit> d, std::size_t bound, int budget, Body body) {
    int used = 0;
    Driver dr(d, std::vector<std::size_t>(uz(d->npoints()), 1), bound, budget, &used);
    std::optional<Obstruction> ob;
    try {
        body(dr);
    } catch (const Stuck& s) {
        ob = Obstruction{s.reason, s.presentation};
    } catch (const ReductionError& e) {
        ob = Obstruction{e.what(), canonical_form(dr.cur())};
    }
    return finish(dr, d, std::move(ob));
}

}  // namespace

ReduceOutcome stellar_to_seminested(std::shared_ptr<const Dit> d, std::size_t bound, int budget) {
    return drive(d, bound, budget, [](Driver& dr) {
        while (ideal_phase(dr)) {
        }
    });
}

ReduceOutcome reduce_to_minimal(std::shared_ptr<const Dit> d, std::size_t bound, int budget) {
    return drive(d, bound, budget, [](Driver& dr) { reduce_recursive(dr); });
}

std::vector<Scalar> default_lambdas(const Field& f, const std::vector<Poly>& inverted) {
    std::vector<Scalar> out;
    std::int64_t limit = f.is_prime() ? std::min<std::int64_t>(3, f.characteristic()) : 3;
    for (std::int64_t v = 0; v < limit; ++v) {
        Scalar l = f(v);
        bool root = false;
        for (const auto& h : inverted) root = root || h.eval(l).is_zero();
        if (!root) out.push_back(l);
    }
    return out;
}

Rep jordan_module(const Dit& d, int point, const Scalar& lambda, std::size_t t) {
    std::vector<std::size_t> dims(uz(d.npoints()), 0);
    dims[uz(point)] = t;
    Rep m = zero_rep(d, d.field(), dims);
    Matrix& x = m.X[uz(point)];
    for (std::size_t i = 0; i < t; ++i) {
        x(i, i) = d.field().coerce(lambda);
        if (i + 1 < t) x(i, i + 1) = d.field().one();
    }
    return m;
}

Rep tensor_jordan(const Rep& z, const Field& base, const Scalar& lambda, std::size_t t) {
    Matrix J(base, t, t);
    for (std::size_t i = 0; i < t; ++i) {
        J(i, i) = base.coerce(lambda);
        if (i + 1 < t) J(i, i + 1) = base.one();
    }
    auto lift = [&](const Matrix& a) {
        Matrix r(base, a.rows() * t, a.cols() * t);
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) {
                const Scalar& s = a(i, j);
                if (s.is_zero()) continue;
                Matrix blk(base, t, t);
                if (!s.is_loose() && s.field().is_function()) {
                    auto inv = eval_poly(s.ratfun().den, J).inverse();
                    if (!inv) throw ArithmeticError("a denominator vanishes at the specialization");
                    blk = eval_poly(s.ratfun().num, J) * *inv;
                } else {
                    blk = Matrix::identity(base, t) * base.coerce(s);
                }
                r.set_block(i * t, j * t, blk);
            }
        return r;
    };
    Rep r{base, {}, {}, {}};
    for (auto n : z.dims) r.dims.push_back(n * t);
    for (const auto& x : z.X) r.X.push_back(lift(x));
    for (const auto& x : z.maps) r.maps.push_back(lift(x));
    return r;
}

ClassificationReport classify(std::shared_ptr<const Dit> d, std::size_t bound, int budget,
                              const std::optional<std::vector<Scalar>>& lambdas, std::uint64_t seed) {
    ClassificationReport rep;
    rep.reduction = reduce_to_minimal(d, bound, budget);
    if (rep.reduction.obstruction) return rep;
    const Dit& m = *rep.reduction.minimal;
    const Reduction& F = *rep.reduction.functor;
    const auto& w = rep.reduction.weights;
    auto add = [&](const std::string& origin, const Rep& x) {
        Rep img = F.apply(x);
        for (const auto& c : rep.indecomposables)
            if (c.dim == img.total_dim() && iso_test(*d, c.module, img, seed)) {
                rep.dedup.push_back(origin + " ~ " + c.origin);
                return;
            }
        rep.indecomposables.push_back({origin, img, img.total_dim()});
    };
    std::vector<std::string> notes;
    for (int p = 0; p < m.npoints(); ++p) {
        const std::string& name = m.layer.point(p).name;
        if (w[uz(p)] == 0 || w[uz(p)] > bound) continue;
        if (!m.layer.rational(p)) {
            rep.simples.push_back(name);
            add("S(" + name + ")", simple_rep(m, p));
            continue;
        }
        Family fam;
        fam.point = name;
        fam.inverted = m.layer.point(p).factor.inverted;
        fam.weight = w[uz(p)];
        fam.lambdas = lambdas ? *lambdas : default_lambdas(m.field(), fam.inverted);
        fam.lambdas.erase(std::remove_if(fam.lambdas.begin(), fam.lambdas.end(),
                                         [&](const Scalar& l) {
                                             for (const auto& h : fam.inverted)
                                                 if (h.eval(m.field().coerce(l)).is_zero()) return true;
                                             return false;
                                         }),
                          fam.lambdas.end());
        fam.Z = evaluate_functor_on_bimodule(F, name);
        fam.specializations_ok = true;
        for (const auto& l : fam.lambdas)
            for (std::size_t t = 1; t * w[uz(p)] <= bound; ++t) {
                Rep x = jordan_module(m, p, l, t);
                Rep img = F.apply(x);
                Rep spec = tensor_jordan(*fam.Z, d->field(), l, t);
                if (spec != img && !iso_test(*d, spec, img, seed)) fam.specializations_ok = false;
                add("G(" + name + ")/(x-" + l.to_string() + ")" + (t > 1 ? "^" + std::to_string(t) : ""), x);
            }
        if (!fam.inverted.empty()) {
            std::string inv;
            for (const auto& h : fam.inverted) inv += (inv.empty() ? "" : ", ") + h.to_string();
            notes.push_back("at " + name + " eigenvalues that are roots of " + inv + " are not covered by the family");
        }
        rep.families.push_back(std::move(fam));
    }
    if (rep.families.empty()) return rep;
    std::ostringstream os;
    os << "families list only the sampled eigenvalues in the ground field";
    for (const auto& n : notes) os << "; " << n;
    rep.exceptions = os.str();
    return rep;
}

Rep tensor_wild(const Dit& d, const WildBimodule& z, const FreeModule& n) {
    const Field& F = d.field();
    std::size_t k = n.x.rows();
    std::vector<std::size_t> dims;
    for (auto r : z.ranks) dims.push_back(r * k);
    Rep m = zero_rep(d, F, dims);
    auto word = [&](const std::string& w) {
        Matrix acc = Matrix::identity(F, k);
        for (char c : w) acc = (c == 'x' ? n.x : n.y) * acc;
        return acc;
    };
    for (int a = 0; a < d.narrows(); ++a) {
        if (d.layer.dashed(a) || uz(a) >= z.arrows.size()) continue;
        for (const auto& [w, c] : z.arrows[uz(a)]) m.maps[uz(a)] = m.maps[uz(a)] + kron(c, word(w));
    }
    return m;
}

WildReport verify_wild_certificate(const Dit& d, const WildBimodule& z, const std::vector<FreeModule>& sample) {
    WildReport rep;
    std::size_t total = 0;
    for (auto r : z.ranks) total += r;
    rep.rank_ok = z.ranks.size() == uz(d.npoints()) && total > 0;
    if (!rep.rank_ok) {
        rep.violations.push_back("Z has rank 0 or the wrong number of points");
        return rep;
    }
    Bigraph g;
    g.add_point("p");
    g.add_arrow("x", 0, 0, false);
    g.add_arrow("y", 0, 0, false);
    Dit free2{Layer(d.field(), g)};
    auto as_rep = [&](const FreeModule& n) {
        Rep r = zero_rep(free2, d.field(), {n.x.rows()});
        r.maps = {n.x, n.y};
        return r;
    };
    std::vector<Rep> in, out;
    for (const auto& n : sample) {
        in.push_back(as_rep(n));
        out.push_back(tensor_wild(d, z, n));
        std::string why;
        if (!is_valid_rep(d, out.back(), &why)) {
            rep.modules_ok = false;
            rep.violations.push_back("image of sample " + std::to_string(in.size() - 1) + " is not a module: " + why);
        }
    }
    if (!rep.modules_ok) return rep;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (is_indecomposable(free2, in[i]) && !is_indecomposable(d, out[i]))
            rep.violations.push_back("sample " + std::to_string(i) + " loses indecomposability");
        for (std::size_t j = i + 1; j < in.size(); ++j) {
            ++rep.pairs_checked;
            if (in[i].total_dim() != in[j].total_dim()) continue;
            if (!iso_test(free2, in[i], in[j]) && iso_test(d, out[i], out[j]))
                rep.violations.push_back("samples " + std::to_string(i) + " and " + std::to_string(j) +
                                         " have isomorphic images");
        }
    }
    return rep;
}

}  // namespace ditalg
