#include "cinfty/hochschild.hpp"

#include <algorithm>
#include <cassert>

#include "cinfty/sparse_matrix.hpp"

namespace cinfty {

GradedAlgebra algebra_of(const AInfStructure& s)
{
    GradedAlgebra out;
    out.basis = s.basis;
    if (auto it = s.ops.find(2); it != s.ops.end()) {
        out.product = it->second;
    } else {
        out.product.arity = 2;
        out.product.degree = 0;
    }
    return out;
}

HochCochain zero_cochain(GradedAlgebra algebra)
{
    return HochCochain{std::move(algebra), {}, true};
}

bool cochain_is_zero(const HochCochain& f)
{
    for (const auto& [bideg, op] : f.parts)
        if (!op.is_zero())
            return false;
    return true;
}

namespace {

// g inserted into every slot of f, with the Koszul prefix sign of moving g
// past the letters standing before its slot: the circle (cup-one) product at
// the bar level.
MultilinearMap circle_bar(const GradedBasis& V, const MultilinearMap& f,
                          const MultilinearMap& g)
{
    MultilinearMap out;
    out.arity = f.arity + g.arity - 1;
    out.degree = f.degree + g.degree;
    int cap = V.max_degree() - out.degree;
    if (cap < out.arity)  // every letter has degree >= 1
        return out;
    for (const auto& w : words_of_length_capped(V, out.arity, cap)) {
        GradedVector acc;
        for (int k = 0; k < f.arity; ++k) {
            int prefix = 0;
            for (int t = 0; t < k; ++t)
                prefix += V.degree(w[t]);
            int sign = koszul_sign({g.degree}, {prefix});
            GradedVector val = g.apply(BarWord(w.begin() + k, w.begin() + k + g.arity));
            for (const auto& [letter, c] : val.terms()) {
                BarWord sub;
                sub.reserve(f.arity);
                sub.insert(sub.end(), w.begin(), w.begin() + k);
                sub.push_back(letter);
                sub.insert(sub.end(), w.begin() + k + g.arity, w.end());
                acc.add(f.apply(sub), c * sign);
            }
        }
        if (!acc.is_zero())
            out.table.emplace(w, std::move(acc));
    }
    return out;
}

MultilinearMap add_maps(MultilinearMap a, const MultilinearMap& b, const Rational& scale)
{
    assert(a.arity == b.arity || b.is_zero() || a.is_zero());
    for (const auto& [args, v] : b.table)
        a.add_value(args, v.scaled(scale));
    return a;
}

struct BarCochain {
    GradedBasis V;                                       // desuspended basis
    MultilinearMap beta2;                                // bar-level product
    std::map<std::pair<int, int>, MultilinearMap> parts; // keyed by raw bidegree
};

BarCochain to_bar_cochain(const HochCochain& f)
{
    BarCochain out;
    out.V = desuspend(f.algebra.basis);
    out.beta2 = bar_of_op(f.algebra.product, f.algebra.basis);
    for (const auto& [bideg, op] : f.parts) {
        if (op.is_zero())
            continue;
        if (op.arity != bideg.first || op.degree != bideg.second)
            throw AxiomError("cochain component disagrees with its bidegree key");
        out.parts.emplace(bideg, bar_of_op(op, f.algebra.basis));
    }
    return out;
}

void put_part(HochCochain& f, int arity, int internal_degree, const MultilinearMap& bar_comp)
{
    if (bar_comp.is_zero())
        return;
    MultiOp raw = op_from_bar_component(bar_comp, f.algebra.basis, f.algebra.basis,
                                        internal_degree);
    raw.arity = arity;
    auto key = std::make_pair(arity, internal_degree);
    auto it = f.parts.find(key);
    if (it == f.parts.end()) {
        f.parts.emplace(key, std::move(raw));
    } else {
        for (const auto& [args, v] : raw.table)
            it->second.add_value(args, v);
        if (it->second.is_zero())
            f.parts.erase(it);
    }
}

}  // namespace

HochCochain hdelta(const HochCochain& f)
{
    BarCochain bc = to_bar_cochain(f);
    HochCochain out{f.algebra, {}, f.harrison};
    for (const auto& [bideg, comp] : bc.parts) {
        int t = comp.degree;
        MultilinearMap d = circle_bar(bc.V, bc.beta2, comp);
        d = add_maps(std::move(d), circle_bar(bc.V, comp, bc.beta2), (t % 2) ? 1 : -1);
        put_part(out, bideg.first + 1, bideg.second, d);
    }
    return out;
}

HochCochain cup(const HochCochain& f, const HochCochain& g)
{
    if (!(f.algebra == g.algebra))
        throw SourceTargetMismatch("cup over different base algebras");
    BarCochain bf = to_bar_cochain(f);
    BarCochain bg = to_bar_cochain(g);
    HochCochain out{f.algebra, {}, false};
    for (const auto& [bdf, cf] : bf.parts) {
        for (const auto& [bdg, cg] : bg.parts) {
            MultilinearMap prod;
            prod.arity = cf.arity + cg.arity;
            prod.degree = cf.degree + cg.degree + 1;  // the bar product adds one
            int cap = bf.V.max_degree() - prod.degree;
            for (const auto& w : words_of_length_capped(bf.V, prod.arity, cap)) {
                int left_deg = 0;
                for (int t = 0; t < cf.arity; ++t)
                    left_deg += bf.V.degree(w[t]);
                int sign = koszul_sign({cg.degree}, {left_deg});
                GradedVector va = cf.apply(BarWord(w.begin(), w.begin() + cf.arity));
                if (va.is_zero())
                    continue;
                GradedVector vb = cg.apply(BarWord(w.begin() + cf.arity, w.end()));
                if (vb.is_zero())
                    continue;
                GradedVector acc;
                for (const auto& [i, ci] : va.terms())
                    for (const auto& [j, cj] : vb.terms())
                        acc.add(bf.beta2.apply({i, j}), ci * cj * sign);
                if (!acc.is_zero())
                    prod.table.emplace(w, std::move(acc));
            }
            put_part(out, bdf.first + bdg.first, bdf.second + bdg.second, prod);
        }
    }
    return out;
}

namespace {

// One placement pass of the brace insertion sum: slots of f either take a
// letter or the next g in order.
void brace_rec(const GradedBasis& V, const MultilinearMap& f,
               const std::vector<const MultilinearMap*>& gs, const BarWord& w, int slot,
               std::size_t pos, std::size_t next_g, int used_g_degree, int sign,
               std::vector<GradedVector>& slots, GradedVector& acc)
{
    if (slot == f.arity) {
        if (pos != w.size() || next_g != gs.size())
            return;
        // Expand the multilinear slots into table lookups on f.
        BarWord args(f.arity, 0);
        std::function<void(int, Rational)> expand = [&](int i, Rational coeff) {
            if (i == f.arity) {
                acc.add(f.apply(args), coeff * sign);
                return;
            }
            for (const auto& [letter, c] : slots[i].terms()) {
                args[i] = letter;
                expand(i + 1, coeff * c);
            }
        };
        expand(0, 1);
        return;
    }
    // Letter into this slot.
    if (pos < w.size()) {
        GradedVector lv;
        lv.set(w[pos], 1);
        slots.push_back(std::move(lv));
        brace_rec(V, f, gs, w, slot + 1, pos + 1, next_g, used_g_degree, sign, slots, acc);
        slots.pop_back();
    }
    // Next g into this slot.
    if (next_g < gs.size()) {
        const MultilinearMap& g = *gs[next_g];
        if (pos + g.arity <= w.size()) {
            GradedVector val = g.apply(BarWord(w.begin() + pos, w.begin() + pos + g.arity));
            if (!val.is_zero()) {
                int before = 0;
                for (std::size_t t = 0; t < pos; ++t)
                    before += V.degree(w[t]);
                int s = koszul_sign({g.degree}, {before + used_g_degree});
                slots.push_back(std::move(val));
                brace_rec(V, f, gs, w, slot + 1, pos + g.arity, next_g + 1,
                          used_g_degree + g.degree, sign * s, slots, acc);
                slots.pop_back();
            }
        }
    }
}

}  // namespace

HochCochain brace(const HochCochain& f, const std::vector<HochCochain>& gs)
{
    if (gs.empty())
        return f;
    BarCochain bf = to_bar_cochain(f);
    std::vector<BarCochain> bgs;
    for (const auto& g : gs) {
        if (!(g.algebra == f.algebra))
            throw SourceTargetMismatch("brace over different base algebras");
        bgs.push_back(to_bar_cochain(g));
    }

    HochCochain out{f.algebra, {}, false};
    // All combinations of one component from f and one from each g.
    std::vector<std::pair<std::pair<int, int>, const MultilinearMap*>> fparts;
    for (const auto& [bd, c] : bf.parts)
        fparts.emplace_back(bd, &c);
    std::function<void(std::size_t, std::vector<const MultilinearMap*>&, int, int)> pick =
        [&](std::size_t gi, std::vector<const MultilinearMap*>& chosen, int arity_sum,
            int degree_sum) {
            if (gi == bgs.size()) {
                for (const auto& [bdf, cf] : fparts) {
                    if (cf->arity < static_cast<int>(chosen.size()))
                        continue;
                    MultilinearMap res;
                    res.arity = cf->arity + arity_sum - static_cast<int>(chosen.size());
                    res.degree = cf->degree + degree_sum;
                    int cap = bf.V.max_degree() - res.degree;
                    if (res.arity < 1 || cap < res.arity)
                        continue;
                    for (const auto& w : words_of_length_capped(bf.V, res.arity, cap)) {
                        GradedVector acc;
                        std::vector<GradedVector> slots;
                        brace_rec(bf.V, *cf, chosen, w, 0, 0, 0, 0, 1, slots, acc);
                        if (!acc.is_zero())
                            res.table.emplace(w, std::move(acc));
                    }
                    int raw_arity = res.arity;
                    int raw_degree = res.degree - raw_arity + 1;
                    put_part(out, raw_arity, raw_degree, res);
                }
                return;
            }
            for (const auto& [bdg, cg] : bgs[gi].parts) {
                chosen.push_back(&cg);
                pick(gi + 1, chosen, arity_sum + cg.arity, degree_sum + cg.degree);
                chosen.pop_back();
            }
        };
    std::vector<const MultilinearMap*> chosen;
    pick(0, chosen, 0, 0);
    return out;
}

HochCochain cup_scalar(const HochCochain& f, const ScalarCochain& c)
{
    BarCochain bf = to_bar_cochain(f);
    HochCochain out{f.algebra, {}, false};
    int tc = c.degree - 1;  // bar degree of an arity-0 cochain
    for (const auto& [bdf, cf] : bf.parts) {
        MultilinearMap res;
        res.arity = cf.arity;
        res.degree = cf.degree + tc + 1;
        for (const auto& [w, val] : cf.table) {
            int sign = koszul_sign({tc}, {word_degree(w, bf.V)});
            GradedVector acc;
            for (const auto& [i, ci] : val.terms()) {
                // unit coordinate acts as the identity
                acc.add(i, ci * c.unit_coeff * sign);
                for (const auto& [j, cj] : c.body.terms())
                    acc.add(bf.beta2.apply({i, j}), ci * cj * sign);
            }
            if (!acc.is_zero())
                res.table.emplace(w, std::move(acc));
        }
        put_part(out, bdf.first, bdf.second + c.degree, res);
    }
    return out;
}

MultiOp hdelta_scalar(const GradedAlgebra& algebra, const ScalarCochain& c)
{
    // Graded commutator [a, c]; the unit coordinate commutes on the nose.
    MultiOp out;
    out.arity = 1;
    out.degree = c.degree;

    auto mul = [&](int i, int j) { return algebra.product.apply({i, j}); };
    for (int a = 0; a < algebra.basis.size(); ++a) {
        GradedVector acc;
        int da = algebra.basis.degree(a);
        for (const auto& [j, cj] : c.body.terms()) {
            acc.add(mul(a, j), cj);
            int sign = koszul_sign({da}, {algebra.basis.degree(j)});
            acc.add(mul(j, a), -sign * cj);
        }
        if (!acc.is_zero())
            out.table.emplace(BarWord{a}, std::move(acc));
    }
    return out;
}

std::optional<TwistingWitness> twisting_defect(const HochCochain& m, int arity_bound)
{
    BarCochain bm = to_bar_cochain(m);
    for (const auto& [bd, comp] : bm.parts) {
        if (bd.first < 3 || bd.second != 2 - bd.first)
            throw AxiomError("twisting cochain must live in bidegrees (i, 2-i), i >= 3");
        (void)comp;
    }

    auto part_at = [&](int arity) -> const MultilinearMap* {
        auto it = bm.parts.find({arity, 2 - arity});
        return it == bm.parts.end() ? nullptr : &it->second;
    };

    for (int N = 3; N <= arity_bound; ++N) {
        MultilinearMap acc;
        acc.arity = N;
        acc.degree = 2;
        if (const MultilinearMap* prev = part_at(N - 1)) {
            MultilinearMap d = circle_bar(bm.V, bm.beta2, *prev);
            d = add_maps(std::move(d), circle_bar(bm.V, *prev, bm.beta2), 1);
            acc = add_maps(std::move(acc), d, 1);
        }
        for (int i = 3; i <= N - 2; ++i) {
            int j = N + 1 - i;
            const MultilinearMap* a = part_at(i);
            const MultilinearMap* b = part_at(j);
            if (!a || !b)
                continue;
            acc = add_maps(std::move(acc), circle_bar(bm.V, *a, *b), 1);
        }
        for (const auto& [w, v] : acc.table)
            if (!v.is_zero())
                return TwistingWitness{N, w, v};
    }
    return std::nullopt;
}

bool is_twisting(const HochCochain& m, int arity_bound)
{
    return !twisting_defect(m, arity_bound).has_value();
}

HochCochain structure_tail(const AInfStructure& s)
{
    HochCochain out{algebra_of(s), {}, s.cinf};
    for (const auto& [arity, op] : s.ops) {
        if (arity < 3 || op.is_zero())
            continue;
        out.parts.emplace(std::make_pair(arity, 2 - arity), op);
    }
    return out;
}

AInfStructure assemble_structure(const GradedAlgebra& algebra, const HochCochain& tail,
                                 int arity_bound,
                                 const std::optional<GradedBasis::Generator>& unit)
{
    AInfStructure s;
    s.basis = algebra.basis;
    s.unit = unit;
    s.arity_bound = arity_bound;
    s.minimal = true;
    if (!algebra.product.is_zero())
        s.ops.emplace(2, algebra.product);
    for (const auto& [bideg, op] : tail.parts) {
        if (op.is_zero())
            continue;
        if (bideg.second != 2 - bideg.first || bideg.first < 3)
            throw AxiomError("tail component outside bidegrees (i, 2-i)");
        s.ops.emplace(bideg.first, op);
    }
    return s;
}

std::pair<AInfStructure, AInfMorphism> perturb(const AInfStructure& s, int arity,
                                               const MultiOp& p, int max_arity)
{
    if (p.arity != arity || p.degree != 1 - arity)
        throw AxiomError("perturbing cochain must live in bidegree (n, 1-n)");
    p.validate(s.basis, s.basis);

    GradedBasis V = desuspend(s.basis);

    MultilinearFamily P;
    MultilinearMap id1;
    id1.arity = 1;
    id1.degree = 0;
    for (int i = 0; i < s.basis.size(); ++i) {
        GradedVector v;
        v.set(i, 1);
        id1.table.emplace(BarWord{i}, std::move(v));
    }
    P.emplace(1, std::move(id1));
    if (!p.is_zero())
        P.emplace(arity, bar_of_op(p, s.basis));

    MultilinearFamily Pinv = invert_coalgebra_family(V, V, P, max_arity);
    CoalgebraMap Pmap(V, V, P);
    CoalgebraMap Pinvmap(V, V, Pinv);
    Coderivation d(V, structure_bar_family(s));

    AInfStructure out;
    out.basis = s.basis;
    out.unit = s.unit;
    out.arity_bound = std::max(s.arity_bound, max_arity);
    out.minimal = s.minimal;

    for (int n = 1; n <= max_arity; ++n) {
        MultilinearMap comp;
        comp.arity = n;
        comp.degree = 1;
        int cap = V.max_degree() - 1;
        for (const auto& tuple : words_of_length_capped(V, n, cap)) {
            BarElement e = Pinvmap.apply(d.apply(Pmap.apply(tuple)));
            GradedVector acc;
            for (const auto& [w, c] : e.terms())
                if (w.size() == 1)
                    acc.add(w[0], c);
            if (!acc.is_zero())
                comp.table.emplace(tuple, std::move(acc));
        }
        if (comp.is_zero())
            continue;
        out.ops.emplace(n, op_from_bar_component(comp, s.basis, s.basis, 2 - n));
    }
    if (out.ops.count(1))
        throw AxiomError("perturbation broke minimality");

    // Connecting morphism {id, ..., p, ...}: (H, m-bar) -> (H, m).
    AInfMorphism conn;
    conn.source = out;
    conn.target = s;
    MultiOp id_raw;
    id_raw.arity = 1;
    id_raw.degree = 0;
    for (int i = 0; i < s.basis.size(); ++i) {
        GradedVector v;
        v.set(i, 1);
        id_raw.table.emplace(BarWord{i}, std::move(v));
    }
    conn.components.emplace(1, std::move(id_raw));
    if (!p.is_zero())
        conn.components.emplace(arity, p);

    bool p_harrison =
        !check_cinf_components(V, V, {{arity, bar_of_op(p, s.basis)}}).has_value();
    conn.cinf = s.cinf && p_harrison;
    out.cinf = s.cinf && p_harrison;
    return {std::move(out), std::move(conn)};
}

namespace {

// Linear expansion of (delta p)(w) in the unknown entries of a degree-0
// cochain p of the given arity: returns per-target-generator rows over the
// unknown index set.
void hdelta_rows(const GradedBasis& V, const MultilinearMap& beta2, int p_arity,
                 const std::map<std::pair<BarWord, int>, int>& unknown_id, const BarWord& w,
                 std::map<int, std::map<int, Rational>>& rows_per_gen)
{
    int n = static_cast<int>(w.size());
    assert(n == p_arity + 1);
    // beta2 circ p, slot 1: beta2(p(w[:-1]), w[n-1])
    {
        BarWord sub(w.begin(), w.end() - 1);
        int d = word_degree(sub, V);
        for (int h = 0; h < V.size(); ++h) {
            if (V.degree(h) != d)
                continue;
            auto it = unknown_id.find({sub, h});
            if (it == unknown_id.end())
                continue;
            for (const auto& [g, c] : beta2.apply({h, w.back()}).terms())
                rows_per_gen[g][it->second] += c;
        }
    }
    // beta2 circ p, slot 2: beta2(w[0], p(w[1:])) (p has degree 0, sign +1)
    {
        BarWord sub(w.begin() + 1, w.end());
        int d = word_degree(sub, V);
        for (int h = 0; h < V.size(); ++h) {
            if (V.degree(h) != d)
                continue;
            auto it = unknown_id.find({sub, h});
            if (it == unknown_id.end())
                continue;
            for (const auto& [g, c] : beta2.apply({w.front(), h}).terms())
                rows_per_gen[g][it->second] += c;
        }
    }
    // minus p circ beta2
    for (int k = 0; k + 2 <= n; ++k) {
        int prefix = 0;
        for (int t = 0; t < k; ++t)
            prefix += V.degree(w[t]);
        int sign = koszul_sign({1}, {prefix});
        for (const auto& [letter, c] : beta2.apply({w[k], w[k + 1]}).terms()) {
            BarWord sub;
            sub.insert(sub.end(), w.begin(), w.begin() + k);
            sub.push_back(letter);
            sub.insert(sub.end(), w.begin() + k + 2, w.end());
            int d = word_degree(sub, V);
            for (int h = 0; h < V.size(); ++h) {
                if (V.degree(h) != d)
                    continue;
                auto it = unknown_id.find({sub, h});
                if (it == unknown_id.end())
                    continue;
                rows_per_gen[h][it->second] += -c * sign;
            }
        }
    }
}

}  // namespace

DegeneracyOutcome try_degenerate(const AInfStructure& s, int max_arity, bool harrison)
{
    AInfStructure current = s;
    GradedAlgebra algebra = algebra_of(s);
    GradedBasis V = desuspend(s.basis);
    MultilinearMap beta2 = bar_of_op(algebra.product, s.basis);
    std::vector<DegeneracyStep> steps;

    for (int n = 3; n <= max_arity; ++n) {
        auto op_it = current.ops.find(n);
        if (op_it == current.ops.end() || op_it->second.is_zero())
            continue;
        MultilinearMap mn = bar_of_op(op_it->second, s.basis);

        // Unknowns: entries of p (arity n-1, bar degree 0).
        std::map<std::pair<BarWord, int>, int> unknown_id;
        std::vector<std::pair<BarWord, int>> unknowns;
        for (const auto& tuple : words_of_length_capped(V, n - 1, V.max_degree())) {
            int d = word_degree(tuple, V);
            for (int h = 0; h < V.size(); ++h) {
                if (V.degree(h) != d)
                    continue;
                unknown_id[{tuple, h}] = static_cast<int>(unknowns.size());
                unknowns.emplace_back(tuple, h);
            }
        }

        std::vector<std::map<int, Rational>> rows;
        std::vector<Rational> rhs;

        // delta p = -m_n on every arity-n tuple.
        for (const auto& w : words_of_length_capped(V, n, V.max_degree() - 1)) {
            std::map<int, std::map<int, Rational>> per_gen;
            hdelta_rows(V, beta2, n - 1, unknown_id, w, per_gen);
            GradedVector base = mn.apply(w);
            for (const auto& [g, c] : base.terms())
                (void)per_gen[g];
            for (auto& [g, row] : per_gen) {
                rows.push_back(std::move(row));
                rhs.push_back(-base.coeff(g));
            }
        }

        // Harrison mode: p vanishes on shuffles.
        if (harrison) {
            for (const auto& sh : arity_shuffle_span(V, n - 1, V.max_degree())) {
                std::map<int, std::map<int, Rational>> per_gen;
                for (const auto& [w, c] : sh.terms()) {
                    int d = word_degree(w, V);
                    for (int h = 0; h < V.size(); ++h) {
                        if (V.degree(h) != d)
                            continue;
                        auto it = unknown_id.find({w, h});
                        if (it != unknown_id.end())
                            per_gen[h][it->second] += c;
                    }
                }
                for (auto& [g, row] : per_gen) {
                    rows.push_back(std::move(row));
                    rhs.push_back(0);
                }
            }
        }

        SparseMatrix sys(static_cast<int>(rows.size()), static_cast<int>(unknowns.size()));
        for (int r = 0; r < static_cast<int>(rows.size()); ++r)
            for (const auto& [c, v] : rows[r])
                if (v != 0)
                    sys.set(r, c, v);
        auto sol = solve(sys, rhs);
        if (!sol) {
            auto coh = cohomology_at(algebra, n, 2 - n, harrison);
            return DegeneracyObstruction{n, op_it->second, coh.dim,
                                         std::move(coh.representatives)};
        }

        MultilinearMap pbar;
        pbar.arity = n - 1;
        pbar.degree = 0;
        for (std::size_t u = 0; u < unknowns.size(); ++u)
            if ((*sol)[u] != 0) {
                GradedVector v;
                v.set(unknowns[u].second, (*sol)[u]);
                pbar.add_value(unknowns[u].first, v);
            }
        MultiOp praw = op_from_bar_component(pbar, s.basis, s.basis, 1 - (n - 1));
        praw.arity = n - 1;

        auto [next, conn] = perturb(current, n - 1, praw, max_arity);
        if (auto it = next.ops.find(n); it != next.ops.end() && !it->second.is_zero())
            throw AxiomError("internal: perturbation failed to kill the operation");
        current = std::move(next);
        steps.push_back(DegeneracyStep{n - 1, std::move(praw)});
    }
    return steps;
}

namespace {

// Elementary cochain basis of the bar-level bidegree (arity, raw degree m):
// pairs (tuple, target generator).
struct CochainSpace {
    std::vector<std::pair<BarWord, int>> elems;
    std::map<std::pair<BarWord, int>, int> index;
    // Harrison subspace coordinates: columns of K span the shuffle-vanishing
    // cochains inside the elementary basis. Identity when not restricted.
    std::vector<std::vector<Rational>> harrison_basis;
};

CochainSpace cochain_space(const GradedBasis& V, int arity, int bar_degree, bool harrison)
{
    CochainSpace out;
    if (arity == 0) {
        for (int h = 0; h < V.size(); ++h)
            if (V.degree(h) == bar_degree) {
                out.index[{BarWord{}, h}] = static_cast<int>(out.elems.size());
                out.elems.emplace_back(BarWord{}, h);
            }
    } else {
        int cap = V.max_degree() - bar_degree;  // target degree stays in range
        for (const auto& tuple : words_of_length_capped(V, arity, cap)) {
            int d = word_degree(tuple, V) + bar_degree;
            for (int h = 0; h < V.size(); ++h) {
                if (V.degree(h) != d)
                    continue;
                out.index[{tuple, h}] = static_cast<int>(out.elems.size());
                out.elems.emplace_back(tuple, h);
            }
        }
    }

    int dim = static_cast<int>(out.elems.size());
    if (!harrison || arity < 2) {
        for (int i = 0; i < dim; ++i) {
            std::vector<Rational> e(dim, 0);
            e[i] = 1;
            out.harrison_basis.push_back(std::move(e));
        }
        return out;
    }

    // Constraints: value on every shuffle vanishes.
    std::vector<std::map<int, Rational>> rows;
    for (const auto& sh : arity_shuffle_span(V, arity, V.max_degree() - bar_degree)) {
        std::map<int, std::map<int, Rational>> per_gen;
        for (const auto& [w, c] : sh.terms()) {
            int d = word_degree(w, V) + bar_degree;
            for (int h = 0; h < V.size(); ++h) {
                if (V.degree(h) != d)
                    continue;
                auto it = out.index.find({w, h});
                if (it != out.index.end())
                    per_gen[h][it->second] += c;
            }
        }
        for (auto& [g, row] : per_gen)
            rows.push_back(std::move(row));
    }
    SparseMatrix constraints(static_cast<int>(rows.size()), dim);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r)
        for (const auto& [c, v] : rows[r])
            if (v != 0)
                constraints.set(r, c, v);
    out.harrison_basis = kernel_basis(constraints);
    return out;
}

}  // namespace

CohomologyAt cohomology_at(const GradedAlgebra& algebra, int n, int m, bool harrison)
{
    if (n < 0)
        return {};
    GradedBasis V = desuspend(algebra.basis);
    MultilinearMap beta2 = bar_of_op(algebra.product, algebra.basis);

    auto bar_deg = [&](int arity) { return m + arity - 1; };
    CochainSpace sp_prev = cochain_space(V, n - 1, bar_deg(n - 1), harrison);
    CochainSpace sp_mid = cochain_space(V, n, bar_deg(n), harrison);
    CochainSpace sp_next = cochain_space(V, n + 1, bar_deg(n + 1), harrison);

    // delta of one elementary cochain, as a vector over the next space.
    auto delta_elem = [&](int arity, const std::pair<BarWord, int>& elem,
                          const CochainSpace& next) {
        std::vector<Rational> out(next.elems.size(), 0);
        MultilinearMap probe;
        probe.arity = arity;
        probe.degree = bar_deg(arity);
        GradedVector pv;
        pv.set(elem.second, 1);
        probe.table.emplace(elem.first, pv);

        MultilinearMap img;
        if (arity == 0) {
            // [a, c] with the Koszul sign of moving c past a.
            img.arity = 1;
            img.degree = probe.degree + 1;
            for (int a = 0; a < V.size(); ++a) {
                GradedVector acc;
                acc.add(beta2.apply({a, elem.second}),
                        koszul_sign({probe.degree}, {V.degree(a)}));
                acc.add(beta2.apply({elem.second, a}), 1);
                if (!acc.is_zero())
                    img.table.emplace(BarWord{a}, std::move(acc));
            }
        } else {
            img = circle_bar(V, beta2, probe);
            img = add_maps(std::move(img), circle_bar(V, probe, beta2),
                           (probe.degree % 2) ? 1 : -1);
        }
        for (const auto& [w, val] : img.table)
            for (const auto& [g, c] : val.terms()) {
                auto it = next.index.find({w, g});
                if (it != next.index.end())
                    out[it->second] += c;
            }
        return out;
    };

    auto delta_matrix = [&](int arity, const CochainSpace& from, const CochainSpace& to) {
        // Columns: delta of each (restricted) basis vector, in restricted
        // coordinates of the target space.
        SparseMatrix full(static_cast<int>(to.elems.size()),
                          static_cast<int>(from.harrison_basis.size()));
        for (std::size_t j = 0; j < from.harrison_basis.size(); ++j) {
            std::vector<Rational> acc(to.elems.size(), 0);
            for (std::size_t e = 0; e < from.elems.size(); ++e) {
                const Rational& coeff = from.harrison_basis[j][e];
                if (coeff == 0)
                    continue;
                auto col = delta_elem(arity, from.elems[e], to);
                for (std::size_t r = 0; r < col.size(); ++r)
                    acc[r] += coeff * col[r];
            }
            for (std::size_t r = 0; r < acc.size(); ++r)
                if (acc[r] != 0)
                    full.set(static_cast<int>(r), static_cast<int>(j), acc[r]);
        }
        if (!harrison)
            return full;
        // Re-express in the Harrison coordinates of the target.
        SparseMatrix K(static_cast<int>(to.elems.size()),
                       static_cast<int>(to.harrison_basis.size()));
        for (std::size_t j = 0; j < to.harrison_basis.size(); ++j)
            for (std::size_t r = 0; r < to.elems.size(); ++r)
                if (to.harrison_basis[j][r] != 0)
                    K.set(static_cast<int>(r), static_cast<int>(j), to.harrison_basis[j][r]);
        SparseMatrix restricted(static_cast<int>(to.harrison_basis.size()), full.cols());
        for (int j = 0; j < full.cols(); ++j) {
            std::vector<Rational> col(full.rows(), 0);
            for (int r = 0; r < full.rows(); ++r)
                col[r] = full.at(r, j);
            auto sol = solve(K, col);
            if (!sol)
                throw AxiomError("delta does not preserve the Harrison subcomplex");
            for (std::size_t r = 0; r < sol->size(); ++r)
                if ((*sol)[r] != 0)
                    restricted.set(static_cast<int>(r), j, (*sol)[r]);
        }
        return restricted;
    };

    SparseMatrix d_in = delta_matrix(n - 1, sp_prev, sp_mid);
    SparseMatrix d_out = delta_matrix(n, sp_mid, sp_next);
    auto hom = quotient_and_homology(d_in, d_out);

    CohomologyAt out;
    out.dim = hom.rank;
    for (const auto& rep : hom.representatives) {
        // rep is in restricted coordinates; expand to an elementary cochain.
        MultilinearMap comp;
        comp.arity = n;
        comp.degree = bar_deg(n);
        for (std::size_t j = 0; j < rep.size(); ++j) {
            if (rep[j] == 0)
                continue;
            const auto& hb = sp_mid.harrison_basis[j];
            for (std::size_t e = 0; e < sp_mid.elems.size(); ++e) {
                if (hb[e] == 0)
                    continue;
                GradedVector v;
                v.set(sp_mid.elems[e].second, rep[j] * hb[e]);
                comp.add_value(sp_mid.elems[e].first, v);
            }
        }
        MultiOp raw = op_from_bar_component(comp, algebra.basis, algebra.basis, m);
        raw.arity = n;
        out.representatives.push_back(std::move(raw));
    }
    return out;
}

int cohomology_dim(const GradedAlgebra& algebra, int n, int m, bool harrison)
{
    return cohomology_at(algebra, n, m, harrison).dim;
}

}  // namespace cinfty
