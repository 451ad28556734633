#include "cinfty/ainf.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#include "cinfty/sparse_matrix.hpp"

namespace cinfty {

namespace {

std::map<int, std::vector<int>> degree_slices(const GradedBasis& basis)
{
    std::map<int, std::vector<int>> out;
    for (int i = 0; i < basis.size(); ++i)
        out[basis.degree(i)].push_back(i);
    return out;
}

}  // namespace

void validate_structure(const AInfStructure& s)
{
    if (s.unit && s.basis.find(s.unit->name))
        throw AxiomError("unit generator must not appear in the reduced basis");
    for (const auto& [arity, op] : s.ops) {
        if (arity < 1)
            throw AxiomError("operation arity must be >= 1");
        if (arity > s.arity_bound)
            throw AxiomError("operation arity exceeds the declared arity bound");
        if (op.arity != arity)
            throw AxiomError("operation table arity mismatch");
        if (op.degree != 2 - arity)
            throw AxiomError("operation of arity " + std::to_string(arity) +
                             " must have degree " + std::to_string(2 - arity));
        op.validate(s.basis, s.basis);
    }
    auto m1 = s.ops.find(1);
    bool has_m1 = m1 != s.ops.end() && !m1->second.is_zero();
    if (s.minimal && has_m1)
        throw AxiomError("structure flagged minimal but m_1 is nonzero");
}

void validate_morphism(const AInfMorphism& f)
{
    validate_structure(f.source);
    validate_structure(f.target);
    for (const auto& [arity, comp] : f.components) {
        if (arity < 1)
            throw AxiomError("morphism component arity must be >= 1");
        if (comp.arity != arity)
            throw AxiomError("morphism component arity mismatch");
        if (comp.degree != 1 - arity)
            throw AxiomError("morphism component of arity " + std::to_string(arity) +
                             " must have degree " + std::to_string(1 - arity));
        comp.validate(f.source.basis, f.target.basis);
    }
}

MultilinearMap bar_of_op(const MultiOp& op, const GradedBasis& source_original)
{
    GradedBasis desusp = desuspend(source_original);
    MultilinearMap comp;
    comp.arity = op.arity;
    comp.degree = op.degree + op.arity - 1;
    for (const auto& [args, val] : op.table) {
        if (val.is_zero())
            continue;
        int tw = suspension_twist(word_degrees(args, desusp));
        comp.table.emplace(args, val.scaled(tw));
    }
    return comp;
}

namespace {

MultilinearFamily to_bar(const std::map<int, MultiOp>& raw, const GradedBasis& source)
{
    MultilinearFamily fam;
    for (const auto& [arity, op] : raw) {
        if (op.is_zero())
            continue;
        fam.emplace(arity, bar_of_op(op, source));
    }
    return fam;
}

}  // namespace

MultilinearFamily structure_bar_family(const AInfStructure& s)
{
    return to_bar(s.ops, s.basis);
}

MultilinearFamily morphism_bar_family(const AInfMorphism& f)
{
    return to_bar(f.components, f.source.basis);
}

MultiOp op_from_bar_component(const MultilinearMap& bar_comp, const GradedBasis& source,
                              const GradedBasis& target, int declared_degree)
{
    (void)target;
    MultiOp op;
    op.arity = bar_comp.arity;
    op.degree = declared_degree;
    GradedBasis desusp = desuspend(source);
    for (const auto& [args, val] : bar_comp.table) {
        if (val.is_zero())
            continue;
        int tw = suspension_twist(word_degrees(args, desusp));
        op.table.emplace(args, val.scaled(tw));
    }
    return op;
}

Coderivation bar_differential(const AInfStructure& s)
{
    return Coderivation(desuspend(s.basis), structure_bar_family(s));
}

std::optional<StasheffWitness> check_stasheff(const AInfStructure& s, int max_degree)
{
    Coderivation d = bar_differential(s);
    for (const auto& w : words_up_to_degree(d.basis(), max_degree)) {
        BarElement sq = d.apply(d.apply(w));
        if (!sq.is_zero())
            return StasheffWitness{w, sq};
    }
    return std::nullopt;
}

std::optional<ShuffleWitness> check_cinf_components(const GradedBasis& desusp_source,
                                                    const GradedBasis& desusp_target,
                                                    const MultilinearFamily& family)
{
    int target_max = desusp_target.max_degree();
    for (const auto& [arity, comp] : family) {
        if (arity < 2 || comp.is_zero())
            continue;
        int cap = target_max - comp.degree;  // max useful source word degree
        for (int k = 1; k < arity; ++k) {
            for (const auto& u : words_of_length_capped(desusp_source, k, cap - (arity - k))) {
                int remaining = cap - word_degree(u, desusp_source);
                for (const auto& v :
                     words_of_length_capped(desusp_source, arity - k, remaining)) {
                    BarElement sh = shuffle(u, v, desusp_source);
                    GradedVector acc;
                    for (const auto& [w, c] : sh.terms())
                        acc.add(comp.apply(w), c);
                    if (!acc.is_zero())
                        return ShuffleWitness{arity, u, v, acc};
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<ShuffleWitness> check_cinf(const AInfStructure& s)
{
    GradedBasis desusp = desuspend(s.basis);
    return check_cinf_components(desusp, desusp, structure_bar_family(s));
}

std::optional<MorphismWitness> check_morphism(const AInfMorphism& f, int max_degree)
{
    GradedBasis sb = desuspend(f.source.basis);
    GradedBasis tb = desuspend(f.target.basis);
    Coderivation d = bar_differential(f.source);
    Coderivation dp = bar_differential(f.target);
    CoalgebraMap F(sb, tb, morphism_bar_family(f));
    for (const auto& w : words_up_to_degree(sb, max_degree)) {
        BarElement defect = F.apply(d.apply(w));
        defect.add(dp.apply(F.apply(w)), -1);
        if (!defect.is_zero())
            return MorphismWitness{w, defect};
    }
    return std::nullopt;
}

AInfMorphism identity_morphism(const AInfStructure& s)
{
    MultiOp id;
    id.arity = 1;
    id.degree = 0;
    for (int i = 0; i < s.basis.size(); ++i) {
        GradedVector v;
        v.set(i, 1);
        id.table.emplace(BarWord{i}, std::move(v));
    }
    AInfMorphism f{s, s, {{1, std::move(id)}}, s.cinf};
    return f;
}

int max_feasible_arity(const GradedBasis& source, const GradedBasis& target,
                       int declared_delta)
{
    if (source.size() == 0 || target.size() == 0)
        return 0;
    int min_src = source.min_degree();
    if (min_src < 2)
        throw AxiomError("arity bound needs a 1-connected basis (degrees >= 2)");
    // arity i is feasible iff i*min_src + (delta - i) <= max target degree
    int num = target.max_degree() - declared_delta;
    int den = min_src - 1;
    return num < den ? 0 : num / den;
}

std::vector<BarWord> tuples_with_degree_cap(const GradedBasis& basis, int n, int cap)
{
    return words_of_length_capped(basis, n, cap);
}

AInfMorphism compose(const AInfMorphism& g, const AInfMorphism& f)
{
    if (!(f.target == g.source))
        throw SourceTargetMismatch("compose: target of f differs from source of g");

    GradedBasis sb = desuspend(f.source.basis);
    GradedBasis mb = desuspend(f.target.basis);
    CoalgebraMap F(sb, mb, morphism_bar_family(f));
    MultilinearFamily gfam = morphism_bar_family(g);

    AInfMorphism h{f.source, g.target, {}, f.cinf && g.cinf};
    int n_max = std::min(max_feasible_arity(f.source.basis, g.target.basis, 1),
                         std::max(f.source.arity_bound, g.target.arity_bound) * 2);
    n_max = std::max(n_max, 1);
    for (int n = 1; n <= n_max; ++n) {
        MultilinearMap comp;
        comp.arity = n;
        comp.degree = 0;
        int cap = g.target.basis.max_degree() + n - 1;  // original-degree sum cap
        for (const auto& tuple : tuples_with_degree_cap(f.source.basis, n, cap)) {
            BarElement mid = F.apply(tuple);
            GradedVector acc;
            for (const auto& [w, c] : mid.terms()) {
                auto it = gfam.find(static_cast<int>(w.size()));
                if (it == gfam.end())
                    continue;
                acc.add(it->second.apply(w), c);
            }
            if (!acc.is_zero())
                comp.table.emplace(tuple, std::move(acc));
        }
        if (!comp.table.empty())
            h.components.emplace(
                n, op_from_bar_component(comp, f.source.basis, g.target.basis, 1 - n));
    }
    return h;
}

ChainHomology complex_homology(const GradedBasis& basis, const MultiOp* m1, int max_degree)
{
    auto slices = degree_slices(basis);
    auto matrix_at = [&](int d) {
        const auto lo = slices.count(d) ? slices.at(d) : std::vector<int>{};
        const auto hi = slices.count(d + 1) ? slices.at(d + 1) : std::vector<int>{};
        SparseMatrix m(static_cast<int>(hi.size()), static_cast<int>(lo.size()));
        if (m1) {
            for (std::size_t j = 0; j < lo.size(); ++j) {
                GradedVector img = m1->apply({lo[j]});
                for (std::size_t r = 0; r < hi.size(); ++r) {
                    const Rational& c = img.coeff(hi[r]);
                    if (c != 0)
                        m.set(static_cast<int>(r), static_cast<int>(j), c);
                }
            }
        }
        return m;
    };

    ChainHomology out;
    for (int d = basis.min_degree(); d <= std::min(basis.max_degree(), max_degree); ++d) {
        if (!slices.count(d))
            continue;
        auto h = quotient_and_homology(matrix_at(d - 1), matrix_at(d));
        out.ranks[d] = h.rank;
        out.representatives[d] = std::move(h.representatives);
    }
    return out;
}

namespace {

GradedVector apply_unary(const MultiOp* op, const GradedVector& x)
{
    GradedVector out;
    if (!op)
        return out;
    for (const auto& [i, c] : x.terms())
        out.add(op->apply({i}), c);
    return out;
}

}  // namespace

bool is_weak_equivalence(const AInfMorphism& f, int max_degree)
{
    const MultiOp* m1s = nullptr;
    const MultiOp* m1t = nullptr;
    if (auto it = f.source.ops.find(1); it != f.source.ops.end())
        m1s = &it->second;
    if (auto it = f.target.ops.find(1); it != f.target.ops.end())
        m1t = &it->second;
    auto src_h = complex_homology(f.source.basis, m1s, max_degree);
    auto tgt_h = complex_homology(f.target.basis, m1t, max_degree);

    auto f1_it = f.components.find(1);
    const MultiOp* f1 = f1_it == f.components.end() ? nullptr : &f1_it->second;

    auto src_slices = degree_slices(f.source.basis);
    auto tgt_slices = degree_slices(f.target.basis);

    int lo = std::min(f.source.basis.min_degree(), f.target.basis.min_degree());
    for (int d = lo; d <= max_degree; ++d) {
        int rs = src_h.ranks.count(d) ? src_h.ranks.at(d) : 0;
        int rt = tgt_h.ranks.count(d) ? tgt_h.ranks.at(d) : 0;
        if (rs != rt)
            return false;
        if (rs == 0)
            continue;

        const auto& tgens = tgt_slices.at(d);
        const auto& sgens = src_slices.at(d);
        const auto& treps = tgt_h.representatives.at(d);

        // Columns: target homology representatives, then boundaries landing in
        // degree d; a cycle's class coordinates are the leading block of any
        // solution.
        const auto tprev = tgt_slices.count(d - 1) ? tgt_slices.at(d - 1) : std::vector<int>{};
        std::vector<std::vector<Rational>> cols(treps.begin(), treps.end());
        if (m1t) {
            for (int gj : tprev) {
                GradedVector img = m1t->apply({gj});
                std::vector<Rational> col(tgens.size(), 0);
                for (std::size_t r = 0; r < tgens.size(); ++r)
                    col[r] = img.coeff(tgens[r]);
                cols.push_back(std::move(col));
            }
        }
        SparseMatrix sys(static_cast<int>(tgens.size()), static_cast<int>(cols.size()));
        for (int j = 0; j < static_cast<int>(cols.size()); ++j)
            for (int r = 0; r < static_cast<int>(tgens.size()); ++r)
                if (cols[j][r] != 0)
                    sys.set(r, j, cols[j][r]);

        SparseMatrix induced(rt, rs);
        for (int j = 0; j < rs; ++j) {
            const auto& rep = src_h.representatives.at(d)[j];
            GradedVector x;
            for (std::size_t i = 0; i < sgens.size(); ++i)
                x.add(sgens[i], rep[i]);
            GradedVector y = apply_unary(f1, x);
            std::vector<Rational> b(tgens.size(), 0);
            for (std::size_t r = 0; r < tgens.size(); ++r)
                b[r] = y.coeff(tgens[r]);
            auto sol = solve(sys, b);
            if (!sol)
                throw AxiomError("f_1 does not map cycles to cycles in degree " +
                                 std::to_string(d));
            for (int r = 0; r < rt; ++r)
                induced.set(r, j, (*sol)[r]);
        }
        if (rref(induced).rank != rs)
            return false;
    }
    return true;
}

AInfMorphism invert_iso(const AInfMorphism& f, int max_arity)
{
    GradedBasis sb = desuspend(f.source.basis);
    GradedBasis tb = desuspend(f.target.basis);
    MultilinearFamily psi;
    try {
        psi = invert_coalgebra_family(sb, tb, morphism_bar_family(f), max_arity);
    } catch (const AxiomError& e) {
        throw NotIso(e.what());
    }

    AInfMorphism g{f.target, f.source, {}, f.cinf};
    for (const auto& [arity, comp] : psi)
        g.components.emplace(
            arity, op_from_bar_component(comp, f.target.basis, f.source.basis, 1 - arity));
    return g;
}

}  // namespace cinfty
