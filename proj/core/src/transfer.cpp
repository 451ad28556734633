#include "cinfty/transfer.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <random>
#include <set>

#include "cinfty/sparse_matrix.hpp"

namespace cinfty {

GradedVector DgAlgebra::mul(const GradedVector& x, const GradedVector& y) const
{
    GradedVector out;
    for (const auto& [i, ci] : x.terms()) {
        for (const auto& [j, cj] : y.terms()) {
            Rational c = ci * cj;
            if (i == unit)
                out.add(j, c);
            else if (j == unit)
                out.add(i, c);
            else
                out.add(product.apply({i, j}), c);
        }
    }
    return out;
}

GradedBasis DgAlgebra::reduced_basis() const
{
    std::vector<GradedBasis::Generator> gens;
    for (int i = 0; i < basis.size(); ++i)
        if (i != unit)
            gens.push_back(basis.generators()[i]);
    return GradedBasis(std::move(gens));
}

std::vector<int> DgAlgebra::reduced_to_full() const
{
    std::vector<int> out;
    for (int i = 0; i < basis.size(); ++i)
        if (i != unit)
            out.push_back(i);
    return out;
}

void validate_dga(const DgAlgebra& a)
{
    if (a.unit < 0 || a.unit >= a.basis.size())
        throw AxiomError("unit generator missing");
    if (a.basis.degree(a.unit) != 0)
        throw AxiomError("unit must have degree 0");
    for (int i = 0; i < a.basis.size(); ++i) {
        if (i == a.unit)
            continue;
        if (a.basis.degree(i) < 2)
            throw AxiomError("1-connectedness: generator '" + a.basis.name(i) +
                             "' has degree " + std::to_string(a.basis.degree(i)));
    }
    if (!a.differential.image(a.unit).is_zero())
        throw AxiomError("d(unit) != 0");
    if (a.product.arity != 2 || a.product.degree != 0)
        throw AxiomError("product must be a degree-0 arity-2 operation");
    a.product.validate(a.basis, a.basis);
    for (const auto& [args, v] : a.product.table)
        if (args[0] == a.unit || args[1] == a.unit)
            throw AxiomError("unit products are implicit; remove them from the table");

    auto e = [&](int i) {
        GradedVector v;
        v.set(i, 1);
        return v;
    };

    // d^2 = 0
    for (int i = 0; i < a.basis.size(); ++i)
        if (!a.differential.apply(a.differential.image(i)).is_zero())
            throw AxiomError("d^2 != 0 on '" + a.basis.name(i) + "'");

    // Leibniz: d(xy) = dx*y + (-1)^{deg x} x*dy
    for (int i = 0; i < a.basis.size(); ++i) {
        if (i == a.unit)
            continue;
        for (int j = 0; j < a.basis.size(); ++j) {
            if (j == a.unit)
                continue;
            GradedVector lhs = a.differential.apply(a.mul(e(i), e(j)));
            GradedVector rhs = a.mul(a.differential.image(i), e(j));
            int sign = koszul_sign({a.basis.degree(i)}, {1});
            rhs.add(a.mul(e(i), a.differential.image(j)), sign);
            rhs.add(lhs, -1);
            if (!rhs.is_zero())
                throw AxiomError("Leibniz rule fails on ('" + a.basis.name(i) + "','" +
                                 a.basis.name(j) + "')");
        }
    }

    // Associativity
    for (int i = 0; i < a.basis.size(); ++i)
        for (int j = 0; j < a.basis.size(); ++j)
            for (int k = 0; k < a.basis.size(); ++k) {
                GradedVector lhs = a.mul(a.mul(e(i), e(j)), e(k));
                lhs.add(a.mul(e(i), a.mul(e(j), e(k))), -1);
                if (!lhs.is_zero())
                    throw AxiomError("associativity fails on ('" + a.basis.name(i) + "','" +
                                     a.basis.name(j) + "','" + a.basis.name(k) + "')");
            }

    if (a.commutative) {
        for (int i = 0; i < a.basis.size(); ++i)
            for (int j = 0; j < a.basis.size(); ++j) {
                int sign = koszul_sign({a.basis.degree(i)}, {a.basis.degree(j)});
                GradedVector lhs = a.mul(e(i), e(j));
                lhs.add(a.mul(e(j), e(i)), -sign);
                if (!lhs.is_zero())
                    throw AxiomError("graded commutativity fails on ('" + a.basis.name(i) +
                                     "','" + a.basis.name(j) + "')");
            }
    }
}

AInfStructure dga_as_ainf(const DgAlgebra& a)
{
    GradedBasis red = a.reduced_basis();
    auto r2f = a.reduced_to_full();
    std::map<int, int> f2r;
    for (int r = 0; r < static_cast<int>(r2f.size()); ++r)
        f2r[r2f[r]] = r;

    auto remap = [&](const GradedVector& v) {
        GradedVector out;
        for (const auto& [i, c] : v.terms()) {
            auto it = f2r.find(i);
            if (it == f2r.end())
                throw AxiomError("value hits the unit generator");
            out.add(it->second, c);
        }
        return out;
    };

    MultiOp m1;
    m1.arity = 1;
    m1.degree = 1;
    for (int r = 0; r < red.size(); ++r) {
        GradedVector img = remap(a.differential.image(r2f[r]));
        if (!img.is_zero())
            m1.table.emplace(BarWord{r}, std::move(img));
    }
    MultiOp m2;
    m2.arity = 2;
    m2.degree = 0;
    for (const auto& [args, v] : a.product.table) {
        if (v.is_zero())
            continue;
        m2.table.emplace(BarWord{f2r.at(args[0]), f2r.at(args[1])}, remap(v));
    }

    AInfStructure s;
    s.basis = red;
    s.unit = a.basis.generators()[a.unit];
    if (!m1.is_zero())
        s.ops.emplace(1, std::move(m1));
    if (!m2.is_zero())
        s.ops.emplace(2, std::move(m2));
    s.arity_bound = 2;
    s.minimal = !s.ops.count(1);
    s.cinf = a.commutative;
    return s;
}

namespace {

std::map<int, std::vector<int>> degree_slices(const GradedBasis& basis)
{
    std::map<int, std::vector<int>> out;
    for (int i = 0; i < basis.size(); ++i)
        out[basis.degree(i)].push_back(i);
    return out;
}

struct DegreeSplit {
    std::vector<int> gens;                     // full-basis indices at this degree
    std::vector<std::vector<Rational>> bound;  // boundary basis, coords over gens
    std::vector<std::vector<Rational>> reps;   // homology representatives
    std::vector<int> comp;                     // complement coordinates (positions in gens)
    std::vector<std::vector<Rational>> hpre;   // preimage in degree d-1 of each boundary
};

}  // namespace

TransferData build_transfer_data(const DgAlgebra& a, std::optional<unsigned> seed)
{
    auto slices = degree_slices(a.basis);
    std::optional<std::mt19937> rng;
    if (seed)
        rng.emplace(*seed);

    auto matrix_at = [&](int d) {
        const auto lo = slices.count(d) ? slices.at(d) : std::vector<int>{};
        const auto hi = slices.count(d + 1) ? slices.at(d + 1) : std::vector<int>{};
        SparseMatrix m(static_cast<int>(hi.size()), static_cast<int>(lo.size()));
        for (std::size_t j = 0; j < lo.size(); ++j) {
            GradedVector img = a.differential.image(lo[j]);
            for (std::size_t r = 0; r < hi.size(); ++r)
                if (img.coeff(hi[r]) != 0)
                    m.set(static_cast<int>(r), static_cast<int>(j), img.coeff(hi[r]));
        }
        return m;
    };

    std::map<int, DegreeSplit> split;
    for (const auto& [d, gens] : slices) {
        DegreeSplit s;
        s.gens = gens;
        int dim = static_cast<int>(gens.size());

        SparseMatrix d_out = matrix_at(d);
        SparseMatrix d_in = matrix_at(d - 1);

        // Boundary basis: independent columns of d_in.
        SparseMatrix cand(0, dim);
        for (int j = 0; j < d_in.cols(); ++j) {
            std::map<int, Rational> col;
            for (int r = 0; r < d_in.rows(); ++r)
                if (d_in.at(r, j) != 0)
                    col.emplace(r, d_in.at(r, j));
            cand.append_row(col);
        }
        for (int r : independent_rows(cand)) {
            std::vector<Rational> v(dim, 0);
            for (const auto& [c, val] : cand.row(r))
                v[c] = val;
            s.bound.push_back(std::move(v));
        }

        // Preimages of the boundary basis inside the complement chosen one
        // degree below; this is what makes proj h = 0 and h h = 0 exact.
        if (!s.bound.empty()) {
            const DegreeSplit& prev = split.at(d - 1);
            SparseMatrix restricted(dim, static_cast<int>(prev.comp.size()));
            for (std::size_t j = 0; j < prev.comp.size(); ++j)
                for (int r = 0; r < dim; ++r)
                    if (d_in.at(r, prev.comp[j]) != 0)
                        restricted.set(r, static_cast<int>(j), d_in.at(r, prev.comp[j]));
            for (const auto& b : s.bound) {
                auto sol = solve(restricted, b);
                if (!sol)
                    throw AxiomError("internal: boundary without complement preimage");
                std::vector<Rational> pre(prev.gens.size(), 0);
                for (std::size_t j = 0; j < prev.comp.size(); ++j)
                    pre[prev.comp[j]] = (*sol)[j];
                s.hpre.push_back(std::move(pre));
            }
        }

        // Homology representatives: cycles extending the boundary span.
        SparseMatrix span(0, dim);
        for (const auto& b : s.bound) {
            std::map<int, Rational> row;
            for (int c = 0; c < dim; ++c)
                if (b[c] != 0)
                    row.emplace(c, b[c]);
            span.append_row(row);
        }
        int nb = span.rows();
        std::vector<std::vector<Rational>> cycles = kernel_basis(d_out);
        for (const auto& z : cycles) {
            std::map<int, Rational> row;
            for (int c = 0; c < dim; ++c)
                if (z[c] != 0)
                    row.emplace(c, z[c]);
            span.append_row(row);
        }
        auto kept = independent_rows(span);
        for (int r : kept) {
            if (r < nb)
                continue;
            std::vector<Rational> rep = cycles[r - nb];
            if (rng) {
                std::uniform_int_distribution<int> coeff(-2, 2);
                for (const auto& b : s.bound) {
                    int c = coeff(*rng);
                    if (c == 0)
                        continue;
                    for (int k = 0; k < dim; ++k)
                        rep[k] += Rational(c) * b[k];
                }
            }
            s.reps.push_back(std::move(rep));
        }

        // Complement: coordinate vectors completing the cycles to all of A_d.
        SparseMatrix full(0, dim);
        for (const auto& b : s.bound) {
            std::map<int, Rational> row;
            for (int c = 0; c < dim; ++c)
                if (b[c] != 0)
                    row.emplace(c, b[c]);
            full.append_row(row);
        }
        for (const auto& rep : s.reps) {
            std::map<int, Rational> row;
            for (int c = 0; c < dim; ++c)
                if (rep[c] != 0)
                    row.emplace(c, rep[c]);
            full.append_row(row);
        }
        int base = full.rows();
        for (int c = 0; c < dim; ++c)
            full.append_row({{c, Rational(1)}});
        for (int r : independent_rows(full))
            if (r >= base)
                s.comp.push_back(r - base);

        split.emplace(d, std::move(s));
    }

    // Homology basis with stable, readable names.
    std::vector<GradedBasis::Generator> hgens;
    std::set<std::string> used;
    std::map<int, std::vector<int>> class_pos;  // degree -> positions in hgens
    for (const auto& [d, s] : split) {
        for (std::size_t k = 0; k < s.reps.size(); ++k) {
            std::string name;
            int support = 0, pos = -1;
            for (int c = 0; c < static_cast<int>(s.reps[k].size()); ++c)
                if (s.reps[k][c] != 0) {
                    ++support;
                    pos = c;
                }
            if (support == 1 && s.reps[k][pos] == 1)
                name = a.basis.name(s.gens[pos]);
            if (name.empty() || used.count(name))
                name = "h" + std::to_string(d) + "_" + std::to_string(k);
            used.insert(name);
            class_pos[d].push_back(static_cast<int>(hgens.size()));
            hgens.push_back({name, d});
        }
    }
    GradedBasis homology(hgens);

    // section
    std::map<int, GradedVector> sect;
    for (const auto& [d, s] : split) {
        for (std::size_t k = 0; k < s.reps.size(); ++k) {
            GradedVector v;
            for (int c = 0; c < static_cast<int>(s.gens.size()); ++c)
                if (s.reps[k][c] != 0)
                    v.add(s.gens[c], s.reps[k][c]);
            sect[class_pos.at(d)[k]] = std::move(v);
        }
    }

    // projection and homotopy, generator by generator via the exact
    // decomposition A_d = reps + boundaries + complement.
    std::map<int, GradedVector> proj, homo;
    for (const auto& [d, s] : split) {
        int dim = static_cast<int>(s.gens.size());
        int nr = static_cast<int>(s.reps.size());
        int nb = static_cast<int>(s.bound.size());
        SparseMatrix sys(dim, nr + nb + static_cast<int>(s.comp.size()));
        for (int j = 0; j < nr; ++j)
            for (int r = 0; r < dim; ++r)
                if (s.reps[j][r] != 0)
                    sys.set(r, j, s.reps[j][r]);
        for (int j = 0; j < nb; ++j)
            for (int r = 0; r < dim; ++r)
                if (s.bound[j][r] != 0)
                    sys.set(r, nr + j, s.bound[j][r]);
        for (std::size_t j = 0; j < s.comp.size(); ++j)
            sys.set(s.comp[j], nr + nb + static_cast<int>(j), 1);

        const auto* prev = split.count(d - 1) ? &split.at(d - 1) : nullptr;
        for (int g = 0; g < dim; ++g) {
            std::vector<Rational> e(dim, 0);
            e[g] = 1;
            auto sol = solve(sys, e);
            if (!sol)
                throw AxiomError("internal: splitting does not span degree " +
                                 std::to_string(d));
            GradedVector pv;
            for (int j = 0; j < nr; ++j)
                if ((*sol)[j] != 0)
                    pv.add(class_pos.at(d)[j], (*sol)[j]);
            if (!pv.is_zero())
                proj[s.gens[g]] = std::move(pv);
            GradedVector hv;
            for (int j = 0; j < nb; ++j) {
                const Rational& c = (*sol)[nr + j];
                if (c == 0)
                    continue;
                assert(prev);
                for (int k = 0; k < static_cast<int>(s.hpre[j].size()); ++k)
                    if (s.hpre[j][k] != 0)
                        hv.add(prev->gens[k], c * s.hpre[j][k]);
            }
            if (!hv.is_zero())
                homo[s.gens[g]] = std::move(hv);
        }
    }

    TransferData t;
    t.homology = homology;
    t.section = GradedMap(homology, a.basis, 0, std::move(sect));
    t.projection = GradedMap(a.basis, homology, 0, std::move(proj));
    t.homotopy = GradedMap(a.basis, a.basis, -1, std::move(homo));
    return t;
}

void validate_transfer_data(const DgAlgebra& a, const TransferData& t)
{
    for (int k = 0; k < t.homology.size(); ++k) {
        GradedVector e;
        e.set(k, 1);
        GradedVector r = t.projection.apply(t.section.image(k));
        r.add(e, -1);
        if (!r.is_zero())
            throw AxiomError("projection . section != id");
        if (!t.homotopy.apply(t.section.image(k)).is_zero())
            throw AxiomError("homotopy . section != 0");
        if (!a.differential.apply(t.section.image(k)).is_zero())
            throw AxiomError("section image is not a cycle");
    }
    for (int g = 0; g < a.basis.size(); ++g) {
        GradedVector x;
        x.set(g, 1);
        GradedVector lhs = a.differential.apply(t.homotopy.apply(x));
        lhs.add(t.homotopy.apply(a.differential.apply(x)));
        GradedVector rhs = x;
        rhs.add(t.section.apply(t.projection.apply(x)), -1);
        lhs.add(rhs, -1);
        if (!lhs.is_zero())
            throw AxiomError("d h + h d != id - section projection");
        if (!t.projection.apply(t.homotopy.apply(x)).is_zero())
            throw AxiomError("projection . homotopy != 0");
        if (!t.homotopy.apply(t.homotopy.apply(x)).is_zero())
            throw AxiomError("homotopy . homotopy != 0");
    }
}

namespace {

// One arity-1 bar-level map from a GradedMap restricted to the reduced basis.
MultilinearMap reduced_unary(const GradedMap& m, const std::vector<int>& src_r2f,
                             const std::map<int, int>& dst_f2r, int bar_degree)
{
    MultilinearMap out;
    out.arity = 1;
    out.degree = bar_degree;
    for (int r = 0; r < static_cast<int>(src_r2f.size()); ++r) {
        const GradedVector& img = m.image(src_r2f[r]);
        GradedVector v;
        for (const auto& [i, c] : img.terms()) {
            auto it = dst_f2r.find(i);
            if (it == dst_f2r.end())
                throw AxiomError("reduced map hits the unit generator");
            v.add(it->second, c);
        }
        if (!v.is_zero())
            out.table.emplace(BarWord{r}, std::move(v));
    }
    return out;
}

GradedVector family_apply(const MultilinearFamily& fam, int arity, const BarWord& args)
{
    auto it = fam.find(arity);
    if (it == fam.end())
        return {};
    return it->second.apply(args);
}

GradedVector unary_apply(const MultilinearMap& m, const GradedVector& v)
{
    GradedVector out;
    for (const auto& [i, c] : v.terms())
        out.add(m.apply({i}), c);
    return out;
}

GradedVector eval_on_element(const MultilinearMap& m, const BarElement& e)
{
    GradedVector out;
    for (const auto& [w, c] : e.terms())
        out.add(m.apply(w), c);
    return out;
}

struct TransferState {
    GradedBasis VH, VA;        // desuspended reduced bases
    MultilinearMap D;          // target differential (degree +1)
    const MultilinearMap* M2;  // target product, twist baked (degree +1)
    MultilinearMap proj, homo; // bar-level projection / homotopy
    MultilinearFamily phi;     // morphism components (degree 0)
    MultilinearFamily beta;    // structure components (degree +1), arity >= 2

    MultilinearMap defect(int n) const
    {
        MultilinearMap U;
        U.arity = n;
        U.degree = 1;
        int cap = VA.max_degree() - 1;
        for (const auto& tuple : words_of_length_capped(VH, n, cap)) {
            GradedVector acc;
            for (int k = 1; k < n; ++k) {
                if (!M2)
                    break;
                GradedVector va =
                    family_apply(phi, k, BarWord(tuple.begin(), tuple.begin() + k));
                if (va.is_zero())
                    continue;
                GradedVector vb =
                    family_apply(phi, n - k, BarWord(tuple.begin() + k, tuple.end()));
                if (vb.is_zero())
                    continue;
                for (const auto& [i, ci] : va.terms())
                    for (const auto& [j, cj] : vb.terms())
                        acc.add(M2->apply({i, j}), ci * cj);
            }
            for (int j = 2; j <= n - 1; ++j) {
                auto bit = beta.find(j);
                if (bit == beta.end())
                    continue;
                for (int k = 0; k + j <= n; ++k) {
                    int prefix = 0;
                    for (int t = 0; t < k; ++t)
                        prefix += VH.degree(tuple[t]);
                    int sign = koszul_sign({1}, {prefix});
                    GradedVector val =
                        bit->second.apply(BarWord(tuple.begin() + k, tuple.begin() + k + j));
                    for (const auto& [letter, c] : val.terms()) {
                        BarWord sub;
                        sub.reserve(n - j + 1);
                        sub.insert(sub.end(), tuple.begin(), tuple.begin() + k);
                        sub.push_back(letter);
                        sub.insert(sub.end(), tuple.begin() + k + j, tuple.end());
                        acc.add(family_apply(phi, n - j + 1, sub), c * sign * -1);
                    }
                }
            }
            if (!acc.is_zero())
                U.table.emplace(tuple, std::move(acc));
        }
        return U;
    }

    // Hochschild differential of a degree-0 arity-(n-1) cochain p against the
    // transferred product beta_2, at the bar level.
    GradedVector hdelta_apply(const MultilinearMap& p, const BarWord& w) const
    {
        auto b2 = beta.find(2);
        if (b2 == beta.end())
            return {};
        const MultilinearMap& m2 = b2->second;
        int n = static_cast<int>(w.size());
        GradedVector out;
        // beta_2 circ p: insert p into either slot of beta_2 (p has degree 0,
        // both insertion signs are +1).
        GradedVector left = p.apply(BarWord(w.begin(), w.end() - 1));
        for (const auto& [i, c] : left.terms())
            out.add(m2.apply({i, w.back()}), c);
        GradedVector right = p.apply(BarWord(w.begin() + 1, w.end()));
        for (const auto& [i, c] : right.terms())
            out.add(m2.apply({w.front(), i}), c);
        // minus p circ beta_2
        for (int k = 0; k + 2 <= n; ++k) {
            int prefix = 0;
            for (int t = 0; t < k; ++t)
                prefix += VH.degree(w[t]);
            int sign = koszul_sign({1}, {prefix});
            GradedVector val = m2.apply({w[k], w[k + 1]});
            for (const auto& [letter, c] : val.terms()) {
                BarWord sub;
                sub.insert(sub.end(), w.begin(), w.begin() + k);
                sub.push_back(letter);
                sub.insert(sub.end(), w.begin() + k + 2, w.end());
                out.add(p.apply(sub), -c * sign);
            }
        }
        return out;
    }
};

}  // namespace

static TransferResult transfer_core(const DgAlgebra& a, const TransferData& t,
                                    int max_arity, int max_degree, bool cinf_mode)
{
    (void)max_degree;
    AInfStructure target = dga_as_ainf(a);

    // Reduced homology basis (unit class removed).
    std::vector<int> h_r2f;
    std::vector<GradedBasis::Generator> hgens;
    for (int i = 0; i < t.homology.size(); ++i) {
        if (t.homology.degree(i) == 0)
            continue;
        h_r2f.push_back(i);
        hgens.push_back(t.homology.generators()[i]);
    }
    GradedBasis Hred(hgens);

    std::map<int, int> h_f2r, a_f2r;
    for (int r = 0; r < static_cast<int>(h_r2f.size()); ++r)
        h_f2r[h_r2f[r]] = r;
    auto a_r2f = a.reduced_to_full();
    for (int r = 0; r < static_cast<int>(a_r2f.size()); ++r)
        a_f2r[a_r2f[r]] = r;

    int op_bound = max_feasible_arity(Hred, Hred, 2);
    int mor_bound = max_feasible_arity(Hred, target.basis, 1);
    int need = std::max({op_bound, mor_bound, 2});
    if (max_arity < need)
        throw BoundTooSmall("max arity " + std::to_string(max_arity) +
                            " cuts degree-feasible operations (need " +
                            std::to_string(need) + ")");

    TransferState st;
    st.VH = desuspend(Hred);
    st.VA = desuspend(target.basis);
    MultilinearFamily target_fam = structure_bar_family(target);
    if (auto it = target_fam.find(1); it != target_fam.end())
        st.D = it->second;
    else {
        st.D.arity = 1;
        st.D.degree = 1;
    }
    auto m2_it = target_fam.find(2);
    st.M2 = m2_it == target_fam.end() ? nullptr : &m2_it->second;

    st.proj = reduced_unary(t.projection, a_r2f, h_f2r, 0);
    st.homo = reduced_unary(t.homotopy, a_r2f, a_f2r, -1);
    st.phi.emplace(1, reduced_unary(t.section, h_r2f, a_f2r, 0));

    auto compose_unary = [](const MultilinearMap& outer, const MultilinearMap& U,
                            const Rational& scale) {
        MultilinearMap out;
        out.arity = U.arity;
        out.degree = U.degree + outer.degree;
        for (const auto& [args, v] : U.table) {
            GradedVector img = unary_apply(outer, v).scaled(scale);
            if (!img.is_zero())
                out.table.emplace(args, std::move(img));
        }
        return out;
    };

    for (int n = 2; n <= need; ++n) {
        MultilinearMap U = st.defect(n);
        MultilinearMap beta_n = compose_unary(st.proj, U, 1);
        MultilinearMap phi_n = compose_unary(st.homo, U, -1);

        if (cinf_mode && n >= 3) {
            // Shuffle defect of the new operation; corrected through a
            // Hochschild perturbation by an arity-(n-1) Harrison cochain.
            int cap = st.VH.max_degree() - 1;
            auto shuffles_n = arity_shuffle_span(st.VH, n, cap);
            bool defective = false;
            for (const auto& s : shuffles_n)
                if (!eval_on_element(beta_n, s).is_zero()) {
                    defective = true;
                    break;
                }
            if (defective) {
                // Unknowns: entries of p on arity-(n-1) tuples (degree 0).
                std::vector<std::pair<BarWord, int>> unknowns;  // (tuple, target gen)
                std::map<std::pair<BarWord, int>, int> unknown_id;
                for (const auto& tuple : words_of_length_capped(st.VH, n - 1, st.VH.max_degree())) {
                    int d = word_degree(tuple, st.VH);
                    for (int g = 0; g < st.VH.size(); ++g) {
                        if (st.VH.degree(g) != d)
                            continue;
                        unknown_id[{tuple, g}] = static_cast<int>(unknowns.size());
                        unknowns.emplace_back(tuple, g);
                    }
                }

                std::vector<std::map<int, Rational>> rows;
                std::vector<Rational> rhs;

                // p itself vanishes on shuffles (keeps phi_{n-1} in the
                // Harrison range after the update).
                for (const auto& s : arity_shuffle_span(st.VH, n - 1, st.VH.max_degree())) {
                    std::map<int, std::map<int, Rational>> per_gen;  // gen -> row
                    for (const auto& [w, c] : s.terms()) {
                        int d = word_degree(w, st.VH);
                        for (int g = 0; g < st.VH.size(); ++g) {
                            if (st.VH.degree(g) != d)
                                continue;
                            auto it = unknown_id.find({w, g});
                            if (it != unknown_id.end())
                                per_gen[g][it->second] += c;
                        }
                    }
                    for (auto& [g, row] : per_gen) {
                        rows.push_back(std::move(row));
                        rhs.push_back(0);
                    }
                }

                // (beta_n + delta p)(shuffle) = 0. delta p is linear in the
                // entries of p; expand through unit unknowns.
                for (const auto& s : shuffles_n) {
                    GradedVector base = eval_on_element(beta_n, s);
                    std::map<int, std::map<int, Rational>> per_gen;
                    for (const auto& [g, c] : base.terms())
                        (void)per_gen[g];
                    for (std::size_t u = 0; u < unknowns.size(); ++u) {
                        MultilinearMap probe;
                        probe.arity = n - 1;
                        probe.degree = 0;
                        GradedVector pv;
                        pv.set(unknowns[u].second, 1);
                        probe.table.emplace(unknowns[u].first, pv);
                        GradedVector dp;
                        for (const auto& [w, c] : s.terms())
                            dp.add(st.hdelta_apply(probe, w), c);
                        for (const auto& [g, c] : dp.terms())
                            per_gen[g][static_cast<int>(u)] += c;
                    }
                    for (auto& [g, row] : per_gen) {
                        rows.push_back(std::move(row));
                        rhs.push_back(-base.coeff(g));
                    }
                }

                SparseMatrix sys(static_cast<int>(rows.size()),
                                 static_cast<int>(unknowns.size()));
                for (int r = 0; r < static_cast<int>(rows.size()); ++r)
                    for (const auto& [c, v] : rows[r])
                        if (v != 0)
                            sys.set(r, c, v);
                auto sol = solve(sys, rhs);
                if (!sol)
                    throw CorrectionUnsolvable(
                        "no Harrison correction at arity " + std::to_string(n));

                MultilinearMap p;
                p.arity = n - 1;
                p.degree = 0;
                for (std::size_t u = 0; u < unknowns.size(); ++u)
                    if ((*sol)[u] != 0) {
                        GradedVector v;
                        v.set(unknowns[u].second, (*sol)[u]);
                        p.add_value(unknowns[u].first, v);
                    }

                // phi_{n-1} += phi_1 . p, then rebuild the arity-n layer.
                auto prev_it = st.phi.find(n - 1);
                if (prev_it == st.phi.end()) {
                    MultilinearMap fresh;
                    fresh.arity = n - 1;
                    fresh.degree = 0;
                    prev_it = st.phi.emplace(n - 1, std::move(fresh)).first;
                }
                auto& phi_prev = prev_it->second;
                const MultilinearMap& phi1 = st.phi.at(1);
                for (const auto& [args, v] : p.table)
                    phi_prev.add_value(args, unary_apply(phi1, v));

                U = st.defect(n);
                beta_n = compose_unary(st.proj, U, 1);
                phi_n = compose_unary(st.homo, U, -1);
                for (const auto& s : shuffles_n)
                    if (!eval_on_element(beta_n, s).is_zero())
                        throw CorrectionUnsolvable(
                            "correction left a shuffle defect at arity " + std::to_string(n));
            }
            for (const auto& s : shuffles_n)
                if (!eval_on_element(phi_n, s).is_zero())
                    throw CorrectionUnsolvable("morphism component keeps a shuffle defect "
                                               "at arity " + std::to_string(n));
        }

        if (!beta_n.is_zero())
            st.beta.emplace(n, std::move(beta_n));
        if (!phi_n.is_zero())
            st.phi.emplace(n, std::move(phi_n));
    }

    AInfStructure H;
    H.basis = Hred;
    for (int i = 0; i < t.homology.size(); ++i)
        if (t.homology.degree(i) == 0)
            H.unit = t.homology.generators()[i];
    H.arity_bound = std::max(2, need);
    H.minimal = true;
    H.cinf = cinf_mode;
    for (const auto& [arity, comp] : st.beta)
        if (!comp.is_zero())
            H.ops.emplace(arity, op_from_bar_component(comp, Hred, Hred, 2 - arity));

    AInfMorphism f{H, target, {}, cinf_mode};
    for (const auto& [arity, comp] : st.phi)
        if (!comp.is_zero())
            f.components.emplace(
                arity, op_from_bar_component(comp, Hred, target.basis, 1 - arity));

    return TransferResult{std::move(H), std::move(f)};
}

TransferResult transfer_ainf(const DgAlgebra& a, const TransferData& t, int max_arity,
                             int max_degree)
{
    return transfer_core(a, t, max_arity, max_degree, false);
}

TransferResult transfer_cinf(const DgAlgebra& a, const TransferData& t, int max_arity,
                             int max_degree)
{
    if (!a.commutative)
        throw AxiomError("transfer_cinf needs a commutative input");
    return transfer_core(a, t, max_arity, max_degree, true);
}

}  // namespace cinfty
