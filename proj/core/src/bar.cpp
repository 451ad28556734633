#include "cinfty/bar.hpp"

#include <algorithm>
#include <cassert>

#include "cinfty/sparse_matrix.hpp"

namespace cinfty {

int word_degree(const BarWord& w, const GradedBasis& basis)
{
    int d = 0;
    for (int i : w)
        d += basis.degree(i);
    return d;
}

std::vector<int> word_degrees(const BarWord& w, const GradedBasis& basis)
{
    std::vector<int> out;
    out.reserve(w.size());
    for (int i : w)
        out.push_back(basis.degree(i));
    return out;
}

std::string word_str(const BarWord& w, const GradedBasis& basis)
{
    std::string s = "[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            s += ",";
        s += basis.name(w[i]);
    }
    return s + "]";
}

BarElement BarElement::single(BarWord w, Rational c)
{
    BarElement e;
    e.add(w, c);
    return e;
}

void BarElement::add(const BarWord& w, const Rational& c)
{
    if (c == 0)
        return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, c);
    } else {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

void BarElement::add(const BarElement& other, const Rational& scale)
{
    for (const auto& [w, c] : other.terms_)
        add(w, c * scale);
}

BarElement BarElement::scaled(const Rational& s) const
{
    BarElement out;
    if (s == 0)
        return out;
    for (const auto& [w, c] : terms_)
        out.terms_.emplace(w, c * s);
    return out;
}

std::string BarElement::str(const GradedBasis& basis) const
{
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& [w, c] : terms_) {
        if (!out.empty())
            out += " + ";
        out += rational_str(c) + "*" + word_str(w, basis);
    }
    return out;
}

std::vector<std::pair<BarWord, BarWord>> comultiply(const BarWord& w)
{
    std::vector<std::pair<BarWord, BarWord>> out;
    out.reserve(w.size() + 1);
    for (std::size_t i = 0; i <= w.size(); ++i)
        out.emplace_back(BarWord(w.begin(), w.begin() + i), BarWord(w.begin() + i, w.end()));
    return out;
}

namespace {

void shuffle_rec(const BarWord& u, std::size_t i, const BarWord& v, std::size_t j,
                 const GradedBasis& basis, BarWord& prefix, int sign, BarElement& out)
{
    if (i == u.size() && j == v.size()) {
        out.add(prefix, sign);
        return;
    }
    if (i < u.size()) {
        prefix.push_back(u[i]);
        shuffle_rec(u, i + 1, v, j, basis, prefix, sign, out);
        prefix.pop_back();
    }
    if (j < v.size()) {
        // v[j] moves past the remaining letters of u.
        int rest = 0;
        for (std::size_t k = i; k < u.size(); ++k)
            rest += basis.degree(u[k]);
        int s = koszul_sign({basis.degree(v[j])}, {rest});
        prefix.push_back(v[j]);
        shuffle_rec(u, i, v, j + 1, basis, prefix, sign * s, out);
        prefix.pop_back();
    }
}

}  // namespace

BarElement shuffle(const BarWord& u, const BarWord& v, const GradedBasis& basis)
{
    BarElement out;
    BarWord prefix;
    prefix.reserve(u.size() + v.size());
    shuffle_rec(u, 0, v, 0, basis, prefix, 1, out);
    return out;
}

GradedVector MultilinearMap::apply(const BarWord& args) const
{
    assert(static_cast<int>(args.size()) == arity);
    auto it = table.find(args);
    return it == table.end() ? GradedVector{} : it->second;
}

bool MultilinearMap::is_zero() const
{
    for (const auto& [k, v] : table)
        if (!v.is_zero())
            return false;
    return true;
}

void MultilinearMap::add_value(const BarWord& args, const GradedVector& v)
{
    auto it = table.find(args);
    if (it == table.end()) {
        if (!v.is_zero())
            table.emplace(args, v);
    } else {
        it->second.add(v);
        if (it->second.is_zero())
            table.erase(it);
    }
}

void MultilinearMap::validate(const GradedBasis& source, const GradedBasis& target) const
{
    for (const auto& [args, v] : table) {
        if (static_cast<int>(args.size()) != arity)
            throw AxiomError("table key arity mismatch");
        if (v.is_zero())
            continue;
        auto deg = v.homogeneous_degree(target);
        int want = word_degree(args, source) + degree;
        if (!deg || *deg != want)
            throw AxiomError("operation value on " + word_str(args, source) +
                             " is not homogeneous of degree " + std::to_string(want));
    }
}

Coderivation::Coderivation(GradedBasis desusp_basis, MultilinearFamily beta)
    : basis_(std::move(desusp_basis)), family_(std::move(beta))
{
    for (const auto& [arity, comp] : family_) {
        assert(arity == comp.arity);
        comp.validate(basis_, basis_);
    }
}

BarElement Coderivation::apply(const BarWord& w) const
{
    const int n = static_cast<int>(w.size());
    BarElement out;
    for (const auto& [j, comp] : family_) {
        if (j > n)
            continue;
        for (int k = 0; k + j <= n; ++k) {
            BarWord args(w.begin() + k, w.begin() + k + j);
            GradedVector val = comp.apply(args);
            if (val.is_zero())
                continue;
            int prefix_deg = 0;
            for (int t = 0; t < k; ++t)
                prefix_deg += basis_.degree(w[t]);
            int sign = koszul_sign({comp.degree}, {prefix_deg});
            for (const auto& [letter, coeff] : val.terms()) {
                BarWord nw;
                nw.reserve(n - j + 1);
                nw.insert(nw.end(), w.begin(), w.begin() + k);
                nw.push_back(letter);
                nw.insert(nw.end(), w.begin() + k + j, w.end());
                out.add(nw, coeff * sign);
            }
        }
    }
    return out;
}

BarElement Coderivation::apply(const BarElement& e) const
{
    BarElement out;
    for (const auto& [w, c] : e.terms())
        out.add(apply(w), c);
    return out;
}

CoalgebraMap::CoalgebraMap(GradedBasis source, GradedBasis target, MultilinearFamily alpha)
    : source_(std::move(source)), target_(std::move(target)), family_(std::move(alpha))
{
    for (const auto& [arity, comp] : family_) {
        assert(arity == comp.arity);
        comp.validate(source_, target_);
    }
}

namespace {

// Extend partial products of applied blocks into full words.
void expand_blocks(const std::vector<GradedVector>& block_values, std::size_t i,
                   BarWord& word, const Rational& coeff, BarElement& out)
{
    if (i == block_values.size()) {
        out.add(word, coeff);
        return;
    }
    for (const auto& [letter, c] : block_values[i].terms()) {
        word.push_back(letter);
        expand_blocks(block_values, i + 1, word, coeff * c, out);
        word.pop_back();
    }
}

void compositions_rec(const BarWord& w, std::size_t from, const GradedBasis& source,
                      const MultilinearFamily& family, std::vector<GradedVector>& blocks,
                      int sign, int degree_so_far, BarElement& out)
{
    if (from == w.size()) {
        BarWord word;
        word.reserve(blocks.size());
        expand_blocks(blocks, 0, word, sign, out);
        return;
    }
    for (const auto& [k, comp] : family) {
        if (from + k > w.size())
            continue;
        BarWord args(w.begin() + from, w.begin() + from + k);
        GradedVector val = comp.apply(args);
        if (val.is_zero())
            continue;
        // The component moves past the blocks consumed so far.
        int s = koszul_sign({comp.degree}, {degree_so_far});
        blocks.push_back(std::move(val));
        compositions_rec(w, from + k, source, family, blocks, sign * s,
                         degree_so_far + word_degree(args, source), out);
        blocks.pop_back();
    }
}

}  // namespace

BarElement CoalgebraMap::apply(const BarWord& w) const
{
    if (w.empty())
        return BarElement::single({}, 1);
    BarElement out;
    std::vector<GradedVector> blocks;
    compositions_rec(w, 0, source_, family_, blocks, 1, 0, out);
    return out;
}

BarElement CoalgebraMap::apply(const BarElement& e) const
{
    BarElement out;
    for (const auto& [w, c] : e.terms())
        out.add(apply(w), c);
    return out;
}

namespace {

void words_rec(const GradedBasis& basis, int remaining, BarWord& word,
               std::vector<BarWord>& out)
{
    if (remaining == 0) {
        out.push_back(word);
        return;
    }
    for (int i = 0; i < basis.size(); ++i) {
        int d = basis.degree(i);
        if (d > remaining)
            continue;
        word.push_back(i);
        words_rec(basis, remaining - d, word, out);
        word.pop_back();
    }
}

void check_connected(const GradedBasis& basis)
{
    for (int i = 0; i < basis.size(); ++i)
        if (basis.degree(i) < 1)
            throw AxiomError("word enumeration needs a 1-connected basis "
                             "(desuspended degree >= 1), generator '" +
                             basis.name(i) + "' has degree " + std::to_string(basis.degree(i)));
}

}  // namespace

std::vector<BarWord> words_of_degree(const GradedBasis& basis, int degree)
{
    check_connected(basis);
    std::vector<BarWord> out;
    if (degree <= 0)
        return out;
    BarWord word;
    words_rec(basis, degree, word, out);
    return out;
}

std::vector<BarWord> words_up_to_degree(const GradedBasis& basis, int degree)
{
    std::vector<BarWord> out;
    for (int d = 1; d <= degree; ++d) {
        auto w = words_of_degree(basis, d);
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

std::vector<BarWord> words_of_length(const GradedBasis& basis, int length)
{
    std::vector<BarWord> out;
    BarWord word;
    std::function<void()> rec = [&]() {
        if (static_cast<int>(word.size()) == length) {
            out.push_back(word);
            return;
        }
        for (int i = 0; i < basis.size(); ++i) {
            word.push_back(i);
            rec();
            word.pop_back();
        }
    };
    rec();
    return out;
}

std::vector<BarWord> words_of_length_capped(const GradedBasis& basis, int length,
                                            int max_degree)
{
    std::vector<BarWord> out;
    BarWord word;
    std::function<void(int)> rec = [&](int deg) {
        if (static_cast<int>(word.size()) == length) {
            out.push_back(word);
            return;
        }
        for (int i = 0; i < basis.size(); ++i) {
            int d = basis.degree(i);
            if (deg + d > max_degree)
                continue;
            word.push_back(i);
            rec(deg + d);
            word.pop_back();
        }
    };
    rec(0);
    return out;
}

std::vector<BarElement> arity_shuffle_span(const GradedBasis& basis, int arity,
                                           int degree_cap)
{
    std::vector<BarElement> out;
    for (int k = 1; k <= arity / 2; ++k)
        for (const auto& u : words_of_length_capped(basis, k, degree_cap - (arity - k)))
            for (const auto& v : words_of_length_capped(basis, arity - k,
                                                        degree_cap -
                                                            word_degree(u, basis))) {
                BarElement s = shuffle(u, v, basis);
                if (!s.is_zero())
                    out.push_back(std::move(s));
            }
    return out;
}

WordIndex::WordIndex(std::vector<BarWord> ws) : words(std::move(ws))
{
    for (int i = 0; i < size(); ++i)
        pos.emplace(words[i], i);
}

int WordIndex::at(const BarWord& w) const
{
    auto it = pos.find(w);
    if (it == pos.end())
        throw AxiomError("word outside the indexed range");
    return it->second;
}

namespace {

std::vector<BarElement> reduce_spanning(const std::vector<BarElement>& span,
                                        const WordIndex& index)
{
    SparseMatrix rows(0, index.size());
    std::vector<BarElement> basis;
    std::vector<int> kept;
    SparseMatrix m(static_cast<int>(span.size()), index.size());
    for (int r = 0; r < static_cast<int>(span.size()); ++r)
        for (const auto& [w, c] : span[r].terms())
            m.set(r, index.at(w), c);
    for (int r : independent_rows(m))
        basis.push_back(span[r]);
    return basis;
}

}  // namespace

std::vector<BarElement> shuffle_decomposables(const GradedBasis& basis, int word_length)
{
    assert(word_length >= 2);
    std::vector<BarElement> span;
    for (int k = 1; k <= word_length / 2; ++k) {
        for (const auto& u : words_of_length(basis, k))
            for (const auto& v : words_of_length(basis, word_length - k)) {
                BarElement s = shuffle(u, v, basis);
                if (!s.is_zero())
                    span.push_back(std::move(s));
            }
    }
    WordIndex index(words_of_length(basis, word_length));
    return reduce_spanning(span, index);
}

std::vector<BarElement> shuffle_decomposables_in_degree(const GradedBasis& basis, int degree)
{
    std::vector<BarElement> span;
    for (int du = 1; du <= degree - 1; ++du) {
        int dv = degree - du;
        if (du > dv)
            break;
        for (const auto& u : words_of_degree(basis, du))
            for (const auto& v : words_of_degree(basis, dv)) {
                BarElement s = shuffle(u, v, basis);
                if (!s.is_zero())
                    span.push_back(std::move(s));
            }
    }
    WordIndex index(words_of_degree(basis, degree));
    return reduce_spanning(span, index);
}

MultilinearFamily invert_coalgebra_family(const GradedBasis& source,
                                          const GradedBasis& target,
                                          const MultilinearFamily& alpha, int max_arity)
{
    auto alpha1_it = alpha.find(1);
    if (alpha1_it == alpha.end())
        throw AxiomError("arity-1 component is zero, not invertible");
    const MultilinearMap& a1 = alpha1_it->second;
    if (a1.degree != 0)
        throw AxiomError("arity-1 component must have degree 0");

    std::map<int, std::vector<int>> s_slices, t_slices;
    for (int i = 0; i < source.size(); ++i)
        s_slices[source.degree(i)].push_back(i);
    for (int i = 0; i < target.size(); ++i)
        t_slices[target.degree(i)].push_back(i);

    MultilinearMap psi1;
    psi1.arity = 1;
    psi1.degree = 0;
    for (const auto& [d, tgens] : t_slices) {
        auto it = s_slices.find(d);
        std::vector<int> sgens = it == s_slices.end() ? std::vector<int>{} : it->second;
        if (sgens.size() != tgens.size())
            throw AxiomError("arity-1 component is not an isomorphism in degree " +
                             std::to_string(d));
        SparseMatrix m(static_cast<int>(tgens.size()), static_cast<int>(sgens.size()));
        for (std::size_t j = 0; j < sgens.size(); ++j) {
            GradedVector img = a1.apply({sgens[j]});
            for (std::size_t r = 0; r < tgens.size(); ++r)
                if (img.coeff(tgens[r]) != 0)
                    m.set(static_cast<int>(r), static_cast<int>(j), img.coeff(tgens[r]));
        }
        for (std::size_t r = 0; r < tgens.size(); ++r) {
            std::vector<Rational> e(tgens.size(), 0);
            e[r] = 1;
            auto sol = solve(m, e);
            if (!sol)
                throw AxiomError("arity-1 component is singular in degree " +
                                 std::to_string(d));
            GradedVector v;
            for (std::size_t j = 0; j < sgens.size(); ++j)
                v.add(sgens[j], (*sol)[j]);
            if (!v.is_zero())
                psi1.table.emplace(BarWord{tgens[r]}, std::move(v));
        }
    }
    for (const auto& [d, sgens] : s_slices)
        if (!t_slices.count(d) && !sgens.empty())
            throw AxiomError("arity-1 component is not an isomorphism in degree " +
                             std::to_string(d));

    MultilinearFamily psi;
    psi.emplace(1, std::move(psi1));
    CoalgebraMap F(source, target, alpha);

    for (int n = 2; n <= max_arity; ++n) {
        MultilinearMap comp;
        comp.arity = n;
        comp.degree = 0;
        for (const auto& tuple : words_of_length_capped(target, n, source.max_degree())) {
            std::vector<GradedVector> subs;
            subs.reserve(tuple.size());
            for (int letter : tuple)
                subs.push_back(psi.at(1).apply({letter}));
            GradedVector acc;
            BarWord word(tuple.size(), 0);
            std::function<void(std::size_t, Rational)> expand = [&](std::size_t i,
                                                                    Rational coeff) {
                if (i == subs.size()) {
                    BarElement through = F.apply(word);
                    for (const auto& [w, c] : through.terms()) {
                        int len = static_cast<int>(w.size());
                        if (len >= n)
                            continue;
                        auto it = psi.find(len);
                        if (it == psi.end())
                            continue;
                        acc.add(it->second.apply(w), c * coeff * -1);
                    }
                    return;
                }
                for (const auto& [letter, c] : subs[i].terms()) {
                    word[i] = letter;
                    expand(i + 1, coeff * c);
                }
            };
            expand(0, 1);
            if (!acc.is_zero())
                comp.table.emplace(tuple, std::move(acc));
        }
        if (!comp.table.empty())
            psi.emplace(n, std::move(comp));
    }
    return psi;
}

int suspension_twist(const std::vector<int>& desusp_degrees)
{
    int sign = 1;
    for (std::size_t l = 1; l < desusp_degrees.size(); ++l) {
        std::vector<int> prefix(desusp_degrees.begin(), desusp_degrees.begin() + l);
        sign *= koszul_sign(prefix, {1});
    }
    return sign;
}

}  // namespace cinfty
