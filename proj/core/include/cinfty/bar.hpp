#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cinfty/graded.hpp"

namespace cinfty {

// A word in the tensor coalgebra on a (desuspended) basis: ordered letters,
// stored as generator indices. The empty word is the coalgebra unit and is
// represented by an empty vector where a signature admits it.
using BarWord = std::vector<int>;

int word_degree(const BarWord& w, const GradedBasis& basis);
std::vector<int> word_degrees(const BarWord& w, const GradedBasis& basis);
std::string word_str(const BarWord& w, const GradedBasis& basis);

// Finite linear combination of bar words; no zero coefficients stored.
class BarElement {
public:
    BarElement() = default;
    static BarElement single(BarWord w, Rational c = 1);

    void add(const BarWord& w, const Rational& c);
    void add(const BarElement& other, const Rational& scale = 1);
    BarElement scaled(const Rational& s) const;

    bool is_zero() const { return terms_.empty(); }
    const std::map<BarWord, Rational>& terms() const { return terms_; }
    std::string str(const GradedBasis& basis) const;

    bool operator==(const BarElement&) const = default;

private:
    std::map<BarWord, Rational> terms_;
};

// All n+1 deconcatenation splits of a word, empty ends included.
std::vector<std::pair<BarWord, BarWord>> comultiply(const BarWord& w);

// Signed sum over all (|u|,|v|)-shuffles, Koszul signs taken in the degrees
// of `basis` (callers pass the desuspended basis). Associative with unit the
// empty word, and graded commutative.
BarElement shuffle(const BarWord& u, const BarWord& v, const GradedBasis& basis);

// One degree-homogeneous arity component of a multilinear operation on the
// tensor coalgebra, table on basis tuples. Keys have length == arity; values
// live over `target`.
struct MultilinearMap {
    int arity = 1;
    int degree = 0;
    std::map<BarWord, GradedVector> table;

    GradedVector apply(const BarWord& args) const;
    bool is_zero() const;
    void add_value(const BarWord& args, const GradedVector& v);
    void validate(const GradedBasis& source, const GradedBasis& target) const;

    bool operator==(const MultilinearMap&) const = default;
};

// Arity-indexed family beta = {beta_i}. Missing arities act as zero.
using MultilinearFamily = std::map<int, MultilinearMap>;

// Unique coderivation on T^c(V) with p_1 d = beta: acts on a word by the
// signed sum over subword replacements, the sign moving each component past
// the prefix letters.
class Coderivation {
public:
    Coderivation(GradedBasis desusp_basis, MultilinearFamily beta);

    const GradedBasis& basis() const { return basis_; }
    const MultilinearFamily& family() const { return family_; }

    BarElement apply(const BarWord& w) const;
    BarElement apply(const BarElement& e) const;

private:
    GradedBasis basis_;
    MultilinearFamily family_;
};

// Unique coalgebra map T^c(V) -> T^c(W) with p_1 F = alpha: acts on a word by
// summing over ordered partitions into blocks, applying alpha blockwise.
class CoalgebraMap {
public:
    CoalgebraMap(GradedBasis source, GradedBasis target, MultilinearFamily alpha);

    const GradedBasis& source() const { return source_; }
    const GradedBasis& target() const { return target_; }
    const MultilinearFamily& family() const { return family_; }

    BarElement apply(const BarWord& w) const;
    BarElement apply(const BarElement& e) const;

private:
    GradedBasis source_, target_;
    MultilinearFamily family_;
};

// All words over `basis` of the given total degree (every letter must have
// degree >= 1, the 1-connected case; throws AxiomError otherwise).
std::vector<BarWord> words_of_degree(const GradedBasis& basis, int degree);
std::vector<BarWord> words_up_to_degree(const GradedBasis& basis, int degree);

// All words of the given length, any degree (finite for 1-connected bases
// only in conjunction with a degree cap; enumeration is plain here).
std::vector<BarWord> words_of_length(const GradedBasis& basis, int length);

// Fixed length with a total-degree cap; pruned enumeration.
std::vector<BarWord> words_of_length_capped(const GradedBasis& basis, int length,
                                            int max_degree);

// Spanning set of the shuffle subspace in a fixed arity, capped by total
// degree. Not reduced to a basis; rows may be dependent.
std::vector<BarElement> arity_shuffle_span(const GradedBasis& basis, int arity,
                                           int degree_cap);

// Inverse of a coalgebra-map family whose arity-1 part is a degree-0
// isomorphism, solved arity by arity from psi . alpha = id. Throws AxiomError
// when alpha_1 is singular.
MultilinearFamily invert_coalgebra_family(const GradedBasis& source,
                                          const GradedBasis& target,
                                          const MultilinearFamily& alpha, int max_arity);

struct WordIndex {
    std::vector<BarWord> words;
    std::map<BarWord, int> pos;

    WordIndex() = default;
    explicit WordIndex(std::vector<BarWord> ws);
    int size() const { return static_cast<int>(words.size()); }
    int at(const BarWord& w) const;
    bool contains(const BarWord& w) const { return pos.count(w) != 0; }
};

// Spanning set {shuffle(u,v) : |u|+|v| = n, both nonempty} reduced to a
// linearly independent list, as elements of the length-n word space.
std::vector<BarElement> shuffle_decomposables(const GradedBasis& basis, int word_length);

// Same, but for all words of one total degree (lengths mixed; shuffles
// preserve both degree and length, so this is the per-degree decomposable
// subspace used by the indecomposables quotient).
std::vector<BarElement> shuffle_decomposables_in_degree(const GradedBasis& basis, int degree);

// Sign of the iterated shift that turns an operation given on original
// degrees into one on desuspended tensor powers: (-1)^(sum_{k<l} deg_k) on a
// tuple with desuspended degrees `degrees`. Assembled from koszul_sign.
int suspension_twist(const std::vector<int>& desusp_degrees);

}  // namespace cinfty
