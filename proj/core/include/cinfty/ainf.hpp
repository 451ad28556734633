#pragma once

#include <optional>
#include <variant>

#include "cinfty/bar.hpp"

namespace cinfty {

// Raw operation tables are written in original degrees: a structure operation
// of arity i has declared degree 2-i, a morphism component 1-i. The bar-level
// counterparts on the desuspended basis (degree +1 resp. 0) are obtained by
// the suspension twist; every sign in the theory is generated there.
using MultiOp = MultilinearMap;

struct AInfStructure {
    GradedBasis basis;  // augmentation ideal only; the unit is never a letter
    std::optional<GradedBasis::Generator> unit;  // kept for serialization
    std::map<int, MultiOp> ops;                  // arity -> raw table
    int arity_bound = 2;
    bool minimal = false;
    bool cinf = false;

    bool operator==(const AInfStructure&) const = default;
};

struct AInfMorphism {
    AInfStructure source, target;
    std::map<int, MultiOp> components;  // arity -> raw table, degree 1-arity
    bool cinf = false;
};

struct SourceTargetMismatch : AxiomError {
    using AxiomError::AxiomError;
};
struct NotIso : AxiomError {
    using AxiomError::AxiomError;
};
struct BoundTooSmall : AxiomError {
    using AxiomError::AxiomError;
};

// Structural validation: declared degrees, homogeneity, arity bounds, flag
// consistency (minimal <=> no arity-1 operation). Throws AxiomError.
void validate_structure(const AInfStructure& s);
void validate_morphism(const AInfMorphism& f);

// Raw tables <-> desuspended (bar-level) families.
MultilinearMap bar_of_op(const MultiOp& op, const GradedBasis& source_original);
MultilinearFamily structure_bar_family(const AInfStructure& s);
MultilinearFamily morphism_bar_family(const AInfMorphism& f);
MultiOp op_from_bar_component(const MultilinearMap& bar_comp, const GradedBasis& source,
                              const GradedBasis& target, int declared_degree);

// The coderivation d_beta on T^c(s^-1 M) extending the desuspended {m_i}.
Coderivation bar_differential(const AInfStructure& s);

struct StasheffWitness {
    BarWord word;      // d(d(word)) != 0
    BarElement image;  // the nonzero value of d^2
};

// Verifies d^2 = 0 on all bar words of total (desuspended) degree <= max_degree;
// equivalent to the arity-wise structure relations in that range.
std::optional<StasheffWitness> check_stasheff(const AInfStructure& s, int max_degree);

struct ShuffleWitness {
    int arity = 0;
    BarWord left, right;  // m_arity(shuffle(left, right)) != 0
    GradedVector value;   // over the desuspended basis
};

// Shuffle-vanishing of every operation, checked on all splits of basis-letter
// words (they span all shuffles by multilinearity).
std::optional<ShuffleWitness> check_cinf(const AInfStructure& s);

// Same test applied to morphism components.
std::optional<ShuffleWitness> check_cinf_components(const GradedBasis& desusp_source,
                                                    const GradedBasis& desusp_target,
                                                    const MultilinearFamily& family);

struct MorphismWitness {
    BarWord word;       // F(d w) != d'(F w)
    BarElement defect;  // in the target bar construction
};

std::optional<MorphismWitness> check_morphism(const AInfMorphism& f, int max_degree);

AInfMorphism identity_morphism(const AInfStructure& s);

// Arity-wise composition; the bar construction of the result is the composite
// of the bar constructions. Throws SourceTargetMismatch.
AInfMorphism compose(const AInfMorphism& g, const AInfMorphism& f);

// True iff f_1 induces isomorphisms on homology of (M, m_1) in all degrees
// <= max_degree.
bool is_weak_equivalence(const AInfMorphism& f, int max_degree);

// Inverse up to the requested arity, solved from {g}{f} = {id,0,...}.
// Requires f_1 to be a graded isomorphism; throws NotIso otherwise.
AInfMorphism invert_iso(const AInfMorphism& f, int max_arity);

// Per-degree homology data of the one-ary part (M, m_1).
struct ChainHomology {
    std::map<int, std::vector<std::vector<Rational>>> representatives;  // degree -> cycles
    std::map<int, int> ranks;
};
ChainHomology complex_homology(const GradedBasis& basis, const MultiOp* m1, int max_degree);

// All arity-n tuples of generators whose original degree sum is <= cap.
std::vector<BarWord> tuples_with_degree_cap(const GradedBasis& basis, int n, int cap);

// Largest arity at which a (structure or morphism) operation can be nonzero
// for degree reasons on a given basis; declared_degree_of_arity receives the
// arity and returns the declared degree (2-i for operations, 1-i for
// morphism components into `target`).
int max_feasible_arity(const GradedBasis& source, const GradedBasis& target,
                       int declared_delta);

}  // namespace cinfty
