#pragma once

#include <variant>

#include "cinfty/ainf.hpp"

namespace cinfty {

// Strict graded algebra underlying a Hochschild complex: a reduced basis and
// the multiplication table (which may be zero).
struct GradedAlgebra {
    GradedBasis basis;
    MultiOp product;  // arity 2, degree 0

    bool operator==(const GradedAlgebra&) const = default;
};

// The basis and m_2 of a minimal structure.
GradedAlgebra algebra_of(const AInfStructure& s);

// Bigraded Hochschild cochain: components in bidegrees (arity n, internal
// degree m), raw tables. The Harrison flag records that every component
// vanishes on shuffles; it is validated on demand, never assumed.
struct HochCochain {
    GradedAlgebra algebra;
    std::map<std::pair<int, int>, MultiOp> parts;
    bool harrison = false;
};

HochCochain zero_cochain(GradedAlgebra algebra);
bool cochain_is_zero(const HochCochain& f);

// Hochschild differential, (n,m) -> (n+1,m) componentwise. delta delta = 0.
HochCochain hdelta(const HochCochain& f);

// Cup product, arity- and degree-additive; associative.
HochCochain cup(const HochCochain& f, const HochCochain& g);

// Brace operations f{g_1,...,g_i}; brace(f, {}) = f and brace(f, {g}) is the
// circle (cup-one) product.
HochCochain brace(const HochCochain& f, const std::vector<HochCochain>& gs);

// Arity-0 cochains: an element of the algebra, with an explicit unit
// coordinate so the unital examples stay expressible in the reduced setting.
struct ScalarCochain {
    int degree = 0;
    Rational unit_coeff = 0;
    GradedVector body;
};

// f cup c for an arity-0 cochain; cup with the unit is the identity.
HochCochain cup_scalar(const HochCochain& f, const ScalarCochain& c);

// delta of an arity-0 cochain: the graded commutator [., c] as an arity-1
// cochain (zero exactly on the graded center).
MultiOp hdelta_scalar(const GradedAlgebra& algebra, const ScalarCochain& c);

struct TwistingWitness {
    int arity = 0;
    BarWord args;
    GradedVector value;  // (delta m + m o m)(args), desuspended
};

// A minimal-structure tail m = m_3 + m_4 + ... is a twisting cochain when
// delta m + m o m = 0 (our sign convention; equivalent to d_bar^2 = 0 on the
// assembled structure, which tests cross-check).
std::optional<TwistingWitness> twisting_defect(const HochCochain& m, int arity_bound);
bool is_twisting(const HochCochain& m, int arity_bound);

// Tail of a minimal structure as a Hochschild cochain in bidegrees (i, 2-i),
// and back.
HochCochain structure_tail(const AInfStructure& s);
AInfStructure assemble_structure(const GradedAlgebra& algebra, const HochCochain& tail,
                                 int arity_bound,
                                 const std::optional<GradedBasis::Generator>& unit);

// Perturbation by a cochain p in bidegree (n, 1-n): returns the transported
// structure (same operations through arity n, m_{n+1} shifted by delta p) and
// the connecting isomorphism {id,...,p,...}: (H, m-bar) -> (H, m).
std::pair<AInfStructure, AInfMorphism> perturb(const AInfStructure& s, int arity,
                                               const MultiOp& p, int max_arity);

struct DegeneracyStep {
    int arity = 0;  // arity of the perturbing cochain
    MultiOp cochain;
};

struct DegeneracyObstruction {
    int arity = 0;    // arity of the non-degenerating operation
    MultiOp cocycle;  // its representative (a delta-cocycle)
    int cohomology_dim = 0;
    std::vector<MultiOp> cohomology_basis;
};

using DegeneracyOutcome = std::variant<std::vector<DegeneracyStep>, DegeneracyObstruction>;

// Iteratively kills m_3, m_4, ... by perturbations. In Harrison mode the
// perturbing cochains are constrained to vanish on shuffles, so the
// certificate assembles to a C-infinity isomorphism.
DegeneracyOutcome try_degenerate(const AInfStructure& s, int max_arity, bool harrison);

struct CohomologyAt {
    int dim = 0;
    std::vector<MultiOp> representatives;  // cocycles spanning ker/im
};

// Hochschild (or Harrison) cohomology at bidegree (n, m), from exact rank
// computations on the cochain bases.
CohomologyAt cohomology_at(const GradedAlgebra& algebra, int n, int m, bool harrison);
int cohomology_dim(const GradedAlgebra& algebra, int n, int m, bool harrison);

}  // namespace cinfty
