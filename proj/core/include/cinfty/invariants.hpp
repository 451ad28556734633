#pragma once

#include "cinfty/hochschild.hpp"
#include "cinfty/sparse_matrix.hpp"

namespace cinfty {

struct NotCInfinity : AxiomError {
    using AxiomError::AxiomError;
};

// Degreewise presentation of a finite complex: representative elements per
// degree and the matrices of the differential between consecutive degrees.
struct ComplexPresentation {
    std::map<int, std::vector<BarElement>> basis;
    std::map<int, SparseMatrix> differential;  // degree d -> matrix C_d -> C_{d+1}
};

// Exact homology ranks of the bar construction (T^c(s^-1 M), d_beta) in total
// desuspended degrees 1..max_degree. Needs a minimal 1-connected structure.
std::map<int, int> bar_homology(const AInfStructure& s, int max_degree);

// Quotient of the bar construction by shuffle decomposables, degreewise, with
// the induced differential. Throws NotCInfinity unless check_cinf passes.
ComplexPresentation indecomposables_complex(const AInfStructure& s, int max_degree);

// Homology ranks of the indecomposables complex; the rank in quotient degree
// k is reported under key k+1 (the loop-space shift, pi^{k+1} tensor Q).
std::map<int, int> pi_ranks(const AInfStructure& s, int max_degree);

struct FormalityVerdict {
    enum class Kind { Formal, Nonformal, Undecided };
    Kind kind = Kind::Undecided;
    bool definitive = false;  // no operations can exist above the bound
    int arity_bound = 0;
    std::optional<DegeneracyObstruction> obstruction;
    std::vector<DegeneracyStep> certificate;
};

// Harrison-mode degeneracy: formal with a certificate, nonformal with a
// nonzero Harrison obstruction, or undecided at the bound.
FormalityVerdict formality_verdict(const AInfStructure& s, int max_arity);

struct RealizeObstruction {
    int arity = 0;    // arity of the unsatisfiable structure equation
    MultiOp defect;   // residual of that equation (target-valued)
    int cokernel_dim = 0;  // dimension of the receptacle the class lives in
};

using RealizeOutcome = std::variant<AInfMorphism, RealizeObstruction>;

// Extends a multiplicative degree-0 map G to a C-infinity morphism
// {G, g_2, ...} by solving the defining equations arity by arity as linear
// systems, with shuffle-vanishing imposed on every unknown component.
// Both structures must be minimal.
RealizeOutcome realize_search(const AInfStructure& source, const AInfStructure& target,
                              const MultiOp& g1, int max_arity);

// The two-parameter family of minimal C-infinity structures on
// H*(S^2 v S^2 v S^5): m_3(x,x,y) = p z and m_3(x,y,y) = q z, the remaining
// values forced by shuffle vanishing.
AInfStructure example_s2s2s5(const Rational& p, const Rational& q);

// Degree-wise isomorphism candidate (A, r): x -> ax+by, y -> cx+dy, z -> rz.
AInfMorphism s2s2s5_morphism(const AInfStructure& source, const AInfStructure& target,
                             const Rational& a, const Rational& b, const Rational& c,
                             const Rational& d, const Rational& r);

struct ClassifyResult {
    bool same_type = false;
    std::optional<AInfMorphism> witness;  // verified isomorphism when same
};

// Orbit decision for the worked example: (p,q) and (p',q') give isomorphic
// structures iff both are zero or both are nonzero; a same-type verdict comes
// with an explicit morphism witness.
ClassifyResult classify_s2s2s5(const Rational& p, const Rational& q, const Rational& p2,
                               const Rational& q2);

}  // namespace cinfty
