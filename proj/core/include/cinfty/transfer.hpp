#pragma once

#include <optional>

#include "cinfty/ainf.hpp"

namespace cinfty {

// Finite 1-connected dg algebra presentation: the basis carries the unit in
// degree 0, nothing in degree 1, everything else in degrees >= 2. Products
// with the unit are implicit; the stored table covers non-unit pairs.
struct DgAlgebra {
    GradedBasis basis;
    int unit = 0;
    GradedMap differential;  // degree +1
    MultiOp product;         // arity 2, degree 0, on non-unit generator pairs
    bool commutative = false;

    GradedVector mul(const GradedVector& x, const GradedVector& y) const;
    GradedBasis reduced_basis() const;             // basis without the unit
    std::vector<int> reduced_to_full() const;      // reduced index -> basis index
};

// d^2 = 0, Leibniz, associativity, unit axioms, 1-connectedness, and graded
// commutativity when flagged. Throws AxiomError naming the failing axiom.
void validate_dga(const DgAlgebra& a);

// Exact splitting A = section(H) + im(d) + complement with all side
// conditions: proj section = id, d h + h d = id - section proj,
// h section = 0, proj h = 0, h h = 0.
struct TransferData {
    GradedBasis homology;  // includes the unit class in degree 0
    GradedMap section;     // H -> A, cycle choosing
    GradedMap projection;  // A -> H
    GradedMap homotopy;    // A -> A, degree -1
};

void validate_transfer_data(const DgAlgebra& a, const TransferData& t);

// Deterministic splitting (lexicographic pivoting); a seed shifts the chosen
// cycle representatives by random boundaries, which is enough to exercise the
// uniqueness-up-to-isomorphism statements.
TransferData build_transfer_data(const DgAlgebra& a,
                                 std::optional<unsigned> seed = std::nullopt);

struct CorrectionUnsolvable : AxiomError {
    using AxiomError::AxiomError;
};

struct TransferResult {
    AInfStructure structure;  // minimal, on the reduced homology basis
    AInfMorphism morphism;    // into (A, {d, mu, 0, ...})
};

// Minimal A-infinity structure on H(A) with the connecting weak equivalence.
// max_arity must cover every arity that can be nonzero for degree reasons
// (BoundTooSmall otherwise); the construction itself is exact.
TransferResult transfer_ainf(const DgAlgebra& a, const TransferData& t, int max_arity,
                             int max_degree);

// Commutative input: additionally lands the structure and the morphism in the
// shuffle-vanishing (Harrison) range, correcting arity by arity when a defect
// appears. Throws CorrectionUnsolvable when the linear correction system has
// no solution.
TransferResult transfer_cinf(const DgAlgebra& a, const TransferData& t, int max_arity,
                             int max_degree);

// The dga viewed as an A-infinity structure {m_1 = d, m_2 = mu} on its
// reduced basis (target of the transfer morphism).
AInfStructure dga_as_ainf(const DgAlgebra& a);

}  // namespace cinfty
