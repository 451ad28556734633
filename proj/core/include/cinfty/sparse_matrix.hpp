#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cinfty/rational.hpp"

namespace cinfty {

// Sparse matrix over Q, row-major. No zero entries are ever stored.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

    static SparseMatrix identity(int n);
    static SparseMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Rational& at(int r, int c) const;
    void set(int r, int c, const Rational& v);  // erases on v == 0
    const std::map<int, Rational>& row(int r) const { return data_[r]; }

    void append_row(const std::map<int, Rational>& entries);
    std::vector<Rational> apply(const std::vector<Rational>& x) const;  // m * x
    SparseMatrix multiply(const SparseMatrix& other) const;             // this * other
    bool is_zero() const;
    bool operator==(const SparseMatrix& other) const = default;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::map<int, Rational>> data_;
    friend struct RrefResult;
};

struct RrefResult {
    SparseMatrix reduced;     // reduced row echelon form, unit pivots
    std::vector<int> pivots;  // pivot column per pivot row
    int rank = 0;
};

// Exact Gaussian elimination. Rows are kept as primitive integer vectors
// between steps (fraction-free updates with gcd normalization); the pivot in
// each column is the candidate entry of smallest bit size. The returned form
// is the canonical monic RREF.
RrefResult rref(const SparseMatrix& m);

// Basis of { x : m x = 0 }; always cols - rank vectors.
std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m);

// Any exact solution of m x = b, or nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve(const SparseMatrix& m,
                                           const std::vector<Rational>& b);

struct CompositionNonzero : AxiomError {
    using AxiomError::AxiomError;
};

struct HomologyResult {
    int rank = 0;
    std::vector<std::vector<Rational>> representatives;  // cycles spanning ker/im
};

// Homology at the middle term of  prev --d_in--> mid --d_out--> next,
// where d_in is (mid x prev) and d_out is (next x mid). Throws
// CompositionNonzero unless d_out * d_in == 0.
HomologyResult quotient_and_homology(const SparseMatrix& d_in, const SparseMatrix& d_out);

// Rows spanning a subspace -> indices of the input rows forming a basis.
std::vector<int> independent_rows(const SparseMatrix& m);

}  // namespace cinfty
