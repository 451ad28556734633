#include "cinfty/sparse_matrix.hpp"

#include <algorithm>
#include <cassert>

namespace cinfty {

namespace {

const Rational kZero = 0;

// Scale a sparse row to a primitive integer vector whose leading entry is
// positive. This is the periodic normalization that keeps coefficient growth
// in check during elimination.
void normalize_row(std::map<int, Rational>& row)
{
    if (row.empty())
        return;
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& [c, v] : row)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den().get_mpz_t());
    for (const auto& [c, v] : row) {
        mpz_class scaled = v.get_num() * (den_lcm / v.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    }
    Rational factor(den_lcm, num_gcd);
    factor.canonicalize();
    if (row.begin()->second < 0)
        factor = -factor;
    for (auto& [c, v] : row) {
        v *= factor;
        v.canonicalize();
    }
}

// row_r <- pivot_entry * row_r - r_entry * row_p, then renormalized.
void eliminate(std::map<int, Rational>& target, Rational target_entry,
               const std::map<int, Rational>& pivot_row, const Rational& pivot_entry)
{
    for (auto& [c, v] : target)
        v *= pivot_entry;
    for (const auto& [c, v] : pivot_row) {
        auto it = target.find(c);
        if (it == target.end()) {
            target.emplace(c, -target_entry * v);
        } else {
            it->second -= target_entry * v;
            if (it->second == 0)
                target.erase(it);
        }
    }
    normalize_row(target);
}

// Incrementally row-reduced span; used for image bases and quotient
// representatives.
class IncrementalSpan {
public:
    // Returns true when the vector enlarged the span.
    bool add(std::map<int, Rational> row)
    {
        reduce(row);
        if (row.empty())
            return false;
        normalize_row(row);
        rows_.emplace(row.begin()->first, std::move(row));
        return true;
    }

    int rank() const { return static_cast<int>(rows_.size()); }

    // Cancels the leading entry against stored pivot rows until the vector is
    // exhausted or its leading column is pivot-free. A vector lies in the span
    // iff it reduces to zero.
    void reduce(std::map<int, Rational>& row) const
    {
        while (!row.empty()) {
            auto it = rows_.find(row.begin()->first);
            if (it == rows_.end())
                return;
            Rational coeff = row.begin()->second / it->second.begin()->second;
            subtract(row, coeff, it->second);
        }
    }

private:
    static void subtract(std::map<int, Rational>& row, const Rational& coeff,
                         const std::map<int, Rational>& pivot_row)
    {
        for (const auto& [c, v] : pivot_row) {
            auto it = row.find(c);
            if (it == row.end()) {
                row.emplace(c, -coeff * v);
            } else {
                it->second -= coeff * v;
                if (it->second == 0)
                    row.erase(it);
            }
        }
    }

    std::map<int, std::map<int, Rational>> rows_;  // leading column -> row
};

std::map<int, Rational> vector_to_row(const std::vector<Rational>& v)
{
    std::map<int, Rational> row;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (v[i] != 0)
            row.emplace(i, v[i]);
    return row;
}

}  // namespace

SparseMatrix SparseMatrix::identity(int n)
{
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        m.set(i, i, 1);
    return m;
}

SparseMatrix SparseMatrix::from_rows(const std::vector<std::vector<Rational>>& rows)
{
    int nc = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    SparseMatrix m(static_cast<int>(rows.size()), nc);
    for (int r = 0; r < m.rows_; ++r) {
        assert(static_cast<int>(rows[r].size()) == nc);
        for (int c = 0; c < nc; ++c)
            if (rows[r][c] != 0)
                m.data_[r].emplace(c, rows[r][c]);
    }
    return m;
}

const Rational& SparseMatrix::at(int r, int c) const
{
    auto it = data_[r].find(c);
    return it == data_[r].end() ? kZero : it->second;
}

void SparseMatrix::set(int r, int c, const Rational& v)
{
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    if (v == 0)
        data_[r].erase(c);
    else
        data_[r][c] = v;
}

void SparseMatrix::append_row(const std::map<int, Rational>& entries)
{
    data_.push_back(entries);
    ++rows_;
}

std::vector<Rational> SparseMatrix::apply(const std::vector<Rational>& x) const
{
    assert(static_cast<int>(x.size()) == cols_);
    std::vector<Rational> y(rows_, 0);
    for (int r = 0; r < rows_; ++r)
        for (const auto& [c, v] : data_[r])
            y[r] += v * x[c];
    return y;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& other) const
{
    assert(cols_ == other.rows_);
    SparseMatrix out(rows_, other.cols_);
    for (int r = 0; r < rows_; ++r) {
        std::map<int, Rational> acc;
        for (const auto& [k, v] : data_[r])
            for (const auto& [c, w] : other.data_[k])
                acc[c] += v * w;
        for (auto& [c, v] : acc)
            if (v != 0)
                out.data_[r].emplace(c, v);
    }
    return out;
}

bool SparseMatrix::is_zero() const
{
    for (const auto& row : data_)
        if (!row.empty())
            return false;
    return true;
}

RrefResult rref(const SparseMatrix& m)
{
    std::vector<std::map<int, Rational>> rows;
    rows.reserve(m.rows());
    for (int r = 0; r < m.rows(); ++r) {
        rows.push_back(m.row(r));
        normalize_row(rows.back());
    }

    RrefResult res;
    int rank = 0;
    for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
        int best = -1;
        std::size_t best_bits = 0;
        for (int r = rank; r < m.rows(); ++r) {
            auto it = rows[r].find(col);
            if (it == rows[r].end())
                continue;
            std::size_t bits = rational_bits(it->second);
            if (best < 0 || bits < best_bits) {
                best = r;
                best_bits = bits;
            }
        }
        if (best < 0)
            continue;
        std::swap(rows[rank], rows[best]);
        const auto pivot_row = rows[rank];
        const Rational pivot = pivot_row.at(col);
        for (int r = 0; r < m.rows(); ++r) {
            if (r == rank)
                continue;
            auto it = rows[r].find(col);
            if (it == rows[r].end())
                continue;
            eliminate(rows[r], it->second, pivot_row, pivot);
        }
        res.pivots.push_back(col);
        ++rank;
    }

    res.rank = rank;
    res.reduced = SparseMatrix(m.rows(), m.cols());
    for (int r = 0; r < rank; ++r) {
        Rational pivot = rows[r].at(res.pivots[r]);
        for (const auto& [c, v] : rows[r])
            res.reduced.set(r, c, v / pivot);
    }
    return res;
}

std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m)
{
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : r.pivots)
        is_pivot[p] = true;

    std::vector<std::vector<Rational>> basis;
    for (int j = 0; j < m.cols(); ++j) {
        if (is_pivot[j])
            continue;
        std::vector<Rational> v(m.cols(), 0);
        v[j] = 1;
        for (int i = 0; i < r.rank; ++i)
            v[r.pivots[i]] = -r.reduced.at(i, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Rational>> solve(const SparseMatrix& m,
                                           const std::vector<Rational>& b)
{
    assert(static_cast<int>(b.size()) == m.rows());
    SparseMatrix aug(m.rows(), m.cols() + 1);
    for (int r = 0; r < m.rows(); ++r) {
        for (const auto& [c, v] : m.row(r))
            aug.set(r, c, v);
        aug.set(r, m.cols(), b[r]);
    }
    RrefResult red = rref(aug);
    for (int p : red.pivots)
        if (p == m.cols())
            return std::nullopt;
    std::vector<Rational> x(m.cols(), 0);
    for (int i = 0; i < red.rank; ++i)
        x[red.pivots[i]] = red.reduced.at(i, m.cols());
    return x;
}

std::vector<int> independent_rows(const SparseMatrix& m)
{
    IncrementalSpan span;
    std::vector<int> kept;
    for (int r = 0; r < m.rows(); ++r)
        if (span.add(m.row(r)))
            kept.push_back(r);
    return kept;
}

HomologyResult quotient_and_homology(const SparseMatrix& d_in, const SparseMatrix& d_out)
{
    assert(d_in.rows() == d_out.cols());
    if (!d_out.multiply(d_in).is_zero())
        throw CompositionNonzero("d_out * d_in != 0");

    IncrementalSpan span;
    int image_rank = 0;
    for (int j = 0; j < d_in.cols(); ++j) {
        std::map<int, Rational> col;
        for (int r = 0; r < d_in.rows(); ++r)
            if (d_in.at(r, j) != 0)
                col.emplace(r, d_in.at(r, j));
        if (span.add(std::move(col)))
            ++image_rank;
    }

    HomologyResult out;
    for (const auto& cycle : kernel_basis(d_out)) {
        if (span.add(vector_to_row(cycle))) {
            out.representatives.push_back(cycle);
            ++out.rank;
        }
    }
    return out;
}

}  // namespace cinfty
