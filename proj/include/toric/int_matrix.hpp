#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "toric/numeric.hpp"

namespace toric {

// Dense integer matrix with exact entries. Row-major.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<IntVec>& rows);
    // Columns given as a list of vectors.
    static IntMatrix from_columns(const std::vector<IntVec>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    IntVec row(std::size_t i) const;
    IntVec column(std::size_t j) const;

    IntMatrix transposed() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    bool operator==(const IntMatrix& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && a_ == rhs.a_;
    }

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    // row i += c * row j
    void add_row_multiple(std::size_t i, std::size_t j, const Int& c);
    void add_col_multiple(std::size_t i, std::size_t j, const Int& c);
    void negate_row(std::size_t i);
    void negate_col(std::size_t j);

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

// Smith normal form U*A*V = diag(d) with U, V unimodular and the
// divisibility chain d_i | d_{i+1} on the nonzero part. Inverses are
// accumulated during the reduction so callers can reconstruct A.
struct SmithForm {
    std::vector<Int> d;          // min(rows, cols) entries, nonnegative
    IntMatrix U, V;              // unimodular
    IntMatrix U_inv, V_inv;
    std::size_t rank = 0;        // number of nonzero d_i
    IntMatrix diagonal(std::size_t rows, std::size_t cols) const;
};

SmithForm smith_normal_form(const IntMatrix& A);

// Exact determinant (Bareiss fraction-free elimination); square input.
Int determinant(const IntMatrix& A);

// Rank over the rationals.
std::size_t rank_of(const IntMatrix& A);

// Columns form a basis of the integer kernel {x : A x = 0}. The kernel of
// an integer matrix is saturated, so this is also a basis of the kernel
// lattice.
IntMatrix integer_kernel_basis(const IntMatrix& A);

// One integer solution of A x = b, if any.
std::optional<IntVec> solve_integer(const IntMatrix& A, const IntVec& b);

// One rational solution of A x = b, if any.
std::optional<RatVec> solve_rational(const IntMatrix& A, const RatVec& b);

// Row-style Hermite normal form of the row space of A (full-row-rank
// input expected); canonical representative used to normalize lattice
// bases: pivots positive, entries above a pivot reduced into [0, pivot).
IntMatrix hermite_row_basis(const IntMatrix& A);

// True iff the columns of A generate Z^rows (all Smith invariants 1).
bool columns_generate_lattice(const IntMatrix& A);

IntVec mat_vec(const IntMatrix& A, const IntVec& x);
RatVec mat_vec(const IntMatrix& A, const RatVec& x);

}  // namespace toric
