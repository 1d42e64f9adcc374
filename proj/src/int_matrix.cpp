#include "toric/int_matrix.hpp"

#include <algorithm>
#include <cstdlib>

namespace toric {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows) {
    if (rows.empty()) return IntMatrix();
    IntMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw ToricError("ragged matrix rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVec>& cols) {
    if (cols.empty()) return IntMatrix();
    IntMatrix m(cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != m.rows()) throw ToricError("ragged matrix columns");
        for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, j) = cols[j][i];
    }
    return m;
}

IntVec IntMatrix::row(std::size_t i) const {
    IntVec r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
}

IntVec IntMatrix::column(std::size_t j) const {
    IntVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw ToricError("matrix product shape mismatch");
    IntMatrix p(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& aik = at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) p.at(i, j) += aik * rhs.at(k, j);
        }
    return p;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
}

void IntMatrix::add_row_multiple(std::size_t i, std::size_t j, const Int& c) {
    if (c == 0) return;
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) += c * at(j, k);
}

void IntMatrix::add_col_multiple(std::size_t i, std::size_t j, const Int& c) {
    if (c == 0) return;
    for (std::size_t k = 0; k < rows_; ++k) at(k, i) += c * at(k, j);
}

void IntMatrix::negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
}

void IntMatrix::negate_col(std::size_t j) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, j) = -at(k, j);
}

IntMatrix SmithForm::diagonal(std::size_t rows, std::size_t cols) const {
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

namespace {

// Mirror of elementary operations on the transform pair (T, T_inv) so the
// invariants T_cur * A_orig = A_row_reduced and T * T_inv = I hold
// throughout.
struct TransformPair {
    IntMatrix t, t_inv;
    void swap(std::size_t i, std::size_t j, bool row_side) {
        if (row_side) {
            t.swap_rows(i, j);
            t_inv.swap_cols(i, j);
        } else {
            t.swap_cols(i, j);
            t_inv.swap_rows(i, j);
        }
    }
    // row i += c*row j (row_side) resp. col i += c*col j
    void add_multiple(std::size_t i, std::size_t j, const Int& c, bool row_side) {
        if (row_side) {
            t.add_row_multiple(i, j, c);
            t_inv.add_col_multiple(j, i, -c);
        } else {
            t.add_col_multiple(i, j, c);
            t_inv.add_row_multiple(j, i, -c);
        }
    }
    void negate(std::size_t i, bool row_side) {
        if (row_side) {
            t.negate_row(i);
            t_inv.negate_col(i);
        } else {
            t.negate_col(i);
            t_inv.negate_row(i);
        }
    }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A) {
    if (A.empty()) throw ToricError("smith_normal_form: empty matrix");
    const std::size_t m = A.rows(), n = A.cols();
    IntMatrix w = A;
    TransformPair U{IntMatrix::identity(m), IntMatrix::identity(m)};
    TransformPair V{IntMatrix::identity(n), IntMatrix::identity(n)};

    const std::size_t steps = std::min(m, n);
    for (std::size_t s = 0; s < steps; ++s) {
        bool redo = true;
        while (redo) {
            redo = false;
            // Nonzero pivot of minimal absolute value in the trailing block.
            std::size_t pi = s, pj = s;
            Int best = 0;
            for (std::size_t i = s; i < m; ++i)
                for (std::size_t j = s; j < n; ++j) {
                    const Int& v = w.at(i, j);
                    if (v == 0) continue;
                    Int av = abs(v);
                    if (best == 0 || av < best) {
                        best = av;
                        pi = i;
                        pj = j;
                    }
                }
            if (best == 0) goto done;  // trailing block exhausted

            w.swap_rows(s, pi);
            U.swap(s, pi, true);
            w.swap_cols(s, pj);
            V.swap(s, pj, false);

            bool clean = false;
            while (!clean) {
                clean = true;
                for (std::size_t i = s + 1; i < m; ++i) {
                    if (w.at(i, s) == 0) continue;
                    Int q = floor_div(w.at(i, s), w.at(s, s));
                    w.add_row_multiple(i, s, -q);
                    U.add_multiple(i, s, -q, true);
                    if (w.at(i, s) != 0) {
                        // remainder strictly smaller: promote it to pivot
                        w.swap_rows(s, i);
                        U.swap(s, i, true);
                        clean = false;
                    }
                }
                for (std::size_t j = s + 1; j < n; ++j) {
                    if (w.at(s, j) == 0) continue;
                    Int q = floor_div(w.at(s, j), w.at(s, s));
                    w.add_col_multiple(j, s, -q);
                    V.add_multiple(j, s, -q, false);
                    if (w.at(s, j) != 0) {
                        w.swap_cols(s, j);
                        V.swap(s, j, false);
                        clean = false;
                    }
                }
            }
            if (w.at(s, s) < 0) {
                w.negate_row(s);
                U.negate(s, true);
            }
            // Divisibility chain: fold the first non-multiple of the pivot
            // into the pivot row and rerun this step.
            for (std::size_t i = s + 1; i < m && !redo; ++i)
                for (std::size_t j = s + 1; j < n && !redo; ++j)
                    if (w.at(i, j) % w.at(s, s) != 0) {
                        w.add_row_multiple(s, i, 1);
                        U.add_multiple(s, i, 1, true);
                        redo = true;
                    }
        }
    }
done:;

    SmithForm f;
    f.d.resize(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        f.d[i] = w.at(i, i);
        if (f.d[i] != 0) ++f.rank;
    }
    f.U = std::move(U.t);
    f.U_inv = std::move(U.t_inv);
    f.V = std::move(V.t);
    f.V_inv = std::move(V.t_inv);
    return f;
}

Int determinant(const IntMatrix& A) {
    if (A.rows() != A.cols()) throw ToricError("determinant: non-square matrix");
    const std::size_t n = A.rows();
    if (n == 0) return 1;
    IntMatrix w = A;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w.at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && w.at(p, k) == 0) ++p;
            if (p == n) return 0;
            w.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
            }
        prev = w.at(k, k);
    }
    return sign > 0 ? w.at(n - 1, n - 1) : -w.at(n - 1, n - 1);
}

std::size_t rank_of(const IntMatrix& A) {
    if (A.empty()) return 0;
    return smith_normal_form(A).rank;
}

IntMatrix integer_kernel_basis(const IntMatrix& A) {
    // With U A V = D, A (V e_j) = U^{-1} D e_j = 0 exactly for the zero
    // columns of D; those columns of V form a saturated kernel basis.
    SmithForm f = smith_normal_form(A);
    const std::size_t n = A.cols();
    std::vector<IntVec> cols;
    for (std::size_t j = 0; j < n; ++j) {
        bool zero = j >= f.d.size() || f.d[j] == 0;
        if (zero) cols.push_back(f.V.column(j));
    }
    if (cols.empty()) return IntMatrix(n, 0);
    return IntMatrix::from_columns(cols);
}

std::optional<IntVec> solve_integer(const IntMatrix& A, const IntVec& b) {
    if (b.size() != A.rows()) throw ToricError("solve_integer: shape mismatch");
    SmithForm f = smith_normal_form(A);
    IntVec c = mat_vec(f.U, b);
    IntVec y(A.cols(), Int(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        Int di = i < f.d.size() ? f.d[i] : Int(0);
        if (di == 0) {
            if (c[i] != 0) return std::nullopt;
        } else {
            if (c[i] % di != 0) return std::nullopt;
            y[i] = c[i] / di;
        }
    }
    return mat_vec(f.V, y);
}

std::optional<RatVec> solve_rational(const IntMatrix& A, const RatVec& b) {
    if (b.size() != A.rows()) throw ToricError("solve_rational: shape mismatch");
    SmithForm f = smith_normal_form(A);
    RatVec c = mat_vec(f.U, b);
    RatVec y(A.cols(), Rat(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        Int di = i < f.d.size() ? f.d[i] : Int(0);
        if (di == 0) {
            if (c[i] != 0) return std::nullopt;
        } else {
            y[i] = c[i] / Rat(di);
        }
    }
    return mat_vec(f.V, y);
}

IntMatrix hermite_row_basis(const IntMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    IntMatrix w = A;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < m; ++col) {
        // Euclid down the column below row r.
        while (true) {
            std::size_t p = m;
            Int best = 0;
            for (std::size_t i = r; i < m; ++i) {
                if (w.at(i, col) == 0) continue;
                Int av = abs(w.at(i, col));
                if (best == 0 || av < best) {
                    best = av;
                    p = i;
                }
            }
            if (p == m) break;  // column clear below r
            w.swap_rows(r, p);
            bool done = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (w.at(i, col) == 0) continue;
                Int q = floor_div(w.at(i, col), w.at(r, col));
                w.add_row_multiple(i, r, -q);
                if (w.at(i, col) != 0) done = false;
            }
            if (done) break;
        }
        if (w.at(r, col) == 0) continue;
        if (w.at(r, col) < 0) w.negate_row(r);
        // Reduce entries above the pivot into [0, pivot).
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floor_div(w.at(i, col), w.at(r, col));
            w.add_row_multiple(i, r, -q);
        }
        ++r;
    }
    std::vector<IntVec> rows;
    for (std::size_t i = 0; i < r; ++i) rows.push_back(w.row(i));
    if (rows.empty()) return IntMatrix(0, n);
    return IntMatrix::from_rows(rows);
}

bool columns_generate_lattice(const IntMatrix& A) {
    if (A.rows() == 0) return true;
    if (A.cols() < A.rows()) return false;
    SmithForm f = smith_normal_form(A);
    if (f.rank != A.rows()) return false;
    for (std::size_t i = 0; i < A.rows(); ++i)
        if (f.d[i] != 1) return false;
    return true;
}

IntVec mat_vec(const IntMatrix& A, const IntVec& x) {
    if (x.size() != A.cols()) throw ToricError("mat_vec: shape mismatch");
    IntVec y(A.rows(), Int(0));
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (A.at(i, j) != 0) y[i] += A.at(i, j) * x[j];
    return y;
}

RatVec mat_vec(const IntMatrix& A, const RatVec& x) {
    if (x.size() != A.cols()) throw ToricError("mat_vec: shape mismatch");
    RatVec y(A.rows(), Rat(0));
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (A.at(i, j) != 0) y[i] += Rat(A.at(i, j)) * x[j];
    return y;
}

}  // namespace toric
