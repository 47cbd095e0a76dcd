#ifndef CRJET_LINALG_HPP
#define CRJET_LINALG_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <crjet/series.hpp>

namespace crjet
{

namespace field
{
inline bool is_zero(const Rational &x) { return sgn(x) == 0; }
inline bool is_zero(const CScalar &x) { return x.is_zero(); }
inline Rational inverse(const Rational &x) { return 1 / x; }
inline CScalar inverse(const CScalar &x) { return x.inverse(); }
} // namespace field

/// Sparse row as (column, value) pairs with strictly increasing columns.
template <typename F>
using SparseRow = std::vector<std::pair<int, F>>;

/// Exact incremental Gaussian elimination.
///
/// Rows are reduced against existing pivots on insertion; a pivot is the lowest
/// column of a reduced row, so the outcome depends only on row order.
template <typename F>
class RowReducer
{
public:
    explicit RowReducer(int ncols) : ncols_(ncols) {}

    int ncols() const { return ncols_; }
    int rank() const { return static_cast<int>(pivots_.size()); }

    /// Inserts a row; returns true when it was independent of earlier rows.
    bool add_row(SparseRow<F> row)
    {
        reduce(row);
        if (row.empty()) {
            return false;
        }
        const F inv = field::inverse(row.front().second);
        for (auto &e : row) {
            e.second *= inv;
        }
        const int lead = row.front().first;
        pivots_.emplace(lead, std::move(row));
        return true;
    }

    bool add_dense_row(const std::vector<F> &dense)
    {
        SparseRow<F> row;
        for (int c = 0; c < static_cast<int>(dense.size()); ++c) {
            if (!field::is_zero(dense[static_cast<std::size_t>(c)])) {
                row.emplace_back(c, dense[static_cast<std::size_t>(c)]);
            }
        }
        return add_row(std::move(row));
    }

    /// True when the row lies in the span of the inserted rows.
    bool in_span(SparseRow<F> row) const
    {
        reduce(row);
        return row.empty();
    }

    std::vector<int> pivot_columns() const
    {
        std::vector<int> cols;
        for (const auto &[c, r] : pivots_) {
            cols.push_back(c);
        }
        return cols;
    }

    /// Basis of {x : A x = 0} restricted to columns [0, ncols).
    std::vector<std::vector<F>> nullspace() const
    {
        auto rref = reduced_rows();
        std::vector<bool> is_pivot(static_cast<std::size_t>(ncols_), false);
        for (const auto &[c, r] : rref) {
            is_pivot[static_cast<std::size_t>(c)] = true;
        }
        std::vector<std::vector<F>> basis;
        for (int f = 0; f < ncols_; ++f) {
            if (is_pivot[static_cast<std::size_t>(f)]) {
                continue;
            }
            std::vector<F> v(static_cast<std::size_t>(ncols_), F(0));
            v[static_cast<std::size_t>(f)] = F(1);
            for (const auto &[c, r] : rref) {
                for (const auto &[col, val] : r) {
                    if (col == f) {
                        v[static_cast<std::size_t>(c)] = -val;
                    }
                }
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

    /// Treats the last column as the right-hand side and returns the solution
    /// with all free unknowns set to zero, or nullopt when inconsistent.
    std::optional<std::vector<F>> solve_augmented() const
    {
        const int rhs = ncols_ - 1;
        auto rref = reduced_rows();
        std::vector<F> x(static_cast<std::size_t>(rhs), F(0));
        for (const auto &[c, r] : rref) {
            if (c == rhs) {
                return std::nullopt;
            }
            for (const auto &[col, val] : r) {
                if (col == rhs) {
                    x[static_cast<std::size_t>(c)] = val;
                }
            }
        }
        return x;
    }

private:
    void reduce(SparseRow<F> &row) const
    {
        std::size_t pos = 0;
        while (pos < row.size()) {
            auto it = pivots_.find(row[pos].first);
            if (it == pivots_.end()) {
                ++pos;
                continue;
            }
            const F factor = row[pos].second;
            row = axpy(row, it->second, factor);
            // Entries before pos are untouched: pivot rows start at their pivot column.
        }
        // Only the leading entry must be non-pivot for echelon form; keep the
        // row fully reduced so that in_span is exact.
    }

    // row - factor * piv
    static SparseRow<F> axpy(const SparseRow<F> &row, const SparseRow<F> &piv, const F &factor)
    {
        SparseRow<F> out;
        out.reserve(row.size() + piv.size());
        auto i = row.begin();
        auto j = piv.begin();
        while (i != row.end() || j != piv.end()) {
            if (j == piv.end() || (i != row.end() && i->first < j->first)) {
                out.push_back(*i++);
            } else if (i == row.end() || j->first < i->first) {
                out.emplace_back(j->first, -(factor * j->second));
                ++j;
            } else {
                F v = i->second - factor * j->second;
                if (!field::is_zero(v)) {
                    out.emplace_back(i->first, std::move(v));
                }
                ++i;
                ++j;
            }
        }
        return out;
    }

    std::map<int, SparseRow<F>> reduced_rows() const
    {
        auto rows = pivots_;
        // Back substitution from the highest pivot down.
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
            for (auto jt = std::next(it); jt != rows.rend(); ++jt) {
                auto &r = jt->second;
                for (const auto &e : r) {
                    if (e.first == it->first) {
                        F factor = e.second;
                        r = axpy(r, it->second, factor);
                        break;
                    }
                }
            }
        }
        return rows;
    }

    int ncols_;
    std::map<int, SparseRow<F>> pivots_;
};

template <typename F>
using DenseMatrix = std::vector<std::vector<F>>;

template <typename F>
int rank(const DenseMatrix<F> &rows, int ncols)
{
    RowReducer<F> r(ncols);
    for (const auto &row : rows) {
        r.add_dense_row(row);
    }
    return r.rank();
}

/// Basis of the right nullspace {x : rows * x = 0}.
template <typename F>
std::vector<std::vector<F>> nullspace(const DenseMatrix<F> &rows, int ncols)
{
    RowReducer<F> r(ncols);
    for (const auto &row : rows) {
        r.add_dense_row(row);
    }
    return r.nullspace();
}

/// Inverse of a constant square matrix; throws when singular.
DenseMatrix<CScalar> invert(const DenseMatrix<CScalar> &m);

using SeriesMatrix = std::vector<std::vector<TruncatedSeries>>;

/// Inverse of a square matrix of series whose value at 0 is invertible.
SeriesMatrix invert(const SeriesMatrix &m);

} // namespace crjet

#endif
