#include <crjet/linalg.hpp>

namespace crjet
{

DenseMatrix<CScalar> invert(const DenseMatrix<CScalar> &m)
{
    const std::size_t n = m.size();
    DenseMatrix<CScalar> a = m;
    DenseMatrix<CScalar> inv(n, std::vector<CScalar>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) {
            throw Error("matrix is not square");
        }
        inv[i][i] = CScalar(1);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) {
            ++piv;
        }
        if (piv == n) {
            throw Error("singular matrix");
        }
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const CScalar p = a[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] *= p;
            inv[col][j] *= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) {
                continue;
            }
            const CScalar f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

SeriesMatrix invert(const SeriesMatrix &m)
{
    const std::size_t n = m.size();
    if (n == 0) {
        return {};
    }
    const int nvars = m[0][0].nvars();
    int order = TruncatedSeries::kMaxOrder;
    for (const auto &row : m) {
        if (row.size() != n) {
            throw Error("matrix is not square");
        }
        for (const auto &e : row) {
            order = std::min(order, e.order());
        }
    }
    SeriesMatrix a = m;
    SeriesMatrix inv(n, std::vector<TruncatedSeries>(n, TruncatedSeries(nvars, order)));
    for (std::size_t i = 0; i < n; ++i) {
        inv[i][i] = TruncatedSeries::constant(nvars, order, CScalar(1));
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].constant_term().is_zero()) {
            ++piv;
        }
        if (piv == n) {
            throw Error("series matrix is singular at 0");
        }
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const TruncatedSeries p = invert_unit(a[col][col]);
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] = a[col][j] * p;
            inv[col][j] = inv[col][j] * p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) {
                continue;
            }
            const TruncatedSeries f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

} // namespace crjet
