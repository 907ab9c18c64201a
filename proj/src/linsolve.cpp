#include "ccw/linsolve.hpp"

#include "ccw/errors.hpp"

namespace ccw {

namespace {

Chart matrix_chart(const RFMatrix& a, const std::vector<RationalFunction>& b) {
    for (const auto& row : a)
        for (const auto& e : row)
            if (e.chart().valid()) return e.chart();
    for (const auto& e : b)
        if (e.chart().valid()) return e.chart();
    throw InvalidArgument("linear system has no chart");
}

// Multiplies a row by the product of its distinct denominators.
std::vector<Polynomial> clear_row(const Chart& chart, std::vector<RationalFunction> row) {
    std::vector<Polynomial> dens;
    std::vector<std::size_t> cls(row.size(), SIZE_MAX);
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (!row[j].chart().valid()) row[j] = RationalFunction(chart);
        row[j] = row[j].simplified();
        if (row[j].is_polynomial()) continue;
        const Polynomial& d = row[j].den();
        std::size_t k = 0;
        while (k < dens.size() && !(dens[k] == d)) ++k;
        if (k == dens.size()) dens.push_back(d);
        cls[j] = k;
    }
    std::vector<Polynomial> out;
    out.reserve(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        Polynomial p = row[j].num();
        if (!p.chart().valid()) p = Polynomial(chart);
        for (std::size_t k = 0; k < dens.size(); ++k)
            if (k != cls[j] && !p.is_zero()) p = p * dens[k];
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

std::vector<RationalFunction> solve_unique(const RFMatrix& a, const std::vector<RationalFunction>& b) {
    const std::size_t m = a.size();
    if (m != b.size()) throw InvalidArgument("right-hand side length mismatch");
    if (m == 0) throw SingularSystem("empty linear system");
    const std::size_t n = a[0].size();
    if (m < n) throw SingularSystem("underdetermined linear system");
    Chart chart = matrix_chart(a, b);

    std::vector<std::vector<Polynomial>> M;
    M.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i].size() != n) throw InvalidArgument("ragged matrix");
        std::vector<RationalFunction> row = a[i];
        row.push_back(b[i]);
        M.push_back(clear_row(chart, std::move(row)));
    }

    Polynomial prev(chart, Rational(1));
    for (std::size_t k = 0; k < n; ++k) {
        // Prefer the sparsest nonzero pivot to limit swell.
        std::size_t p = m;
        for (std::size_t i = k; i < m; ++i) {
            if (M[i][k].is_zero()) continue;
            if (p == m || M[i][k].size() < M[p][k].size()) p = i;
        }
        if (p == m) throw SingularSystem("matrix is rank deficient at column " + std::to_string(k));
        std::swap(M[k], M[p]);
        for (std::size_t i = k + 1; i < m; ++i) {
            for (std::size_t j = k + 1; j <= n; ++j) {
                Polynomial t = M[k][k] * M[i][j] - M[i][k] * M[k][j];
                M[i][j] = exact_divide(t, prev);
            }
            M[i][k] = Polynomial(chart);
        }
        prev = M[k][k];
    }
    for (std::size_t i = n; i < m; ++i)
        if (!M[i][n].is_zero()) throw InconsistentSystem("overdetermined system has no solution");

    const Polynomial& det = M[n - 1][n - 1];
    std::vector<Polynomial> y(n, Polynomial(chart));
    for (std::size_t k = n; k-- > 0;) {
        Polynomial t = det * M[k][n];
        for (std::size_t j = k + 1; j < n; ++j) t -= M[k][j] * y[j];
        y[k] = exact_divide(t, M[k][k]);
    }
    std::vector<RationalFunction> x;
    x.reserve(n);
    for (std::size_t k = 0; k < n; ++k) x.push_back(RationalFunction(y[k], det).simplified());
    return x;
}

Polynomial determinant(std::vector<std::vector<Polynomial>> m) {
    const std::size_t n = m.size();
    if (n == 0) throw InvalidArgument("determinant of an empty matrix");
    Chart chart = m[0][0].chart();
    for (const auto& row : m)
        for (const auto& e : row)
            if (e.chart().valid()) chart = e.chart();
    Polynomial prev(chart, Rational(1));
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k].is_zero()) ++p;
        if (p == n) return Polynomial(chart);
        if (p != k) {
            std::swap(m[p], m[k]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = exact_divide(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
        }
        prev = m[k][k];
    }
    Polynomial d = m[n - 1][n - 1];
    if (!d.chart().valid()) d = Polynomial(chart);
    return negate ? -d : d;
}

std::vector<std::size_t> rref(QMatrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rational inv = Rational(1) / m[r][c];
        for (auto& v : m[r]) v *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(QMatrix m) { return rref(m).size(); }

std::vector<QVector> kernel(const QMatrix& m, std::size_t cols) {
    QMatrix r = m;
    std::vector<std::size_t> piv = rref(r);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<QVector> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        QVector v(cols, Rational(0));
        v[f] = Rational(1);
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

Rational determinant(QMatrix m) {
    const std::size_t n = m.size();
    Rational det(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k].is_zero()) ++p;
        if (p == n) return Rational(0);
        if (p != k) {
            std::swap(m[p], m[k]);
            det = -det;
        }
        det *= m[k][k];
        Rational inv = Rational(1) / m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k].is_zero()) continue;
            Rational f = m[i][k] * inv;
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

}  // namespace ccw
