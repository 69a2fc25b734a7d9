#include "quasibasis/integer_relation.hpp"

#include <cmath>

namespace quasibasis {

namespace {

using Row = std::vector<long double>;

long double dot(const Row& a, const Row& b) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Gram-Schmidt coefficients mu and squared norms of the orthogonalized rows.
void gram_schmidt(const std::vector<Row>& b, std::vector<Row>& mu, Row& norms) {
    const std::size_t n = b.size();
    std::vector<Row> star(b);
    mu.assign(n, Row(n, 0.0L));
    norms.assign(n, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            mu[i][j] = norms[j] > 0 ? dot(b[i], star[j]) / norms[j] : 0.0L;
            for (std::size_t c = 0; c < star[i].size(); ++c) star[i][c] -= mu[i][j] * star[j][c];
        }
        norms[i] = dot(star[i], star[i]);
    }
}

}  // namespace

void lll_reduce(std::vector<Row>& b, long double delta) {
    const std::size_t n = b.size();
    if (n < 2) return;
    std::vector<Row> mu;
    Row norms;
    gram_schmidt(b, mu, norms);
    std::size_t k = 1;
    // Small dimensions only; recomputing Gram-Schmidt after each change keeps it simple and exact enough.
    int guard = 0;
    while (k < n && guard++ < 100000) {
        for (std::size_t j = k; j-- > 0;) {
            long double q = std::round(mu[k][j]);
            if (q != 0.0L) {
                for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[j][c];
                gram_schmidt(b, mu, norms);
            }
        }
        if (norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gram_schmidt(b, mu, norms);
            k = k > 1 ? k - 1 : 1;
        }
    }
}

std::optional<std::vector<long long>> find_integer_relation(std::span<const double> x,
                                                            long long coefficient_bound) {
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    // Scale so that a residual of 1e-12 costs one unit of length: genuine
    // relations in doubles leave residuals near 1e-16, chance near-relations
    // found by reduction sit around 1/scale.
    constexpr long double kScale = 1e12L;
    std::vector<Row> basis(n, Row(n + 1, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
        basis[i][i] = 1.0L;
        basis[i][n] = kScale * static_cast<long double>(x[i]);
    }
    lll_reduce(basis);
    for (const auto& row : basis) {
        std::vector<long long> c(n);
        long double residual = 0.0L, magnitude = 0.0L;
        long long largest = 0;
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = std::llround(row[i]);
            largest = std::max(largest, std::llabs(c[i]));
            residual += static_cast<long double>(c[i]) * x[i];
            magnitude += std::fabs(static_cast<long double>(c[i]) * x[i]);
        }
        if (largest == 0 || largest > coefficient_bound) continue;
        if (std::fabs(residual) <= 1e-14L * std::max(magnitude, 1.0L)) return c;
    }
    return std::nullopt;
}

}  // namespace quasibasis
