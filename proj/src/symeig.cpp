#include "qi/symeig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qi/errors.hpp"
#include "qi/rng.hpp"

namespace qi::symeig {

namespace {

// Householder reduction of a real symmetric matrix to tridiagonal form,
// accumulating the orthogonal transform in z (EISPACK tred2 lineage).
void tred2(std::vector<double>& z, int n, std::vector<double>& d, std::vector<double>& e) {
    auto at = [&z, n](int r, int c) -> double& { return z[static_cast<std::size_t>(r) * n + c]; };
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    at(j, i) = at(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) at(j, k) -= f * e[k] + g * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += at(i, k) * at(k, j);
                for (int k = 0; k <= l; ++k) at(k, j) -= g * at(k, i);
            }
        }
        d[i] = at(i, i);
        at(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) at(j, i) = at(i, j) = 0.0;
    }
}

// Implicit-shift QL on the tridiagonal (d, e), rotations applied to z.
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
    auto at = [&z, n](int r, int c) -> double& { return z[static_cast<std::size_t>(r) * n + c]; };
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw convergence_error("eigh: QL iteration limit reached");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = at(k, i + 1);
                        at(k, i + 1) = s * at(k, i) + c * f;
                        at(k, i) = c * at(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

EigenResult eigh(std::vector<double> matrix, int n) {
    if (n < 1 || matrix.size() != static_cast<std::size_t>(n) * n)
        throw dimension_error("eigh: matrix size does not match n");
    EigenResult res;
    res.values.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> off(static_cast<std::size_t>(n), 0.0);
    if (n == 1) {
        res.values[0] = matrix[0];
        res.vectors = {1.0};
        return res;
    }
    tred2(matrix, n, res.values, off);
    tql2(res.values, off, matrix, n);

    // Sort eigenpairs ascending.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&res](int a, int b) { return res.values[a] < res.values[b]; });
    EigenResult sorted;
    sorted.values.resize(static_cast<std::size_t>(n));
    sorted.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) {
        sorted.values[k] = res.values[order[k]];
        for (int r = 0; r < n; ++r)
            sorted.vectors[static_cast<std::size_t>(r) * n + k] =
                matrix[static_cast<std::size_t>(r) * n + order[k]];
    }
    return sorted;
}

std::vector<double> quadrature_matrix(int dim) {
    if (dim < 2) throw dimension_error("quadrature_matrix: dim must be >= 2");
    std::vector<double> x(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int mu = 0; mu + 1 < dim; ++mu) {
        const double v = std::sqrt(static_cast<double>(mu + 1));
        x[static_cast<std::size_t>(mu) * dim + mu + 1] = v;
        x[static_cast<std::size_t>(mu + 1) * dim + mu] = v;
    }
    return x;
}

std::vector<double> joint_photon_matrix(int dim_a, int dim_b) {
    if (dim_a < 2 || dim_b < 2) throw dimension_error("joint_photon_matrix: dims must be >= 2");
    const long n = static_cast<long>(dim_a) * dim_b;
    std::vector<double> o(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k + 1 < dim_a; ++k)
        for (int mu = 0; mu + 1 < dim_b; ++mu) {
            const long i = static_cast<long>(k) * dim_b + mu;
            const long j = static_cast<long>(k + 1) * dim_b + mu + 1;
            const double v = std::sqrt(static_cast<double>(k + 1) * (mu + 1));
            o[static_cast<std::size_t>(i) * n + j] = v;
            o[static_cast<std::size_t>(j) * n + i] = v;
        }
    return o;
}

std::vector<double> random_orthonormal(int n, std::uint64_t seed) {
    if (n < 1) throw dimension_error("random_orthonormal: n must be >= 1");
    rng::Xoshiro256pp gen(seed);
    std::vector<double> u(static_cast<std::size_t>(n) * n);
    for (auto& v : u) v = gen.gaussian();
    auto col_dot = [&u, n](int a, int b) {
        double acc = 0.0;
        for (int r = 0; r < n; ++r)
            acc += u[static_cast<std::size_t>(r) * n + a] * u[static_cast<std::size_t>(r) * n + b];
        return acc;
    };
    for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < k; ++j) {
                const double proj = col_dot(j, k);
                for (int r = 0; r < n; ++r)
                    u[static_cast<std::size_t>(r) * n + k] -=
                        proj * u[static_cast<std::size_t>(r) * n + j];
            }
            const double norm = std::sqrt(col_dot(k, k));
            if (norm < 1e-12)
                throw degenerate_error("random_orthonormal: rank-deficient Gaussian draw");
            for (int r = 0; r < n; ++r) u[static_cast<std::size_t>(r) * n + k] /= norm;
        }
    }
    return u;
}

double orthonormality_defect(const std::vector<double>& u, int n) {
    if (u.size() != static_cast<std::size_t>(n) * n)
        throw dimension_error("orthonormality_defect: matrix size does not match n");
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double acc = 0.0;
            for (int r = 0; r < n; ++r)
                acc += u[static_cast<std::size_t>(r) * n + a] * u[static_cast<std::size_t>(r) * n + b];
            worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

} // namespace qi::symeig
