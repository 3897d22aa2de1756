#pragma once

// Spectral data (eigenvalues and squared first eigenvector components) of
// finite Jacobi matrices.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gbe {

/// Symmetric tridiagonal matrix with strictly positive off-diagonal.
struct FiniteJacobi {
    std::vector<double> diag;     // size N
    std::vector<double> offdiag;  // size N - 1

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }

    void validate() const {
        if (diag.empty()) throw std::invalid_argument("FiniteJacobi: matrix must have at least one row");
        if (offdiag.size() + 1 != diag.size())
            throw std::invalid_argument("FiniteJacobi: offdiag must have exactly N - 1 entries");
        for (std::size_t j = 0; j < offdiag.size(); ++j)
            if (!(offdiag[j] > 0.0))
                throw std::invalid_argument("FiniteJacobi: offdiag[" + std::to_string(j) + "] must be > 0");
    }
};

/// sum_j weights[j] * delta(points[j])
struct DiscreteSpectralMeasure {
    std::vector<double> points;   // increasing
    std::vector<double> weights;  // squared first eigenvector components

    [[nodiscard]] double moment(int k) const {
        double s = 0.0;
        for (std::size_t j = 0; j < points.size(); ++j) s += weights[j] * std::pow(points[j], k);
        return s;
    }
    [[nodiscard]] double total_mass() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
};

class EigenConvergenceError : public std::runtime_error {
public:
    EigenConvergenceError(std::size_t index, const std::string& what) : std::runtime_error(what), index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

inline constexpr int kMaxQlIterations = 50;

/// Implicit QL with Wilkinson shifts. Only the first row of the accumulated
/// rotations is tracked, so the cost is O(N^2).
inline DiscreteSpectralMeasure spectral_decomposition(const FiniteJacobi& J) {
    J.validate();
    const std::size_t n = J.size();
    std::vector<double> d = J.diag;
    std::vector<double> e(n, 0.0);
    std::copy(J.offdiag.begin(), J.offdiag.end(), e.begin());
    std::vector<double> z(n, 0.0);  // first row of the eigenvector matrix
    z[0] = 1.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (iter++ == kMaxQlIterations)
                throw EigenConvergenceError(l, "spectral_decomposition: no convergence for eigenvalue " +
                                                   std::to_string(l) + " after " +
                                                   std::to_string(kMaxQlIterations) + " iterations");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    DiscreteSpectralMeasure mu;
    mu.points.reserve(n);
    mu.weights.reserve(n);
    for (auto j : order) {
        mu.points.push_back(d[j]);
        mu.weights.push_back(z[j] * z[j]);
    }
    return mu;
}

/// out[k] = J^k(1,1) for k = 0 .. k_max, by repeated application of J to e_1.
inline std::vector<double> matrix_power_entries(const FiniteJacobi& J, int k_max) {
    if (k_max < 0) throw std::invalid_argument("matrix_power_entries: k_max must be >= 0");
    const std::size_t n = J.size();
    if (n == 0) throw std::invalid_argument("matrix_power_entries: empty matrix");
    // a walk of length <= k_max from site 1 never gets past index k_max
    const std::size_t reach = std::min(n, static_cast<std::size_t>(k_max) + 1);
    std::vector<double> v(reach, 0.0), w(reach, 0.0);
    v[0] = 1.0;
    std::vector<double> out{1.0};
    out.reserve(static_cast<std::size_t>(k_max) + 1);
    for (int k = 1; k <= k_max; ++k) {
        for (std::size_t i = 0; i < reach; ++i) {
            double acc = J.diag[i] * v[i];
            if (i > 0) acc += J.offdiag[i - 1] * v[i - 1];
            if (i + 1 < n && i + 1 < reach) acc += J.offdiag[i] * v[i + 1];
            w[i] = acc;
        }
        std::swap(v, w);
        out.push_back(v[0]);
    }
    return out;
}

inline double matrix_power_entry(const FiniteJacobi& J, int k) {
    if (k < 0) throw std::invalid_argument("matrix_power_entry: k must be >= 0");
    return matrix_power_entries(J, k).back();
}

}  // namespace gbe
