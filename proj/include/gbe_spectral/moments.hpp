#pragma once

/**
 * @file moments.hpp
 * @brief Even moments u_n(alpha) of the mean spectral measure and the exact
 *        identities relating them to Gaussian beta ensemble moments.
 *
 * Three independent routes to u_n(alpha) live here:
 *  - the single-parameter self-convolutive recurrence (`u_sequence`),
 *  - the cross-parameter recurrence with a Taylor shift (`u_polynomials`),
 *  - brute-force enumeration of weighted Dyck paths (`dyck_weight_sum`).
 *
 * `m_polynomial` gives E[T_N(2 beta_hat)^{2p}(1,1)] exactly as a polynomial in
 * N by summing over closed walks on the half-line.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ratpoly.hpp"

namespace gbe {

struct MomentSequence {
    double alpha = 0.0;
    /// values[n] = u_n(alpha), the 2n-th moment.
    std::vector<double> values;
};

/// A lattice path of +1/-1 steps; a Dyck path when it never dips below zero
/// and ends at height zero.
struct DyckPath {
    std::vector<std::int8_t> steps;

    [[nodiscard]] bool is_valid() const {
        if (steps.size() % 2 != 0) return false;
        int height = 0;
        for (auto s : steps) {
            if (s != 1 && s != -1) return false;
            height += s;
            if (height < 0) return false;
        }
        return height == 0;
    }

    /// Product over rises of (alpha + k + 1), k the starting level of the rise.
    template <class Scalar>
    [[nodiscard]] Scalar weight(const Scalar& alpha) const {
        Scalar w(1);
        int height = 0;
        for (auto s : steps) {
            if (s > 0) w *= alpha + Scalar(height + 1);
            height += s;
        }
        return w;
    }
};

struct GbeParams {
    int N = 1;
    BigRational beta_hat{1};

    void validate() const {
        if (N < 1) throw std::invalid_argument("GbeParams: N must be >= 1");
        if (beta_hat <= 0) throw std::invalid_argument("GbeParams: beta_hat must be > 0");
    }
};

inline constexpr int kDyckEnumerationLimit = 10;
inline constexpr int kWalkEnumerationLimit = 8;

// ---------------------------------------------------------------------------
// u_n(alpha)

/// u_0 = 1, u_n = (2n-1) u_{n-1} + alpha * sum_{i<n} u_i u_{n-1-i}.
/// Works for any field-like Scalar (double, BigRational, RationalPoly).
template <class Scalar>
std::vector<Scalar> u_sequence(const Scalar& alpha, int n_max) {
    if (n_max < 0) throw std::invalid_argument("u_sequence: n_max must be >= 0");
    std::vector<Scalar> u;
    u.reserve(static_cast<std::size_t>(n_max) + 1);
    u.emplace_back(1);
    for (int n = 1; n <= n_max; ++n) {
        Scalar conv(0);
        for (int i = 0; i < n; ++i) conv += u[i] * u[n - 1 - i];
        u.push_back(Scalar(2 * n - 1) * u[n - 1] + alpha * conv);
    }
    return u;
}

inline MomentSequence u_sequence_numeric(double alpha, int n_max) {
    if (!(alpha >= 0.0)) throw std::domain_error("u_sequence_numeric: alpha must be >= 0");
    return {alpha, u_sequence(alpha, n_max)};
}

/// Exact u_n(alpha) as polynomials in alpha from
/// u_n(alpha) = (alpha+1) sum_{i<n} u_i(alpha+1) u_{n-1-i}(alpha).
inline std::vector<RationalPoly> u_polynomials(int n_max) {
    if (n_max < 0) throw std::invalid_argument("u_polynomials: n_max must be >= 0");
    const RationalPoly alpha_plus_one = RationalPoly::linear(BigRational(1), BigRational(1));
    std::vector<RationalPoly> u{RationalPoly::constant(BigRational(1))};
    std::vector<RationalPoly> u_shifted{RationalPoly::constant(BigRational(1))};
    for (int n = 1; n <= n_max; ++n) {
        RationalPoly sum;
        for (int i = 0; i < n; ++i) sum += u_shifted[i] * u[n - 1 - i];
        u.push_back(alpha_plus_one * sum);
        u_shifted.push_back(shift(u.back(), BigRational(1)));
    }
    return u;
}

// ---------------------------------------------------------------------------
// Dyck paths

/// Calls visit(path) for every Dyck path of length 2n.
template <class Visitor>
void for_each_dyck_path(int n, Visitor&& visit) {
    DyckPath path;
    path.steps.reserve(static_cast<std::size_t>(2 * n));
    auto rec = [&](auto&& self, int rises, int falls) -> void {
        if (rises == n && falls == n) {
            visit(static_cast<const DyckPath&>(path));
            return;
        }
        if (rises < n) {
            path.steps.push_back(1);
            self(self, rises + 1, falls);
            path.steps.pop_back();
        }
        if (falls < rises) {
            path.steps.push_back(-1);
            self(self, rises, falls + 1);
            path.steps.pop_back();
        }
    };
    rec(rec, 0, 0);
}

/// Brute-force sum of Dyck path weights over all paths of length 2n.
template <class Scalar>
Scalar dyck_weight_sum(int n, const Scalar& alpha) {
    if (n < 0) throw std::invalid_argument("dyck_weight_sum: n must be >= 0");
    if (n > kDyckEnumerationLimit)
        throw std::out_of_range("dyck_weight_sum: n = " + std::to_string(n) + " exceeds the enumeration bound " +
                                std::to_string(kDyckEnumerationLimit));
    Scalar total(0);
    for_each_dyck_path(n, [&](const DyckPath& p) { total += p.weight(alpha); });
    return total;
}

/// Sum over Dyck paths of length 2p of prod (N - k - 1) over rises from
/// level k, as a polynomial in N. Equals H_N^{2p}(1,1) for N > p.
inline RationalPoly h_polynomial(int p) {
    if (p < 0) throw std::invalid_argument("h_polynomial: p must be >= 0");
    // level[k] = weighted count of prefixes currently at height k.
    std::vector<RationalPoly> level(static_cast<std::size_t>(p) + 2);
    level[0] = RationalPoly::constant(BigRational(1));
    for (int step = 0; step < 2 * p; ++step) {
        std::vector<RationalPoly> next(level.size());
        for (std::size_t k = 0; k < level.size(); ++k) {
            if (level[k].is_zero()) continue;
            if (k + 1 < level.size())
                next[k + 1] += level[k] * RationalPoly::linear(BigRational(-static_cast<long>(k) - 1), BigRational(1));
            if (k > 0) next[k - 1] += level[k];
        }
        level = std::move(next);
    }
    return level[0];
}

// ---------------------------------------------------------------------------
// Gaussian beta ensemble moments

namespace detail {

inline BigInt double_factorial_odd(int m) {
    // (m-1)!! for even m
    BigInt r = 1;
    for (int k = m - 1; k > 1; k -= 2) r *= k;
    return r;
}

/// ((N - j) beta_hat)_k as a polynomial in N.
inline RationalPoly rising_factorial_poly(int j, int k, const BigRational& beta_hat) {
    RationalPoly out = RationalPoly::constant(BigRational(1));
    for (int l = 0; l < k; ++l) out *= RationalPoly::linear(BigRational(-j) * beta_hat + BigRational(l), beta_hat);
    return out;
}

}  // namespace detail

/// E[T_N(2 beta_hat)^{2p}(1,1)] as an exact polynomial in N.
///
/// Closed walks of length 2p from site 1 are grouped by their exponent tally
/// (flat steps per site, up steps per edge). A tally contributes
/// prod_i E[a_i^{m_i}] * prod_j E[b_j^{2 k_j}], where a ~ N(0,1) and
/// b_j^2 ~ Gamma((N - j) beta_hat, 1).
inline RationalPoly m_polynomial(int p, const BigRational& beta_hat) {
    if (p < 0) throw std::invalid_argument("m_polynomial: p must be >= 0");
    if (beta_hat <= 0) throw std::invalid_argument("m_polynomial: beta_hat must be > 0");
    const int length = 2 * p;
    const int sites = p + 1;  // a walk of length 2p from site 1 reaches at most site p+1
    // key layout: [flat_1 .. flat_sites, up_1 .. up_sites]
    std::vector<std::uint8_t> tally(static_cast<std::size_t>(2 * sites), 0);
    std::map<std::vector<std::uint8_t>, std::uint64_t> counts;

    auto walk = [&](auto&& self, int step, int site) -> void {
        if (step == length) {
            if (site == 1) ++counts[tally];
            return;
        }
        const int remaining = length - step;
        if (site - 1 < remaining) {
            auto& flat = tally[static_cast<std::size_t>(site - 1)];
            ++flat;
            self(self, step + 1, site);
            --flat;
        }
        if (site < remaining) {  // room to come back after going up
            auto& up = tally[static_cast<std::size_t>(sites + site - 1)];
            ++up;
            self(self, step + 1, site + 1);
            --up;
        }
        if (site > 1) self(self, step + 1, site - 1);
    };
    walk(walk, 0, 1);

    std::map<std::pair<int, int>, RationalPoly> rising_cache;
    RationalPoly total;
    for (const auto& [key, count] : counts) {
        BigInt gaussian_factor = count;
        bool vanishes = false;
        for (int i = 0; i < sites; ++i) {
            int m = key[static_cast<std::size_t>(i)];
            if (m % 2 != 0) {
                vanishes = true;
                break;
            }
            gaussian_factor *= detail::double_factorial_odd(m);
        }
        if (vanishes) continue;
        RationalPoly term = RationalPoly::constant(BigRational(gaussian_factor));
        for (int j = 1; j <= sites; ++j) {
            int k = key[static_cast<std::size_t>(sites + j - 1)];
            if (k == 0) continue;
            auto it = rising_cache.find({j, k});
            if (it == rising_cache.end())
                it = rising_cache.emplace(std::pair{j, k}, detail::rising_factorial_poly(j, k, beta_hat)).first;
            term *= it->second;
        }
        total += term;
    }
    return total;
}

/// m_p evaluated at a concrete (N, beta_hat).
inline BigRational gbe_moment(int p, const GbeParams& params) {
    params.validate();
    return evaluate(m_polynomial(p, params.beta_hat), BigRational(params.N));
}

/// Right-hand side of the duality: (-1)^p beta_hat^p m_p(-beta_hat N, 1/beta_hat).
inline RationalPoly dual_m_polynomial(int p, const BigRational& beta_hat) {
    const RationalPoly dual = m_polynomial(p, BigRational(1) / beta_hat);
    BigRational factor = rational_pow(beta_hat, static_cast<unsigned>(p));
    if (p % 2 != 0) factor = -factor;
    return scale_argument(dual, BigRational(-beta_hat)) * factor;
}

inline bool verify_duality(int p, const BigRational& beta_hat) {
    if (p < 0 || p > kWalkEnumerationLimit)
        throw std::out_of_range("verify_duality: p must lie in [0, " + std::to_string(kWalkEnumerationLimit) + "]");
    return m_polynomial(p, beta_hat) == dual_m_polynomial(p, beta_hat);
}

/// True iff u == (-1)^p h(-alpha) as polynomials.
inline bool check_u_h_relation(const RationalPoly& u, const RationalPoly& h, int p) {
    RationalPoly reflected = scale_argument(h, BigRational(-1));
    if (p % 2 != 0) reflected = -reflected;
    return u == reflected;
}

inline bool verify_u_h_relation(int p) {
    if (p < 0 || p > kDyckEnumerationLimit)
        throw std::out_of_range("verify_u_h_relation: p must lie in [0, " + std::to_string(kDyckEnumerationLimit) + "]");
    return check_u_h_relation(u_polynomials(p)[static_cast<std::size_t>(p)], h_polynomial(p), p);
}

/// |beta_hat^{-p} m_p(N, beta_hat) - h_p(N)| for each grid point, computed
/// exactly and rounded at the end.
inline std::vector<double> verify_kappa_limit(int p, int N, const std::vector<double>& beta_hat_grid) {
    for (std::size_t i = 0; i < beta_hat_grid.size(); ++i) {
        if (!(beta_hat_grid[i] > 0.0)) throw std::invalid_argument("verify_kappa_limit: beta_hat must be > 0");
        if (i > 0 && !(beta_hat_grid[i] > beta_hat_grid[i - 1]))
            throw std::invalid_argument("verify_kappa_limit: grid must be strictly increasing");
    }
    const BigRational h = evaluate(h_polynomial(p), BigRational(N));
    std::vector<double> out;
    out.reserve(beta_hat_grid.size());
    for (double b : beta_hat_grid) {
        const BigRational beta_hat(b);
        const BigRational m = evaluate(m_polynomial(p, beta_hat), BigRational(N));
        BigRational dev = m / rational_pow(beta_hat, static_cast<unsigned>(p)) - h;
        out.push_back(std::abs(static_cast<double>(dev)));
    }
    return out;
}

/// |m_p(N, alpha/N) - u_p(alpha)| for each N in the grid.
inline std::vector<double> verify_limit_to_u(int p, const BigRational& alpha, const std::vector<int>& N_grid) {
    if (alpha < 0) throw std::domain_error("verify_limit_to_u: alpha must be >= 0");
    for (std::size_t i = 0; i < N_grid.size(); ++i) {
        if (N_grid[i] <= p) throw std::invalid_argument("verify_limit_to_u: every N must exceed p");
        if (i > 0 && N_grid[i] <= N_grid[i - 1])
            throw std::invalid_argument("verify_limit_to_u: N grid must be strictly increasing");
    }
    const BigRational u = u_sequence(alpha, p)[static_cast<std::size_t>(p)];
    std::vector<double> out;
    out.reserve(N_grid.size());
    for (int N : N_grid) {
        if (alpha == 0) {
            // beta_hat -> 0 limit: off-diagonal contributions vanish
            out.push_back(std::abs(static_cast<double>(BigRational(detail::double_factorial_odd(2 * p)) - u)));
            continue;
        }
        const BigRational m = evaluate(m_polynomial(p, alpha / BigRational(N)), BigRational(N));
        out.push_back(std::abs(static_cast<double>(m - u)));
    }
    return out;
}

inline std::vector<double> verify_limit_to_u(int p, double alpha, const std::vector<int>& N_grid) {
    return verify_limit_to_u(p, BigRational(alpha), N_grid);
}

// ---------------------------------------------------------------------------
// Two-step lemma

/// Solves a_n = (alpha+1) sum_{i<n} b_i a_{n-1-i} for b_0 .. b_{len(a)-2}.
template <class Scalar>
std::vector<Scalar> lemma_two_step(const std::vector<Scalar>& a, const Scalar& alpha) {
    if (a.empty()) throw std::invalid_argument("lemma_two_step: a must be non-empty");
    if (a.front() != Scalar(1)) throw std::invalid_argument("lemma_two_step: a[0] must equal 1");
    const Scalar factor = alpha + Scalar(1);
    std::vector<Scalar> b;
    b.reserve(a.size() - 1);
    for (std::size_t n = 1; n < a.size(); ++n) {
        Scalar rest(0);
        for (std::size_t i = 0; i + 1 < n; ++i) rest += b[i] * a[n - 1 - i];
        b.push_back(a[n] / factor - rest);  // divided by a[0] == 1
    }
    return b;
}

/// Relative residuals of b_n - (2n-1) b_{n-1} - gamma sum_{i<n} b_i b_{n-1-i}
/// for n >= 1, plus |b_0 - 1| at index 0.
inline std::vector<double> self_convolutive_residuals(const std::vector<double>& b, double gamma) {
    std::vector<double> out;
    if (b.empty()) return out;
    out.push_back(std::abs(b[0] - 1.0));
    for (std::size_t n = 1; n < b.size(); ++n) {
        double conv = 0.0;
        for (std::size_t i = 0; i < n; ++i) conv += b[i] * b[n - 1 - i];
        const double rhs = static_cast<double>(2 * n - 1) * b[n - 1] + gamma * conv;
        out.push_back(std::abs(b[n] - rhs) / std::max(std::abs(b[n]), 1e-300));
    }
    return out;
}

/// Catalan number C_n.
inline BigInt catalan(int n) {
    BigInt c = 1;
    for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

}  // namespace gbe
