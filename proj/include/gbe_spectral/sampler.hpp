#pragma once

/**
 * @file sampler.hpp
 * @brief Random Jacobi matrices and Monte Carlo estimates of their mean
 *        spectral measure.
 *
 * Reproducibility: sample i draws from `rng.derive(i)`. Samples are grouped in
 * fixed-size chunks whose statistics are merged in chunk order, so a report
 * depends on (seed, stream, chunk size) and never on the thread count.
 * Matrix entries are drawn site by site, so for one stream the M x M matrix
 * is the leading block of any larger one.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "linalg.hpp"

namespace gbe {

/// Deterministic random stream identified by (seed, stream_id).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) : seed_(seed), stream_id_(stream_id) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
        engine_.seed(seq);
    }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Independent child stream; same (seed, stream_id, child) -> same stream.
    [[nodiscard]] RngStream derive(std::uint64_t child) const {
        return RngStream(seed_, mix(stream_id_ ^ mix(child + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal, Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

    /// Gamma(shape, 1). Marsaglia-Tsang squeeze for shape >= 1; for shape < 1
    /// the boost G(shape + 1) * U^(1/shape).
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::domain_error("RngStream::gamma: shape must be > 0");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return std::exp(std::log(g) + std::log(uniform()) / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// chi_k / sqrt(2), i.e. sqrt(Gamma(k/2, 1)).
    double chi_tilde(double k) {
        if (!(k > 0.0)) throw std::domain_error("RngStream::chi_tilde: k must be > 0");
        return std::sqrt(gamma(0.5 * k));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline double sample_chi_tilde(double k, RngStream& rng) { return rng.chi_tilde(k); }

namespace detail {

// Off-diagonal draws can underflow to 0 for tiny shapes; the matrix then
// decouples, which a tiny positive coupling reproduces.
inline double positive_coupling(double b) { return std::max(b, std::numeric_limits<double>::min()); }

}  // namespace detail

/// Tridiagonal Gaussian beta ensemble model T_N(beta): N(0,1) diagonal,
/// offdiag[j] ~ chi~_{(N-1-j) beta} (0-based j).
inline FiniteJacobi build_T(int N, double beta, RngStream& rng) {
    if (N < 1) throw std::invalid_argument("build_T: N must be >= 1");
    if (!(beta > 0.0)) throw std::domain_error("build_T: beta must be > 0");
    FiniteJacobi J;
    J.diag.resize(static_cast<std::size_t>(N));
    J.offdiag.resize(static_cast<std::size_t>(N - 1));
    for (int j = 0; j < N; ++j) {
        J.diag[static_cast<std::size_t>(j)] = rng.normal();
        if (j + 1 < N)
            J.offdiag[static_cast<std::size_t>(j)] = detail::positive_coupling(rng.chi_tilde((N - 1 - j) * beta));
    }
    return J;
}

/// Leading M x M block of J_alpha: N(0,1) diagonal, i.i.d. chi~_{2 alpha} off-diagonal.
inline FiniteJacobi build_J_trunc(int M, double alpha, RngStream& rng) {
    if (M < 1) throw std::invalid_argument("build_J_trunc: M must be >= 1");
    if (!(alpha > 0.0)) throw std::domain_error("build_J_trunc: alpha must be > 0");
    FiniteJacobi J;
    J.diag.resize(static_cast<std::size_t>(M));
    J.offdiag.resize(static_cast<std::size_t>(M - 1));
    for (int j = 0; j < M; ++j) {
        J.diag[static_cast<std::size_t>(j)] = rng.normal();
        if (j + 1 < M) J.offdiag[static_cast<std::size_t>(j)] = detail::positive_coupling(rng.chi_tilde(2.0 * alpha));
    }
    return J;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

struct HistogramBin {
    double center = 0.0;
    double mass = 0.0;
    double std_error = 0.0;
};

struct McReport {
    double alpha = 0.0;
    int truncation = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    int chunk_size = 0;
    /// moment_estimates[p] estimates E[J^{2p}(1,1)].
    std::vector<Estimate> moment_estimates;
    std::vector<HistogramBin> histogram;
    double y_max = 0.0;
    /// Spectral mass falling outside [-y_max, y_max].
    Estimate out_of_range;
};

struct McOptions {
    unsigned threads = 1;
    int chunk_size = 1000;
};

namespace detail {

/// Per-coordinate running mean and sum of squared deviations.
struct RunningStats {
    std::int64_t count = 0;
    std::vector<double> mean, m2;

    explicit RunningStats(std::size_t dim = 0) : mean(dim, 0.0), m2(dim, 0.0) {}

    void push(const std::vector<double>& x) {
        ++count;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double delta = x[i] - mean[i];
            mean[i] += delta / static_cast<double>(count);
            m2[i] += delta * (x[i] - mean[i]);
        }
    }

    void merge(const RunningStats& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count), nb = static_cast<double>(other.count);
        const double n = na + nb;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double delta = other.mean[i] - mean[i];
            mean[i] += delta * nb / n;
            m2[i] += other.m2[i] + delta * delta * na * nb / n;
        }
        count += other.count;
    }

    [[nodiscard]] Estimate estimate(std::size_t i) const {
        if (count < 2) return {mean[i], 0.0};
        const double var = m2[i] / static_cast<double>(count - 1);
        return {mean[i], std::sqrt(std::max(var, 0.0) / static_cast<double>(count))};
    }
};

/// Pushes body(rng.derive(i)) for every sample i into per-chunk statistics
/// and merges them in chunk order.
template <class Body>
RunningStats run_chunks(std::int64_t samples, std::size_t dim, const RngStream& rng, const McOptions& opt,
                        Body body) {
    if (opt.chunk_size < 1) throw std::invalid_argument("McOptions: chunk_size must be >= 1");
    const std::int64_t chunk = opt.chunk_size;
    const std::int64_t n_chunks = (samples + chunk - 1) / chunk;
    std::vector<RunningStats> partial(static_cast<std::size_t>(n_chunks), RunningStats(dim));
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (std::int64_t c = next++; c < n_chunks; c = next++) {
            const std::int64_t first = c * chunk;
            const std::int64_t last = std::min(first + chunk, samples);
            RunningStats& stats = partial[static_cast<std::size_t>(c)];
            for (std::int64_t i = first; i < last; ++i) {
                RngStream local = rng.derive(static_cast<std::uint64_t>(i));
                stats.push(body(local));
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max<std::int64_t>(n_chunks, 1))));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    RunningStats total(dim);
    for (const auto& s : partial) total.merge(s);
    return total;
}

}  // namespace detail

/// Mean and standard error of J^{2p}(1,1), p = 0 .. p_max, over samples of the
/// M x M truncation of J_alpha. With M >= p_max + 1 the truncation does not
/// affect these entries.
inline McReport mc_mean_moments(double alpha, int M, std::int64_t samples, int p_max, const RngStream& rng,
                                const McOptions& opt = {}) {
    if (!(alpha > 0.0)) throw std::domain_error("mc_mean_moments: alpha must be > 0");
    if (p_max < 0) throw std::invalid_argument("mc_mean_moments: p_max must be >= 0");
    if (M < p_max + 1) throw std::invalid_argument("mc_mean_moments: truncation must be >= p_max + 1");
    if (samples < 1) throw std::invalid_argument("mc_mean_moments: samples must be >= 1");
    const auto dim = static_cast<std::size_t>(p_max) + 1;
    auto stats = detail::run_chunks(samples, dim, rng, opt, [&](RngStream& local) {
        const FiniteJacobi J = build_J_trunc(M, alpha, local);
        const std::vector<double> powers = matrix_power_entries(J, 2 * p_max);
        std::vector<double> x(dim);
        for (std::size_t p = 0; p < dim; ++p) x[p] = powers[2 * p];
        return x;
    });
    McReport r;
    r.alpha = alpha;
    r.truncation = M;
    r.samples = samples;
    r.seed = rng.seed();
    r.stream_id = rng.stream_id();
    r.chunk_size = opt.chunk_size;
    for (std::size_t p = 0; p < dim; ++p) r.moment_estimates.push_back(stats.estimate(p));
    return r;
}

/// Sample mean of the spectral measure of the M x M truncation of J_alpha,
/// binned on [-y_max, y_max]. Mass outside the window is reported separately.
inline McReport mc_histogram(double alpha, int M, std::int64_t samples, int bins, double y_max, const RngStream& rng,
                             const McOptions& opt = {}) {
    if (!(alpha > 0.0)) throw std::domain_error("mc_histogram: alpha must be > 0");
    if (M < 1) throw std::invalid_argument("mc_histogram: truncation must be >= 1");
    if (bins < 1) throw std::invalid_argument("mc_histogram: bins must be >= 1");
    if (!(y_max > 0.0)) throw std::invalid_argument("mc_histogram: y_max must be > 0");
    if (samples < 1) throw std::invalid_argument("mc_histogram: samples must be >= 1");
    const double width = 2.0 * y_max / bins;
    const auto dim = static_cast<std::size_t>(bins) + 1;  // last slot: out of range
    auto stats = detail::run_chunks(samples, dim, rng, opt, [&](RngStream& local) {
        const DiscreteSpectralMeasure mu = spectral_decomposition(build_J_trunc(M, alpha, local));
        std::vector<double> x(dim, 0.0);
        for (std::size_t j = 0; j < mu.points.size(); ++j) {
            const double lambda = mu.points[j];
            if (lambda < -y_max || lambda > y_max) {
                x[dim - 1] += mu.weights[j];
                continue;
            }
            auto idx = static_cast<std::size_t>((lambda + y_max) / width);
            idx = std::min(idx, static_cast<std::size_t>(bins) - 1);
            x[idx] += mu.weights[j];
        }
        return x;
    });
    McReport r;
    r.alpha = alpha;
    r.truncation = M;
    r.samples = samples;
    r.seed = rng.seed();
    r.stream_id = rng.stream_id();
    r.chunk_size = opt.chunk_size;
    r.y_max = y_max;
    for (int i = 0; i < bins; ++i) {
        const Estimate e = stats.estimate(static_cast<std::size_t>(i));
        r.histogram.push_back({-y_max + (i + 0.5) * width, e.mean, e.std_error});
    }
    r.out_of_range = stats.estimate(dim - 1);
    return r;
}

/// Per-bin change in histogram mass when the truncation goes from M to 2M.
struct DoublingCheck {
    int truncation = 0;
    /// difference[i] estimates mass_2M - mass_M in bin i; last entry is the out-of-range slot.
    std::vector<Estimate> difference;
    double max_abs_difference = 0.0;
    /// max over bins of |difference| / std_error, bins with zero error skipped
    double max_abs_z = 0.0;
};

/// Paired comparison: each sample builds J at 2M and bins both it and its
/// leading M x M block.
inline DoublingCheck truncation_doubling_check(double alpha, int M, std::int64_t samples, int bins, double y_max,
                                               const RngStream& rng, const McOptions& opt = {}) {
    if (!(alpha > 0.0)) throw std::domain_error("truncation_doubling_check: alpha must be > 0");
    if (M < 1 || bins < 1 || !(y_max > 0.0) || samples < 1)
        throw std::invalid_argument("truncation_doubling_check: bad truncation, bins, y_max or samples");
    const double width = 2.0 * y_max / bins;
    const auto dim = static_cast<std::size_t>(bins) + 1;
    auto accumulate = [&](const DiscreteSpectralMeasure& mu, double sign, std::vector<double>& x) {
        for (std::size_t j = 0; j < mu.points.size(); ++j) {
            const double lambda = mu.points[j];
            std::size_t idx = dim - 1;
            if (lambda >= -y_max && lambda <= y_max)
                idx = std::min(static_cast<std::size_t>((lambda + y_max) / width), static_cast<std::size_t>(bins) - 1);
            x[idx] += sign * mu.weights[j];
        }
    };
    auto stats = detail::run_chunks(samples, dim, rng, opt, [&](RngStream& local) {
        FiniteJacobi big = build_J_trunc(2 * M, alpha, local);
        FiniteJacobi small;
        small.diag.assign(big.diag.begin(), big.diag.begin() + M);
        small.offdiag.assign(big.offdiag.begin(), big.offdiag.begin() + (M - 1));
        std::vector<double> x(dim, 0.0);
        accumulate(spectral_decomposition(big), 1.0, x);
        accumulate(spectral_decomposition(small), -1.0, x);
        return x;
    });
    DoublingCheck out;
    out.truncation = M;
    for (std::size_t i = 0; i < dim; ++i) {
        const Estimate e = stats.estimate(i);
        out.difference.push_back(e);
        out.max_abs_difference = std::max(out.max_abs_difference, std::abs(e.mean));
        if (e.std_error > 0.0) out.max_abs_z = std::max(out.max_abs_z, std::abs(e.mean) / e.std_error);
    }
    return out;
}

}  // namespace gbe
