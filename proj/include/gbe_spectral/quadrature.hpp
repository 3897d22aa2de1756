#pragma once

// Globally adaptive Gauss-Kronrod integration. Panels are 21-point
// Gauss-Kronrod rules from Boost.Math; the worst panel is bisected until the
// summed error estimate meets the target.

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gbe {

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}
    [[nodiscard]] double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_panels = 4000;
};

template <class Value>
struct QuadratureResult {
    Value value{};
    double error = 0.0;
    int panels = 0;
};

namespace detail {

template <class Value>
struct Panel {
    double a, b;
    Value value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
auto gk21_panel(F& f, double a, double b) {
    using Value = decltype(f(a));
    double err = 0.0;
    Value v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err);
    return Panel<Value>{a, b, v, err};
}

}  // namespace detail

/// Integrates f over [a, b] split at the given interior breakpoints. Stops when
/// error <= max(abs_tol, rel_tol * |value|). Throws QuadratureError when the
/// panel budget runs out.
template <class F>
auto integrate(F f, double a, double b, const QuadratureOptions& opt = {}, const std::vector<double>& breakpoints = {})
    -> QuadratureResult<decltype(f(a))> {
    using Value = decltype(f(a));
    using std::abs;
    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::priority_queue<detail::Panel<Value>> heap;
    Value total{};
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i + 1] <= edges[i]) continue;
        auto panel = detail::gk21_panel(f, edges[i], edges[i + 1]);
        total += panel.value;
        total_error += panel.error;
        heap.push(panel);
    }
    int panels = static_cast<int>(heap.size());
    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * static_cast<double>(abs(total))); };
    while (total_error > target()) {
        if (panels >= opt.max_panels || heap.empty()) {
            std::ostringstream msg;
            msg << "adaptive quadrature on [" << a << ", " << b << "] did not converge: error estimate "
                << total_error << " after " << panels << " panels";
            throw QuadratureError(msg.str(), total_error);
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // panel is at machine resolution; its error cannot shrink further
            std::ostringstream msg;
            msg << "adaptive quadrature hit machine resolution near x = " << mid << ", error estimate "
                << total_error;
            throw QuadratureError(msg.str(), total_error);
        }
        auto left = detail::gk21_panel(f, worst.a, mid);
        auto right = detail::gk21_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // the running sum drifts; recompute from the surviving panels
    Value exact_sum{};
    double exact_error = 0.0;
    while (!heap.empty()) {
        exact_sum += heap.top().value;
        exact_error += heap.top().error;
        heap.pop();
    }
    return {exact_sum, exact_error, panels};
}

}  // namespace gbe
