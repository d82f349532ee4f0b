#pragma once

#include "fieldent/errors.hpp"
#include "fieldent/precision.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace fieldent {

namespace detail {

template <class T>
bool is_nonpositive_integer(const T& x) {
    using std::floor;
    return x <= 0 && floor(x) == x;
}

template <class T>
T abs_of(const T& x) {
    using std::abs;
    return abs(x);
}

} // namespace detail

// Γ(x) on the real line. Backed by Boost.Math at the precision of T.
template <class T>
T gamma_fn(const T& x) {
    if (detail::is_nonpositive_integer(x))
        throw PoleError("specfun", "gamma_fn", "pole at non-positive integer " + format_real(x, 17));
    return boost::math::tgamma(x);
}

// J_ν(x), x ≥ 0.
template <class T>
T bessel_j(const T& nu, const T& x) {
    return boost::math::cyl_bessel_j(nu, x);
}

// Generalized hypergeometric series pFq(a; b; z) for real arguments with
// |z| ≤ 1 or a terminating upper parameter. The summation runs at the
// precision of T and stops when the remaining tail is below
// target_rel_tol relative to the partial sum.
template <class T>
T hypergeometric_series(const std::vector<T>& a, const std::vector<T>& b, const T& z,
                        const PrecisionContext& ctx, const char* op = "hypergeometric_series") {
    using std::abs;
    using std::floor;

    // Terminating index: smallest n with (a_i)_n = 0 for some i.
    long terminate_at = -1;
    for (const T& ai : a) {
        if (detail::is_nonpositive_integer(ai)) {
            const long n = static_cast<long>(to_double(-ai)) + 1;
            if (terminate_at < 0 || n < terminate_at)
                terminate_at = n;
        }
    }
    for (const T& bj : b) {
        if (detail::is_nonpositive_integer(bj)) {
            const long m = static_cast<long>(to_double(-bj)) + 1; // (b)_m = 0
            if (terminate_at < 0 || terminate_at > m)
                throw PoleError("specfun", op,
                                "lower parameter " + format_real(bj, 17) + " is a non-positive integer");
        }
    }

    if (z == 0)
        return T(1);

    const T az = abs(z);
    double excess = 0.0; // Σb − Σa, governs convergence at |z| = 1
    if (terminate_at < 0) {
        for (const T& bj : b)
            excess += to_double(bj);
        for (const T& ai : a)
            excess -= to_double(ai);
        if (a.size() > b.size() + 1 || az > 1)
            throw ConvergenceError("specfun", op, "series diverges for |z| = " + format_real(az, 17));
        if (az == 1 && !(excess > 0))
            throw ConvergenceError("specfun", op, "series diverges at |z| = 1 with sum(b) - sum(a) <= 0");
    }

    const T tol = std::max(T(ctx.target_rel_tol), 4 * epsilon_of<T>());
    const long budget = terminate_at > 0 ? terminate_at : 2'000'000;

    T term = 1;
    T sum = 1;
    int quiet_steps = 0;
    for (long n = 0; n < budget; ++n) {
        T num = z / T(n + 1);
        for (const T& ai : a)
            num *= (ai + n);
        for (const T& bj : b)
            num /= (bj + n);
        term *= num;
        sum += term;
        if (terminate_at > 0)
            continue;
        if (term == 0)
            return sum;

        // Tail estimate from the current term ratio.
        T ratio = az;
        {
            T r = 1;
            for (const T& ai : a)
                r *= abs(ai + n + 1);
            for (const T& bj : b)
                r /= abs(bj + n + 1);
            ratio = r * az / T(n + 2);
        }
        if (az == 1 && ratio >= T(0.9)) {
            // Algebraic convergence at |z| = 1: terms behave like C n^{-(excess + 1)}, so
            // the remaining tail is term·((n + 1)/excess − 1/2) up to O(term/n).
            if (abs(term) <= tol * abs(sum))
                return sum + term * (T(n + 1) / T(excess) - T(0.5));
            continue;
        }
        T tail;
        if (ratio < T(0.9))
            tail = abs(term) * ratio / (1 - ratio);
        else
            tail = abs(term) * T(n + 1);
        if (tail <= tol * abs(sum)) {
            if (++quiet_steps >= 2)
                return sum;
        } else {
            quiet_steps = 0;
        }
    }
    if (terminate_at > 0)
        return sum;
    throw ConvergenceError("specfun", op, "series budget exhausted");
}

// Gauss hypergeometric ₂F₁(a, b; c; z) for z ∈ [−1, 1].
template <class T>
T hyp2f1(const T& a, const T& b, const T& c, const T& z, const PrecisionContext& ctx) {
    const bool terminating = detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b);
    const T s = c - a - b;
    using std::floor;
    using std::pow;
    if (!terminating && z > T(0.5) && z < 1 && floor(s) != s &&
        !detail::is_nonpositive_integer(c - a) && !detail::is_nonpositive_integer(c - b)) {
        // Connection to 1 − z: both series then converge at least as fast as 2^{-n}.
        const T w = 1 - z;
        const T g1 = gamma_fn(c) * gamma_fn(s) / (gamma_fn(c - a) * gamma_fn(c - b));
        const T g2 = gamma_fn(c) * gamma_fn(-s) / (gamma_fn(a) * gamma_fn(b));
        const T f1 = hypergeometric_series<T>({a, b}, {a + b - c + 1}, w, ctx, "hyp2f1");
        const T f2 = hypergeometric_series<T>({c - a, c - b}, {s + 1}, w, ctx, "hyp2f1");
        return g1 * f1 + g2 * pow(w, s) * f2;
    }
    return hypergeometric_series<T>({a, b}, {c}, z, ctx, "hyp2f1");
}

// ₃F₂(a1, a2, a3; b1, b2; z) for z ∈ [0, 1) or a terminating upper parameter.
template <class T>
T hyp3f2(const T& a1, const T& a2, const T& a3, const T& b1, const T& b2, const T& z,
         const PrecisionContext& ctx) {
    return hypergeometric_series<T>({a1, a2, a3}, {b1, b2}, z, ctx, "hyp3f2");
}

// ---------------------------------------------------------------------------
// Quadrature

template <class T>
struct GaussRule {
    std::vector<T> nodes;   // on [-1, 1], nonnegative half only
    std::vector<T> weights;
    int n = 0;
};

namespace detail {

template <class T>
GaussRule<T> build_gauss_legendre(int n) {
    using std::abs;
    using std::cos;
    GaussRule<T> rule;
    rule.n = n;
    const T pi = pi_of<T>();
    const T eps = epsilon_of<T>();
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        T x = cos(pi * (T(i) + T(0.75)) / (T(n) + T(0.5)));
        T dp = 0;
        for (int it = 0; it < 100; ++it) {
            T p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                T p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / T(k);
                p0 = p1;
                p1 = p2;
            }
            dp = T(n) * (x * p1 - p0) / (x * x - 1);
            const T dx = p1 / dp;
            x -= dx;
            if (abs(dx) <= 4 * eps * abs(x) + eps * eps)
                break;
        }
        {
            T p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                T p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / T(k);
                p0 = p1;
                p1 = p2;
            }
            dp = T(n) * (x * p1 - p0) / (x * x - 1);
        }
        rule.nodes.push_back(abs(x));
        rule.weights.push_back(2 / ((1 - x * x) * dp * dp));
    }
    return rule;
}

// Rules are cached per (order, precision). Returned by value: copies of
// mp_real keep the precision they were built with.
template <class T>
const GaussRule<T>& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<std::pair<int, unsigned>, GaussRule<T>> cache;
    unsigned prec = 53;
    if constexpr (is_mp_v<T>)
        prec = mp_real::default_precision();
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(n, prec);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, build_gauss_legendre<T>(n)).first;
    return it->second;
}

template <class T>
int default_gauss_order() {
    if constexpr (is_mp_v<T>)
        return std::max(12, static_cast<int>(mp_real::default_precision()) / 2 + 4);
    else
        return 12;
}

template <class T>
struct Panel {
    T a, b;
    T value;     // rule applied on [a, b]
    T abs_value; // same rule applied to |f|
};

template <class T, class F>
Panel<T> apply_rule(const F& f, const T& a, const T& b, const GaussRule<T>& rule) {
    using std::abs;
    const T c = (a + b) / 2;
    const T h = (b - a) / 2;
    T s = 0, sa = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const T& x = rule.nodes[i];
        const T& w = rule.weights[i];
        if (x == 0 && 2 * static_cast<int>(i) + 1 == rule.n) {
            const T fc = f(c);
            s += w * fc;
            sa += w * abs(fc);
        } else {
            const T f1 = f(c - h * x);
            const T f2 = f(c + h * x);
            s += w * (f1 + f2);
            sa += w * (abs(f1) + abs(f2));
        }
    }
    return {a, b, s * h, sa * h};
}

} // namespace detail

template <class T>
struct QuadratureResult {
    T value;
    T error;      // estimated absolute error
    T abs_value;  // ∫|f|, scale for the absolute fallback
    int segments = 0;
};

// Adaptive Gauss-Legendre quadrature with bisection error estimates. Each
// segment carries the rule value on the whole segment and on its two
// halves; the difference bounds the error and the worst segment is split
// until the total error falls below tol·max(|I|, ∫|f|·tol_abs_ratio).
template <class T, class F>
QuadratureResult<T> integrate_adaptive(const F& f, std::vector<T> breakpoints, const PrecisionContext& ctx,
                                       int max_segments = 4000) {
    using std::abs;
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    if (breakpoints.size() < 2)
        return {T(0), T(0), T(0), 0};

    const auto& rule = detail::gauss_legendre<T>(detail::default_gauss_order<T>());
    const T tol = std::max(T(ctx.target_rel_tol), 16 * epsilon_of<T>());

    struct Seg {
        detail::Panel<T> left, right;
        T whole;
        T err;
    };
    auto cmp = [](const Seg& x, const Seg& y) { return x.err < y.err; };
    std::priority_queue<Seg, std::vector<Seg>, decltype(cmp)> queue(cmp);

    auto make = [&](const T& a, const T& b, const T& whole) {
        const T m = (a + b) / 2;
        Seg s{detail::apply_rule(f, a, m, rule), detail::apply_rule(f, m, b, rule), whole, T(0)};
        s.err = abs(s.left.value + s.right.value - s.whole);
        return s;
    };

    T total = 0, total_err = 0, total_abs = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const auto whole = detail::apply_rule(f, breakpoints[i], breakpoints[i + 1], rule);
        Seg s = make(breakpoints[i], breakpoints[i + 1], whole.value);
        total += s.left.value + s.right.value;
        total_abs += s.left.abs_value + s.right.abs_value;
        total_err += s.err;
        queue.push(std::move(s));
    }

    int segments = static_cast<int>(queue.size());
    const T eps = epsilon_of<T>();
    while (true) {
        const T scale = std::max(abs(total), total_abs);
        if (total_err <= tol * scale || total_err == 0)
            break;
        if (segments >= max_segments)
            throw ConvergenceError("specfun", "integrate_finite",
                                   "subdivision budget exhausted, error estimate " + format_real(total_err, 6));
        Seg worst = queue.top();
        const T width = worst.right.b - worst.left.a;
        if (width <= 64 * eps * std::max(abs(worst.left.a), abs(worst.right.b))) {
            // Cannot subdivide further; the remaining error is below resolution.
            if (worst.err <= 64 * eps * scale || queue.size() == 1)
                break;
        }
        queue.pop();
        total -= worst.left.value + worst.right.value;
        total_abs -= worst.left.abs_value + worst.right.abs_value;
        total_err -= worst.err;
        Seg l = make(worst.left.a, worst.left.b, worst.left.value);
        Seg r = make(worst.right.a, worst.right.b, worst.right.value);
        for (Seg* s : {&l, &r}) {
            total += s->left.value + s->right.value;
            total_abs += s->left.abs_value + s->right.abs_value;
            total_err += s->err;
        }
        queue.push(std::move(l));
        queue.push(std::move(r));
        ++segments;
        // Re-sum occasionally to keep cancellation in the running totals from
        // masking the true error.
        if (segments % 256 == 0) {
            auto copy = queue;
            total = total_err = total_abs = 0;
            while (!copy.empty()) {
                const Seg& s = copy.top();
                total += s.left.value + s.right.value;
                total_abs += s.left.abs_value + s.right.abs_value;
                total_err += s.err;
                copy.pop();
            }
        }
    }

    // Final sum in a fixed order (by left endpoint) so the result does not
    // depend on heap layout.
    std::vector<Seg> all;
    all.reserve(queue.size());
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const Seg& x, const Seg& y) { return x.left.a < y.left.a; });
    QuadratureResult<T> out{T(0), T(0), T(0), segments};
    for (const Seg& s : all) {
        out.value += s.left.value + s.right.value;
        out.abs_value += s.left.abs_value + s.right.abs_value;
        out.error += s.err;
    }
    return out;
}

template <class T, class F>
T integrate_finite(const F& f, const T& a, const T& b, const PrecisionContext& ctx,
                   const std::vector<T>& interior_breaks = {}) {
    if (!(a < b)) {
        if (a == b)
            return T(0);
        return -integrate_finite(f, b, a, ctx, interior_breaks);
    }
    std::vector<T> pts{a, b};
    for (const T& x : interior_breaks)
        if (x > a && x < b)
            pts.push_back(x);
    return integrate_adaptive<T>(f, std::move(pts), ctx).value;
}

namespace detail {

// Wynn's epsilon algorithm on a sequence of partial sums; returns the
// highest-order even column estimate available.
template <class T>
class WynnEpsilon {
public:
    void push(const T& s) {
        using std::abs;
        std::vector<T> next;
        next.reserve(prev_.size() + 1);
        next.push_back(s);
        // next[k] = eps_{k}^{(n)} in the rhombus rule, built from prev_.
        for (std::size_t k = 1; k <= prev_.size(); ++k) {
            const T diff = next[k - 1] - prev_[k - 1];
            const T base = k >= 2 ? prev_[k - 2] : T(0);
            if (diff == 0) {
                break;
            }
            next.push_back(base + 1 / diff);
        }
        prev_ = std::move(next);
        if (prev_.size() > 41)
            prev_.resize(41);
        // Even columns hold estimates of the limit.
        std::size_t k = (prev_.size() - 1) & ~std::size_t(1);
        estimate_ = prev_[k];
    }
    const T& estimate() const { return estimate_; }

private:
    std::vector<T> prev_;
    T estimate_ = 0;
};

} // namespace detail

// ∫₀^∞ f(k) dk. With oscillation_scale > 0 the half-line is cut into
// panels of length π/oscillation_scale, the panel sums are accumulated and
// the partial-sum sequence is accelerated with Wynn's epsilon algorithm.
// With oscillation_scale = 0 panels grow geometrically and the raw sum is
// used. Stops when both the raw tail and the accelerated estimate settle.
template <class T, class F>
T integrate_semiinfinite_oscillatory(const F& f, double oscillation_scale, const PrecisionContext& ctx,
                                     const T& start = T(0), int max_panels = 200000) {
    using std::abs;
    if (oscillation_scale < 0)
        throw DomainError("oscillation_scale must be nonnegative");
    const T tol = std::max(T(ctx.target_rel_tol), 16 * epsilon_of<T>());
    PrecisionContext panel_ctx = ctx;
    panel_ctx.target_rel_tol = to_double(tol) / 10;

    const bool oscillatory = oscillation_scale > 0;
    const T width0 = oscillatory ? pi_of<T>() / T(oscillation_scale) : T(1);

    T a = start;
    T width = width0;
    T raw = 0;
    T abs_total = 0;
    T last_estimate = 0;
    detail::WynnEpsilon<T> wynn;
    int settled = 0;
    int small_panels = 0;
    for (int n = 0; n < max_panels; ++n) {
        const T b = a + width;
        const auto r = integrate_adaptive<T>(f, std::vector<T>{a, b}, panel_ctx);
        raw += r.value;
        abs_total += r.abs_value;
        a = b;
        if (!oscillatory)
            width *= 2;

        const T scale = std::max(abs(raw), abs_total * tol);
        if (r.abs_value <= tol * scale / 100)
            ++small_panels;
        else
            small_panels = 0;
        if (small_panels >= 4)
            return raw;

        if (oscillatory) {
            wynn.push(raw);
            const T est = wynn.estimate();
            if (n > 8 && abs(est - last_estimate) <= tol * std::max(abs(est), abs_total * tol)) {
                if (++settled >= 3 && r.abs_value <= abs_total * T(1e-3))
                    return est;
            } else {
                settled = 0;
            }
            last_estimate = est;
        }
        if (abs_total == 0 && n > 16)
            return T(0);
    }
    throw ConvergenceError("specfun", "integrate_semiinfinite_oscillatory",
                           "panel budget exhausted; integrand does not decay");
}

} // namespace fieldent
