#include "fieldent/autocorrelation.hpp"

#include "fieldent/errors.hpp"

#include <cmath>

namespace fieldent {

namespace {

using Poly = std::vector<rational>;              // univariate, ascending
using Poly2 = std::vector<std::vector<rational>>; // [i][j] coefficient of r^i ρ^j

rational binom(int n, int k) {
    rational b = 1;
    for (int i = 1; i <= k; ++i)
        b = b * (n - k + i) / i;
    return b;
}

Poly poly_pow_shift(int n) {
    // (1 − s²)^n in powers of s
    Poly p(2 * n + 1, rational(0));
    for (int k = 0; k <= n; ++k)
        p[2 * k] = binom(n, k) * ((k % 2) ? -1 : 1);
    return p;
}

// Evaluate the r-antiderivative polynomial P(r, ρ) at r = a + bρ, giving a polynomial in ρ.
Poly substitute(const Poly2& P, const rational& a, const rational& b) {
    Poly out;
    auto add = [&](std::size_t deg, const rational& c) {
        if (out.size() <= deg)
            out.resize(deg + 1, rational(0));
        out[deg] += c;
    };
    for (std::size_t i = 0; i < P.size(); ++i) {
        // (a + bρ)^i
        Poly pw{rational(1)};
        for (std::size_t t = 0; t < i; ++t) {
            Poly next(pw.size() + 1, rational(0));
            for (std::size_t u = 0; u < pw.size(); ++u) {
                next[u] += pw[u] * a;
                next[u + 1] += pw[u] * b;
            }
            pw = std::move(next);
        }
        for (std::size_t j = 0; j < P[i].size(); ++j) {
            if (P[i][j] == 0)
                continue;
            for (std::size_t u = 0; u < pw.size(); ++u)
                add(u + j, P[i][j] * pw[u]);
        }
    }
    return out;
}

} // namespace

std::vector<rational> autocorrelation_coefficients(int delta) {
    if (delta < 1)
        throw DomainError("autocorrelation polynomial needs integer delta >= 1");
    // Integrand r (1 − r²)^δ (1 − (r − ρ)²)^{δ+1} as a polynomial in (r, ρ).
    const Poly a = poly_pow_shift(delta);
    const Poly b = poly_pow_shift(delta + 1);
    const int deg_r = 1 + 2 * delta + 2 * (delta + 1);
    Poly2 integrand(deg_r + 1, Poly(2 * (delta + 1) + 1, rational(0)));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t m = 0; m < b.size(); ++m) {
            if (b[m] == 0)
                continue;
            // (r − ρ)^m = Σ_j C(m, j) r^{m−j} (−ρ)^j
            for (std::size_t j = 0; j <= m; ++j) {
                const rational c = a[i] * b[m] * binom(static_cast<int>(m), static_cast<int>(j)) * ((j % 2) ? -1 : 1);
                integrand[1 + i + (m - j)][j] += c;
            }
        }
    }
    Poly2 anti(deg_r + 2, Poly(integrand[0].size(), rational(0)));
    for (int i = 0; i <= deg_r; ++i)
        for (std::size_t j = 0; j < integrand[i].size(); ++j)
            anti[i + 1][j] = integrand[i][j] / (i + 1);

    Poly upper = substitute(anti, 1, 0);
    Poly lower = substitute(anti, -1, 1);
    Poly integral(std::max(upper.size(), lower.size()), rational(0));
    for (std::size_t i = 0; i < upper.size(); ++i)
        integral[i] += upper[i];
    for (std::size_t i = 0; i < lower.size(); ++i)
        integral[i] -= lower[i];

    // Prefactor 2π A² / (2(δ + 1)) with π A² = Γ(2δ + 5/2) / (√π Γ(2δ + 1)).
    // Γ(n + 1/2)/√π = (2n − 1)!! / 2^n for n = 2δ + 2.
    rational ratio = 1;
    const int n = 2 * delta + 2;
    for (int k = 1; k <= n; ++k)
        ratio = ratio * (2 * k - 1) / 2;
    for (int k = 1; k <= 2 * delta; ++k)
        ratio /= k;
    const rational pref = ratio / (delta + 1);
    for (auto& c : integral)
        c *= pref;
    while (!integral.empty() && integral.back() == 0)
        integral.pop_back();
    return integral;
}

std::vector<rational> reexpand_at_two(const std::vector<rational>& c) {
    // ρ = 2 − y
    Poly out(c.size(), rational(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0)
            continue;
        for (std::size_t j = 0; j <= i; ++j) {
            rational term = c[i] * binom(static_cast<int>(i), static_cast<int>(j));
            for (std::size_t t = 0; t < i - j; ++t)
                term *= 2;
            if (j % 2)
                term = -term;
            out[j] += term;
        }
    }
    return out;
}

namespace {

template <class T>
T convert(const rational& q) {
    if constexpr (is_mp_v<T>) {
        mp_real num(boost::multiprecision::numerator(q).str());
        mp_real den(boost::multiprecision::denominator(q).str());
        return num / den;
    } else {
        return static_cast<double>(q);
    }
}

template <class T>
std::vector<T> derivative_coefficients(const std::vector<rational>& c, int k) {
    std::vector<T> out;
    for (std::size_t i = k; i < c.size(); ++i) {
        rational f = c[i];
        for (int t = 0; t < k; ++t)
            f *= static_cast<long>(i) - t;
        out.push_back(convert<T>(f));
    }
    return out;
}

template <class T>
T horner(const std::vector<T>& c, const T& x) {
    T v = 0;
    for (std::size_t i = c.size(); i-- > 0;)
        v = v * x + c[i];
    return v;
}

} // namespace

AutocorrelationPolynomial::AutocorrelationPolynomial(int delta)
    : delta_(delta), rho_coeffs_(autocorrelation_coefficients(delta)), y_coeffs_(reexpand_at_two(rho_coeffs_)),
      double_table_(build_table<double>()) {}

template <class T>
AutocorrelationPolynomial::Table<T> AutocorrelationPolynomial::build_table() const {
    Table<T> t;
    for (int k = 0; k < 3; ++k) {
        t.rho[k] = derivative_coefficients<T>(rho_coeffs_, k);
        t.y[k] = derivative_coefficients<T>(y_coeffs_, k);
    }
    return t;
}

const AutocorrelationPolynomial::Table<mp_real>& AutocorrelationPolynomial::mp_table() const {
    const unsigned prec = mp_real::default_precision();
    std::lock_guard<std::mutex> lock(*mutex_);
    auto it = mp_tables_->find(prec);
    if (it == mp_tables_->end())
        it = mp_tables_->emplace(prec, build_table<mp_real>()).first;
    return it->second;
}

template <class T>
T AutocorrelationPolynomial::evaluate(const T& rho, int k) const {
    using std::abs;
    if (k < 0 || k > 2)
        throw DomainError("autocorrelation derivative order must be 0, 1 or 2");
    const T x = abs(rho);
    if (x >= 2)
        return T(0);
    const Table<T>* table;
    if constexpr (is_mp_v<T>)
        table = &mp_table();
    else
        table = &double_table_;
    T v;
    if (x < 1) {
        v = horner(table->rho[k], x);
    } else {
        v = horner(table->y[k], T(2 - x));
        if (k % 2)
            v = -v; // d/dρ = −d/dy
    }
    // Odd extension: H and H'' odd, H' even.
    if (rho < 0 && k != 1)
        v = -v;
    return v;
}

template double AutocorrelationPolynomial::evaluate<double>(const double&, int) const;
template mp_real AutocorrelationPolynomial::evaluate<mp_real>(const mp_real&, int) const;

} // namespace fieldent
