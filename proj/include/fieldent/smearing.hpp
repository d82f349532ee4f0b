#pragma once

#include "fieldent/precision.hpp"
#include "fieldent/specfun.hpp"

#include <array>
#include <complex>

namespace fieldent {

using Vec3 = std::array<double, 3>;

double norm(const Vec3& v);
double distance(const Vec3& a, const Vec3& b);

// Spherical profile F(x) = A_δ (1 − |x − c|²/R²)^δ inside radius R.
class SmearingProfile {
public:
    SmearingProfile(double delta, double radius, Vec3 center = {0.0, 0.0, 0.0});

    double delta() const { return delta_; }
    double radius() const { return radius_; }
    const Vec3& center() const { return center_; }
    bool integer_delta() const;

    SmearingProfile moved_to(const Vec3& c) const { return SmearingProfile(delta_, radius_, c); }

private:
    double delta_;
    double radius_;
    Vec3 center_;
};

class SwitchingProfile {
public:
    explicit SwitchingProfile(double duration);
    double duration() const { return duration_; }

private:
    double duration_;
};

// A_δ = sqrt(Γ(1 + 2δ + D/2) / (π^{D/2} R^D Γ(1 + 2δ))).
template <class T>
T normalization_constant(const T& delta, int D, const T& R) {
    using std::pow;
    using std::sqrt;
    if (!(delta >= 1) || D < 1 || !(R > 0))
        throw DomainError("normalization_constant: need delta >= 1, D >= 1, R > 0");
    const T half_d = T(D) / 2;
    return sqrt(gamma_fn<T>(1 + 2 * delta + half_d) /
                (pow(pi_of<T>(), half_d) * pow(R, D) * gamma_fn<T>(1 + 2 * delta)));
}

// Radial profile and its first two radial derivatives, as functions of
// r ≥ 0 (the even extension is used for negative r).
template <class T>
T radial_F(const SmearingProfile& p, const T& r, int derivative = 0) {
    using std::abs;
    using std::pow;
    const T R = p.radius();
    const T x = abs(r) / R;
    if (x >= 1)
        return T(0);
    const T delta = p.delta();
    const T A = normalization_constant<T>(delta, 3, R);
    const T u = 1 - x * x;
    const T sgn = (r < 0 && derivative == 1) ? T(-1) : T(1);
    switch (derivative) {
    case 0:
        return A * pow(u, delta);
    case 1:
        return sgn * A * delta * pow(u, delta - 1) * (-2 * x / R);
    case 2:
        if (delta == 1)
            return A * (-2 / (R * R));
        return A * (delta * (delta - 1) * pow(u, delta - 2) * 4 * x * x / (R * R) -
                    delta * pow(u, delta - 1) * 2 / (R * R));
    default:
        throw DomainError("radial_F: derivative order must be 0, 1 or 2");
    }
}

double evaluate_F(const SmearingProfile& p, const Vec3& x);
double evaluate_chi(const SwitchingProfile& sw, double t);

namespace detail {

// J_ν(x)/x^ν, with the small-argument series below x = 1.
template <class T>
T bessel_j_over_power(const T& nu, const T& x, const PrecisionContext& ctx) {
    using std::abs;
    using std::pow;
    if (abs(x) < 1) {
        const T q = -x * x / 4;
        T term = 1 / (pow(T(2), nu) * gamma_fn<T>(nu + 1));
        T sum = term;
        const T tol = std::max(T(ctx.target_rel_tol), epsilon_of<T>()) / 4;
        for (int m = 1; m < 200; ++m) {
            term *= q / (T(m) * (nu + m));
            sum += term;
            if (abs(term) <= tol * abs(sum))
                break;
        }
        return sum;
    }
    return bessel_j<T>(nu, x) / pow(x, nu);
}

} // namespace detail

// F̃(k) = 4π ∫₀^R r² F(r) sinc(kr) dr
//      = A (2π)^{3/2} R³ 2^δ Γ(δ+1) J_{δ+3/2}(kR)/(kR)^{δ+3/2}.
template <class T>
T radial_fourier_F(const SmearingProfile& p, const T& k, const PrecisionContext& ctx) {
    using std::pow;
    using std::sqrt;
    if (k < 0)
        throw DomainError("radial_fourier_F: k must be nonnegative");
    const T R = p.radius();
    const T delta = p.delta();
    const T A = normalization_constant<T>(delta, 3, R);
    const T two_pi = 2 * pi_of<T>();
    return A * two_pi * sqrt(two_pi) * R * R * R * pow(T(2), delta) * gamma_fn<T>(delta + 1) *
           detail::bessel_j_over_power<T>(delta + T(1.5), k * R, ctx);
}

// Same transform by direct quadrature of the defining radial integral.
double radial_fourier_F_quadrature(const SmearingProfile& p, double k, const PrecisionContext& ctx);

// χ̃(ω) = ∫ χ(t) e^{−iωt} dt = (T/2) √π Γ(7/2) (2/x)³ J₃(x), x = ωT/2.
template <class T>
T fourier_chi_real(const SwitchingProfile& sw, const T& omega, const PrecisionContext& ctx) {
    using std::abs;
    using std::sqrt;
    const T duration = sw.duration();
    const T x = abs(omega) * duration / 2;
    return duration / 2 * sqrt(pi_of<T>()) * gamma_fn<T>(T(3.5)) * 8 * detail::bessel_j_over_power<T>(T(3), x, ctx);
}

std::complex<double> fourier_chi(const SwitchingProfile& sw, double omega, const PrecisionContext& ctx);
std::complex<double> fourier_chi_quadrature(const SwitchingProfile& sw, double omega, const PrecisionContext& ctx);

} // namespace fieldent
