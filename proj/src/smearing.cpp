#include "fieldent/smearing.hpp"

#include <cmath>

namespace fieldent {

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double distance(const Vec3& a, const Vec3& b) { return norm({a[0] - b[0], a[1] - b[1], a[2] - b[2]}); }

SmearingProfile::SmearingProfile(double delta, double radius, Vec3 center)
    : delta_(delta), radius_(radius), center_(center) {
    if (!(delta >= 1.0))
        throw DomainError("smearing exponent delta must be >= 1");
    if (!(radius > 0.0))
        throw DomainError("smearing radius must be positive");
}

bool SmearingProfile::integer_delta() const { return std::floor(delta_) == delta_; }

SwitchingProfile::SwitchingProfile(double duration) : duration_(duration) {
    if (!(duration > 0.0))
        throw DomainError("switching duration must be positive");
}

double evaluate_F(const SmearingProfile& p, const Vec3& x) {
    return radial_F<double>(p, distance(x, p.center()));
}

double evaluate_chi(const SwitchingProfile& sw, double t) {
    const double u = 2.0 * t / sw.duration();
    if (std::abs(u) >= 1.0)
        return 0.0;
    const double s = 1.0 - u * u;
    return s * s * std::sqrt(s);
}

double radial_fourier_F_quadrature(const SmearingProfile& p, double k, const PrecisionContext& ctx) {
    if (k < 0)
        throw DomainError("radial_fourier_F_quadrature: k must be nonnegative");
    const double R = p.radius();
    auto f = [&](double r) {
        const double kr = k * r;
        const double sinc = kr == 0.0 ? 1.0 : std::sin(kr) / kr;
        return r * r * radial_F<double>(p, r) * sinc;
    };
    // Split into pieces no longer than a quarter oscillation.
    const int pieces = std::max(1, static_cast<int>(std::ceil(k * R / 1.5)));
    std::vector<double> pts;
    for (int i = 0; i <= pieces; ++i)
        pts.push_back(R * i / pieces);
    return 4.0 * M_PI * integrate_adaptive<double>(f, pts, ctx).value;
}

std::complex<double> fourier_chi(const SwitchingProfile& sw, double omega, const PrecisionContext& ctx) {
    return {fourier_chi_real<double>(sw, omega, ctx), 0.0};
}

std::complex<double> fourier_chi_quadrature(const SwitchingProfile& sw, double omega, const PrecisionContext& ctx) {
    const double h = sw.duration() / 2;
    const int pieces = std::max(2, static_cast<int>(std::ceil(std::abs(omega) * h / 1.5)) * 2);
    std::vector<double> pts;
    for (int i = 0; i <= pieces; ++i)
        pts.push_back(-h + 2 * h * i / pieces);
    auto re = integrate_adaptive<double>([&](double t) { return evaluate_chi(sw, t) * std::cos(omega * t); }, pts, ctx);
    auto im = integrate_adaptive<double>([&](double t) { return -evaluate_chi(sw, t) * std::sin(omega * t); }, pts, ctx);
    return {re.value, im.value};
}

} // namespace fieldent
