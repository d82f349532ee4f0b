#include "fieldent/correlations.hpp"

#include "fieldent/errors.hpp"
#include "fieldent/specfun.hpp"

#include <cmath>
#include <sstream>

namespace fieldent {

VacuumKernel::VacuumKernel(const SmearingProfile& profile, const PrecisionContext& ctx,
                           std::shared_ptr<KernelCache> cache)
    : profile_(profile), ctx_(ctx), poly_([&] {
          if (!profile.integer_delta())
              throw DomainError("position-space vacuum kernel requires integer delta");
          return static_cast<int>(profile.delta());
      }()),
      cache_(std::move(cache)) {
    ctx_.validate();
}

std::string VacuumKernel::describe(const mp_real& tau, const mp_real& d, int k) const {
    std::ostringstream os;
    const int digits = ctx_.output_digits();
    os << "fieldent-vacuum-kernel;v=1;delta=" << format_real(profile_.delta(), 17)
       << ";R=" << format_real(profile_.radius(), 17) << ";tau=" << format_real(tau, digits)
       << ";d=" << format_real(d, digits) << ";k=" << k << ";bits=" << ctx_.working_bits
       << ";tol=" << format_real(ctx_.target_rel_tol, 17);
    return os.str();
}

mp_real VacuumKernel::commutator_function(const mp_real& tau, int k) const {
    const mp_real R(profile_.radius());
    mp_real v = poly_.evaluate<mp_real>(tau / R, k);
    for (int i = 0; i < k; ++i)
        v /= R;
    return v * R;
}

mp_real VacuumKernel::correlation(const mp_real& tau, const mp_real& d, int k) const {
    if (k < 0 || k > 2)
        throw DomainError("correlation derivative order must be 0, 1 or 2");
    if (!cache_)
        return compute(tau, d, k);
    const std::string key = KernelCache::make_key(describe(tau, d, k));
    if (auto hit = cache_->lookup(key))
        return mp_real(*hit);
    mp_real v = compute(tau, d, k);
    cache_->store(key, format_real(v, static_cast<int>(ctx_.mp_digits10()) + 4));
    return v;
}

mp_real VacuumKernel::compute(const mp_real& tau_in, const mp_real& d_in, int k) const {
    using std::abs;
    const mp_real R(profile_.radius());
    const mp_real tau = tau_in / R;
    const mp_real d = abs(d_in) / R;
    const mp_real two(2);
    const mp_real pi = pi_of<mp_real>();
    mp_real value;

    if (d == 0) {
        // s^{(k)}(τ) = (1/π) PV ∫_{−2}^{2} H^{(k)}(ρ)/(ρ − τ) dρ
        auto f = [&](const mp_real& rho) { return poly_.evaluate<mp_real>(rho, k); };
        if (abs(tau) < two) {
            const mp_real ft = f(tau);
            auto g = [&](const mp_real& rho) {
                const mp_real den = rho - tau;
                if (den == 0)
                    return mp_real(0);
                return (f(rho) - ft) / den;
            };
            std::vector<mp_real> pts{-two, mp_real(0), tau, two, mp_real(-1), mp_real(1)};
            value = integrate_adaptive<mp_real>(g, pts, ctx_).value + ft * log((two - tau) / (two + tau));
        } else {
            auto g = [&](const mp_real& rho) { return f(rho) / (rho - tau); };
            std::vector<mp_real> pts{-two, mp_real(-1), mp_real(0), mp_real(1), two};
            value = integrate_adaptive<mp_real>(g, pts, ctx_).value;
        }
        value /= pi;
    } else {
        const mp_real a = d - tau, b = d + tau;
        if (a < two || b < two)
            throw CausalityError("gaussian", "vacuum_kernel",
                                 "regions are not spacelike separated (d < |tau| + 2R)");
        auto kernel = [&](const mp_real& rho) -> mp_real {
            switch (k) {
            case 0:
                return 2 * atanh(rho / a) + 2 * atanh(rho / b);
            case 1:
                return 2 * rho / ((a - rho) * (a + rho)) - 2 * rho / ((b - rho) * (b + rho));
            default: {
                const mp_real ua = (a - rho) * (a + rho), ub = (b - rho) * (b + rho);
                return 4 * rho * a / (ua * ua) + 4 * rho * b / (ub * ub);
            }
            }
        };
        auto g = [&](const mp_real& rho) { return poly_.evaluate<mp_real>(rho, 0) * kernel(rho); };
        std::vector<mp_real> pts{mp_real(0), mp_real(1), two};
        value = integrate_adaptive<mp_real>(g, pts, ctx_).value / (2 * pi * d);
    }
    // Restore units: s^{(k)} scales as R^{1−k}.
    for (int i = 0; i < k; ++i)
        value /= R;
    return value * R;
}

double vacuum_moment(const PhaseSpaceElement& e1, const PhaseSpaceElement& e2, const Vec3& separation,
                     const PrecisionContext& ctx) {
    if (e1.spectral.empty() || e2.spectral.empty())
        throw DomainError("vacuum_moment: elements lack a momentum-space representation");
    if (e1.slice_time != e2.slice_time)
        throw DomainError("vacuum_moment: elements live on different slices");
    const double d = norm(separation);
    const SmearingProfile p1(e1.spectral_delta, e1.spectral_radius);
    const SmearingProfile p2(e2.spectral_delta, e2.spectral_radius);

    double reach = d + e1.spectral_radius + e2.spectral_radius;
    double max1 = 0, max2 = 0;
    for (const auto& t : e1.spectral)
        max1 = std::max(max1, std::abs(e1.slice_time - t.t_i));
    for (const auto& t : e2.spectral)
        max2 = std::max(max2, std::abs(e2.slice_time - t.t_i));
    reach += max1 + max2;

    // w̃ and z̃ divided by F̃.
    auto wz = [](const PhaseSpaceElement& e, double k, double& w, double& z) {
        w = z = 0.0;
        for (const auto& t : e.spectral) {
            const double D = e.slice_time - t.t_i;
            const double c = std::cos(k * D), s = std::sin(k * D);
            if (t.kind == ModeKind::Field) {
                w += t.coeff * c;
                z -= t.coeff * (k == 0.0 ? D : s / k);
            } else {
                w += t.coeff * k * s;
                z += t.coeff * c;
            }
        }
    };
    auto integrand = [&](double k) {
        double w1, z1, w2, z2;
        wz(e1, k, w1, z1);
        wz(e2, k, w2, z2);
        const double F1 = radial_fourier_F<double>(p1, k, ctx);
        const double F2 = radial_fourier_F<double>(p2, k, ctx);
        const double sinc = (d == 0.0 || k == 0.0) ? 1.0 : std::sin(k * d) / (k * d);
        return F1 * F2 * (k * w1 * w2 + k * k * k * z1 * z2) * sinc / (2 * M_PI * M_PI);
    };
    try {
        return integrate_semiinfinite_oscillatory<double>(integrand, std::max(reach, 1.0), ctx);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError("gaussian", "vacuum_moment",
                               std::string("k-integrand does not decay (malformed element?): ") + e.what());
    }
}

} // namespace fieldent
