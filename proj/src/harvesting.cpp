#include "fieldent/harvesting.hpp"

#include "fieldent/errors.hpp"
#include "fieldent/parallel.hpp"
#include "fieldent/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace fieldent {

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double pair_distance(const DetectorConfig& a, const DetectorConfig& b) { return distance(a.position, b.position); }

double oscillation_scale(const DetectorConfig& a, const DetectorConfig& b) {
    return 0.5 * (a.switching.duration() + b.switching.duration()) + pair_distance(a, b) + a.smearing.radius() +
           b.smearing.radius();
}

double integrate_k(const std::function<double(double)>& f, const DetectorConfig& a, const DetectorConfig& b,
                   const PrecisionContext& ctx, const char* op) {
    try {
        return integrate_semiinfinite_oscillatory<double>(f, oscillation_scale(a, b), ctx);
    } catch (const NumericalError& e) {
        throw ConvergenceError("harvesting", op, e.what());
    }
}

} // namespace

void DetectorConfig::validate() const {
    if (!(gap >= 0.0))
        throw DomainError("detector gap must be >= 0");
    if (!(coupling > 0.0))
        throw DomainError("detector coupling must be > 0");
}

void check_spacelike(const DetectorConfig& a, const DetectorConfig& b) {
    const double need = 0.5 * (a.switching.duration() + b.switching.duration()) + a.smearing.radius() +
                        b.smearing.radius();
    const double d = pair_distance(a, b);
    if (d < need)
        throw DomainError("detectors are not spacelike separated: d = " + format_real(d, 17) +
                          " < T + 2R = " + format_real(need, 17));
}

std::complex<double> local_term(const DetectorConfig& i, const DetectorConfig& j, const PrecisionContext& ctx) {
    i.validate();
    j.validate();
    const double d = pair_distance(i, j);
    auto f = [&](double k) {
        return k * radial_fourier_F<double>(i.smearing, k, ctx) * radial_fourier_F<double>(j.smearing, k, ctx) *
               sinc(k * d) * fourier_chi_real<double>(i.switching, k + i.gap, ctx) *
               fourier_chi_real<double>(j.switching, k + j.gap, ctx);
    };
    const double v = integrate_k(f, i, j, ctx, "local_term");
    return {i.coupling * j.coupling * v / (4 * M_PI * M_PI), 0.0};
}

std::complex<double> nonlocal_term(const DetectorConfig& a, const DetectorConfig& b, const PrecisionContext& ctx) {
    a.validate();
    b.validate();
    check_spacelike(a, b);
    const double d = pair_distance(a, b);
    auto f = [&](double k) {
        return k * radial_fourier_F<double>(a.smearing, k, ctx) * radial_fourier_F<double>(b.smearing, k, ctx) *
               sinc(k * d) * fourier_chi_real<double>(a.switching, k - a.gap, ctx) *
               fourier_chi_real<double>(b.switching, k + b.gap, ctx);
    };
    const double v = integrate_k(f, a, b, ctx, "nonlocal_term");
    return {-a.coupling * b.coupling * v / (4 * M_PI * M_PI), 0.0};
}

double detector_log_negativity(double L_AA, double L_BB, std::complex<double> M, std::string* diagnostic) {
    const double half_diff = 0.5 * (L_AA - L_BB);
    const double radicand = std::norm(M) - half_diff * half_diff;
    if (radicand < 0) {
        if (diagnostic)
            *diagnostic = "|M| below the local-noise asymmetry |L_AA - L_BB|/2; E_N = 0";
        return 0.0;
    }
    const double E = 0.5 * (L_AA + L_BB) - std::sqrt(radicand);
    return std::max(0.0, -2 * E);
}

HarvestResult detector_negativity(const DetectorConfig& a, const DetectorConfig& b, const PrecisionContext& ctx) {
    check_spacelike(a, b);
    HarvestResult r;
    r.L_AA = local_term(a, a, ctx).real();
    r.L_BB = local_term(b, b, ctx).real();
    r.L_AB = local_term(a, b, ctx);
    r.M = nonlocal_term(a, b, ctx);
    r.negativity_log = detector_log_negativity(r.L_AA, r.L_BB, r.M, &r.diagnostic);
    return r;
}

HarvestResult detector_negativity_nested(const DetectorConfig& a, const DetectorConfig& b,
                                         const PrecisionContext& ctx) {
    a.validate();
    b.validate();
    check_spacelike(a, b);
    PrecisionContext inner = ctx;
    inner.target_rel_tol = ctx.target_rel_tol / 100;
    const double d = pair_distance(a, b);

    // ∫χ(t) e^{iΩt} e^{∓ikt} dt for the two time integrals of each term.
    auto time_integral = [&](const DetectorConfig& c, double omega) {
        return fourier_chi_quadrature(c.switching, omega, inner);
    };
    auto local = [&](const DetectorConfig& i, const DetectorConfig& j, double dist) {
        auto f = [&](double k) {
            const std::complex<double> ti = time_integral(i, -(k + i.gap));
            const std::complex<double> tj = time_integral(j, -(k + j.gap));
            return (k * radial_fourier_F_quadrature(i.smearing, k, inner) *
                    radial_fourier_F_quadrature(j.smearing, k, inner) * sinc(k * dist) * std::conj(ti) * tj)
                .real();
        };
        return i.coupling * j.coupling * integrate_k(f, i, j, ctx, "local_term_nested") / (4 * M_PI * M_PI);
    };
    HarvestResult r;
    r.L_AA = local(a, a, 0.0);
    r.L_BB = local(b, b, 0.0);
    r.L_AB = local(a, b, d);
    auto m = [&](double k) {
        const std::complex<double> ta = time_integral(a, k - a.gap);
        const std::complex<double> tb = time_integral(b, -(k + b.gap));
        return (k * radial_fourier_F_quadrature(a.smearing, k, inner) *
                radial_fourier_F_quadrature(b.smearing, k, inner) * sinc(k * d) * ta * tb)
            .real();
    };
    r.M = -a.coupling * b.coupling * integrate_k(m, a, b, ctx, "nonlocal_term_nested") / (4 * M_PI * M_PI);
    r.negativity_log = detector_log_negativity(r.L_AA, r.L_BB, r.M, &r.diagnostic);
    return r;
}

std::vector<double> gap_range(double start, double stop, double step) {
    if (!(step > 0) || stop < start)
        throw DomainError("gap range needs step > 0 and stop >= start");
    std::vector<double> out;
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
        out.push_back(start + i * step);
    return out;
}

std::vector<SweepPoint> gap_sweep(const DetectorConfig& a, const DetectorConfig& b,
                                  const std::vector<double>& omega_R, const PrecisionContext& ctx, unsigned jobs) {
    if (omega_R.empty())
        throw DomainError("gap_sweep: no gaps given");
    for (double w : omega_R)
        if (!(w >= 0))
            throw DomainError("gap_sweep: gaps must be >= 0");
    check_spacelike(a, b);
    const double R = a.smearing.radius();
    const double d = pair_distance(a, b);

    // Shared composite Gauss-Legendre grid on [0, k_max]. Panels resolve the
    // fastest oscillation. The grid stops once the integrand envelope
    // k|F̃_A F̃_B| χ̄(k − Ω_max) χ̄(k), with χ̄ the asymptotic bound on |χ̃|,
    // has dropped below tol·10⁻⁶ of its value at k = 0.
    const double scale = oscillation_scale(a, b);
    const double width = M_PI / scale;
    const auto& rule = detail::gauss_legendre<double>(16);
    const double omega_max = *std::max_element(omega_R.begin(), omega_R.end()) /
                             std::min(R, b.smearing.radius());
    const double T_min = std::min(a.switching.duration(), b.switching.duration());
    auto chi_bound = [&](double omega) {
        const double chi0 = T_min * 0.4908738521234052 * 1.5; // ≥ χ̃(0) for both detectors
        const double x = std::abs(omega) * T_min / 2;
        if (x < 1.0)
            return chi0;
        return std::min(chi0, chi0 * 48.0 / std::pow(x, 3.5));
    };
    const double F0 = radial_fourier_F<double>(a.smearing, 0.0, ctx) * radial_fourier_F<double>(b.smearing, 0.0, ctx);
    const double envelope0 = std::abs(F0) * chi_bound(0.0) * chi_bound(0.0) / std::max(R, b.smearing.radius());
    const double tol = std::max(ctx.target_rel_tol, 1e-15);
    std::vector<double> ks, base_local_a, base_local_b, base_cross;
    for (int panel = 0;; ++panel) {
        const double lo = panel * width, hi = lo + width;
        double panel_max = 0.0;
        for (std::size_t n = 0; n < 2 * rule.nodes.size(); ++n) {
            const std::size_t m = n / 2;
            if (n % 2 == 1 && rule.nodes[m] == 0.0)
                continue;
            const double x = n % 2 == 0 ? rule.nodes[m] : -rule.nodes[m];
            const double k = 0.5 * (lo + hi) + 0.5 * width * x;
            const double w = 0.5 * width * rule.weights[m];
            const double Fa = radial_fourier_F<double>(a.smearing, k, ctx);
            const double Fb = radial_fourier_F<double>(b.smearing, k, ctx);
            ks.push_back(k);
            base_local_a.push_back(w * k * Fa * Fa);
            base_local_b.push_back(w * k * Fb * Fb);
            base_cross.push_back(w * k * Fa * Fb * sinc(k * d));
            panel_max = std::max(panel_max, k * std::max({Fa * Fa, Fb * Fb, std::abs(Fa * Fb)}));
        }
        const double envelope = panel_max * chi_bound(std::max(0.0, lo - omega_max)) * chi_bound(lo);
        if (lo > omega_max && envelope < tol * 1e-6 * envelope0)
            break;
        if (panel > 2000000)
            throw ConvergenceError("harvesting", "gap_sweep", "k grid did not terminate");
    }

    std::vector<SweepPoint> out(omega_R.size());
    const double coupling = a.coupling * b.coupling;
    parallel_for(omega_R.size(), jobs, ctx, [&](std::size_t p) {
        DetectorConfig ca = a, cb = b;
        ca.gap = omega_R[p] / R;
        cb.gap = omega_R[p] / b.smearing.radius();
        double la = 0, lb = 0, lab = 0, m = 0;
        for (std::size_t n = 0; n < ks.size(); ++n) {
            const double k = ks[n];
            const double xa_plus = fourier_chi_real<double>(ca.switching, k + ca.gap, ctx);
            const double xb_plus = fourier_chi_real<double>(cb.switching, k + cb.gap, ctx);
            const double xa_minus = fourier_chi_real<double>(ca.switching, k - ca.gap, ctx);
            la += base_local_a[n] * xa_plus * xa_plus;
            lb += base_local_b[n] * xb_plus * xb_plus;
            lab += base_cross[n] * xa_plus * xb_plus;
            m += base_cross[n] * xa_minus * xb_plus;
        }
        HarvestResult& r = out[p].result;
        out[p].omega_R = omega_R[p];
        r.L_AA = a.coupling * a.coupling * la / (4 * M_PI * M_PI);
        r.L_BB = b.coupling * b.coupling * lb / (4 * M_PI * M_PI);
        r.L_AB = coupling * lab / (4 * M_PI * M_PI);
        r.M = -coupling * m / (4 * M_PI * M_PI);
        r.negativity_log = detector_log_negativity(r.L_AA, r.L_BB, r.M, &r.diagnostic);
    });
    return out;
}

} // namespace fieldent
