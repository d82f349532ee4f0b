#include "fieldent/waveprop.hpp"

#include "fieldent/errors.hpp"
#include "fieldent/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace fieldent {

namespace {

constexpr double small_radius_fraction = 1e-6;

void add_break(std::vector<double>& pts, double r) {
    if (r > 0)
        pts.push_back(r);
}

std::vector<double> shell_breaks(double s, double R) {
    std::vector<double> pts;
    const double a = std::abs(s);
    add_break(pts, a - R);
    add_break(pts, R - a);
    add_break(pts, a);
    add_break(pts, a + R);
    std::sort(pts.begin(), pts.end());
    return pts;
}

// Spherical solution r φ(s, r) = f(s + r) − f(s − r), with f and its first
// two derivatives supplied by the caller; s is the time since the data slice.
struct DAlembert {
    std::function<double(double, int)> f; // f^{(k)}(x), k = 1, 2, 3

    double q(double s, double r, double R) const {
        if (r < small_radius_fraction * R)
            return 2 * f(s, 1);
        return (f(s + r, 0) - f(s - r, 0)) / r;
    }
    double p(double s, double r, double R) const {
        if (r < small_radius_fraction * R)
            return 2 * f(s, 2);
        return (f(s + r, 1) - f(s - r, 1)) / r;
    }
    double dq(double s, double r, double R) const {
        if (r < small_radius_fraction * R)
            return 0.0;
        const double phi = (f(s + r, 0) - f(s - r, 0)) / r;
        return ((f(s + r, 1) + f(s - r, 1)) - phi) / r;
    }
};

// g(x) = x F(|x|) and its derivatives, odd in x.
double g_fn(const SmearingProfile& prof, double x, int k) {
    switch (k) {
    case 0:
        return x * radial_F<double>(prof, x);
    case 1:
        return radial_F<double>(prof, x) + x * radial_F<double>(prof, x, 1);
    case 2:
        return 2 * radial_F<double>(prof, x, 1) + x * radial_F<double>(prof, x, 2);
    default:
        throw DomainError("g_fn derivative order");
    }
}

// Antiderivative of g: ∫₀ˣ t F(t) dt for the δ-family, even in x.
double g_antiderivative(const SmearingProfile& prof, double x) {
    const double R = prof.radius();
    const double delta = prof.delta();
    const double A = normalization_constant<double>(delta, 3, R);
    const double full = A * R * R / (2 * (delta + 1));
    const double u = 1 - (x * x) / (R * R);
    if (u <= 0)
        return full;
    return full * (1 - std::pow(u, delta + 1));
}

PhaseSpaceElement from_generator(std::shared_ptr<DAlembert> gen, double s, double R, double t0) {
    PhaseSpaceElement e;
    e.q = [gen, s, R](double r) { return gen->q(s, r, R); };
    e.p = [gen, s, R](double r) { return gen->p(s, r, R); };
    e.dq = [gen, s, R](double r) { return gen->dq(s, r, R); };
    e.slice_time = t0;
    e.support_radius = std::abs(s) + R;
    e.inner_radius = std::max(0.0, std::abs(s) - R);
    e.breakpoints = shell_breaks(s, R);
    return e;
}

} // namespace

PhaseSpaceElement initial_data(const SmearingProfile& profile, ModeKind kind, double t) {
    PhaseSpaceElement e;
    const SmearingProfile prof = profile.moved_to({0, 0, 0});
    const double R = prof.radius();
    auto F = [prof](double r) { return radial_F<double>(prof, r); };
    auto dF = [prof](double r) { return radial_F<double>(prof, r, 1); };
    auto zero = [](double) { return 0.0; };
    if (kind == ModeKind::Field) {
        e.q = zero;
        e.dq = zero;
        e.p = F;
    } else {
        e.q = [F](double r) { return -F(r); };
        e.dq = [dF](double r) { return -dF(r); };
        e.p = zero;
    }
    e.slice_time = t;
    e.support_radius = R;
    e.inner_radius = 0.0;
    e.breakpoints = {R};
    return e;
}

PhaseSpaceElement evolve_spherical(const PhaseSpaceElement& data, double t_target, const PrecisionContext& ctx) {
    const double s = t_target - data.slice_time;
    if (s == 0.0)
        return data;
    auto d = std::make_shared<PhaseSpaceElement>(data);
    const double scale = std::max(data.support_radius, 1e-300);

    // g(x) = x φ₀(|x|), h(x) = x ψ₀(|x|); both odd.
    auto g = [d](double x) { return x * d->q(std::abs(x)); };
    auto dg = [d](double x) {
        const double a = std::abs(x);
        return d->q(a) + a * d->dq(a);
    };
    auto h = [d](double x) { return x * d->p(std::abs(x)); };
    auto hint = [d, ctx](double lo, double hi) {
        // ∫_lo^hi h; by oddness equal to ∫_{|lo|}^{|hi|} x ψ₀(x) dx.
        double a = std::abs(lo), b = std::abs(hi);
        double sign = 1.0;
        if (a > b) {
            std::swap(a, b);
            sign = -1.0;
        }
        a = std::min(a, d->support_radius);
        b = std::min(b, d->support_radius);
        if (a >= b)
            return 0.0;
        std::vector<double> pts{a, b};
        for (double x : d->breakpoints)
            if (x > a && x < b)
                pts.push_back(x);
        return sign * integrate_adaptive<double>([d](double x) { return x * d->p(x); }, pts, ctx).value;
    };

    struct Kirchhoff {
        double s, R;
        std::function<double(double)> g, dg, h;
        std::function<double(double, double)> hint;
        double rq(double r) const { return 0.5 * (g(r + s) + g(r - s)) + 0.5 * hint(r - s, r + s); }
        double rq_r(double r) const { return 0.5 * (dg(r + s) + dg(r - s)) + 0.5 * (h(r + s) - h(r - s)); }
        double rp(double r) const { return 0.5 * (dg(r + s) - dg(r - s)) + 0.5 * (h(r + s) + h(r - s)); }
    };
    auto k = std::make_shared<Kirchhoff>(Kirchhoff{s, scale, g, dg, h, hint});

    PhaseSpaceElement out;
    out.q = [k](double r) {
        if (r < small_radius_fraction * k->R)
            return k->rq_r(0.0); // rq vanishes linearly at the origin
        return k->rq(r) / r;
    };
    out.dq = [k](double r) {
        if (r < small_radius_fraction * k->R)
            return 0.0;
        return (k->rq_r(r) - k->rq(r) / r) / r;
    };
    out.p = [k](double r) {
        r = std::max(r, small_radius_fraction * k->R);
        return k->rp(r) / r;
    };
    out.slice_time = t_target;
    out.support_radius = data.support_radius + std::abs(s);
    out.inner_radius = std::max(0.0, std::abs(s) - data.support_radius);
    // Any data kink at radius b propagates to |s ± b|.
    std::vector<double> pts;
    std::vector<double> sources = data.breakpoints;
    sources.push_back(0.0);
    for (double b : sources) {
        add_break(pts, std::abs(s) + b);
        add_break(pts, std::abs(std::abs(s) - b));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    out.breakpoints = pts;
    return out;
}

double phi_mode_solution(const SmearingProfile& profile, double dt, double r) {
    if (profile.delta() != 2.0)
        throw DomainError("phi_mode_solution: closed form requires delta = 2");
    const SmearingProfile prof = profile.moved_to({0, 0, 0});
    const double R = prof.radius();
    if (r < small_radius_fraction * R) {
        // limit of the bracket / r: −2Ψ'(dt) with Ψ'(x) = −x F(x)/2
        return dt * radial_F<double>(prof, dt);
    }
    const double u = r - dt, v = r + dt;
    const double Fu = radial_F<double>(prof, u), Fv = radial_F<double>(prof, v);
    return R * R / (12 * r) * ((1 - u * u / (R * R)) * Fu - (1 - v * v / (R * R)) * Fv);
}

double pi_mode_solution(const SmearingProfile& profile, double dt, double r) {
    if (profile.delta() != 2.0)
        throw DomainError("pi_mode_solution: closed form requires delta = 2");
    const SmearingProfile prof = profile.moved_to({0, 0, 0});
    const double R = prof.radius();
    if (r < small_radius_fraction * R)
        return -g_fn(prof, dt, 1);
    const double u = r - dt, v = r + dt;
    return -R / (2 * r) * ((v / R) * radial_F<double>(prof, v) + (u / R) * radial_F<double>(prof, u));
}

PhaseSpaceElement mode_element(const SmearingProfile& profile, ModeKind kind, double t_i, double t0,
                               const PrecisionContext& ctx) {
    (void)ctx;
    const SmearingProfile prof = profile.moved_to({0, 0, 0});
    const double s = t0 - t_i;
    auto gen = std::make_shared<DAlembert>();
    if (kind == ModeKind::Field) {
        // f = −Ψ with Ψ' = −g/2: f' = g/2.
        gen->f = [prof](double x, int k) {
            if (k == 0)
                return 0.5 * g_antiderivative(prof, x);
            return 0.5 * g_fn(prof, x, k - 1);
        };
    } else {
        // f = −g/2.
        gen->f = [prof](double x, int k) { return -0.5 * g_fn(prof, x, k); };
    }
    PhaseSpaceElement e = from_generator(gen, s, prof.radius(), t0);
    e.spectral = {SpectralTerm{kind, t_i, 1.0}};
    e.spectral_delta = prof.delta();
    e.spectral_radius = prof.radius();
    return e;
}

double field_energy(const PhaseSpaceElement& e, const PrecisionContext& ctx) {
    std::vector<double> pts{e.inner_radius, e.support_radius};
    for (double b : e.breakpoints)
        if (b > e.inner_radius && b < e.support_radius)
            pts.push_back(b);
    auto f = [&](double r) {
        const double p = e.p(r), dq = e.dq(r);
        return 2 * M_PI * r * r * (p * p + dq * dq);
    };
    return integrate_adaptive<double>(f, pts, ctx).value;
}

PhaseSpaceElement linear_combination(const std::vector<double>& coeffs, const std::vector<PhaseSpaceElement>& elements) {
    if (coeffs.size() != elements.size() || elements.empty())
        throw DomainError("linear_combination: size mismatch");
    std::vector<double> c;
    auto parts = std::make_shared<std::vector<PhaseSpaceElement>>();
    PhaseSpaceElement out;
    out.slice_time = elements.front().slice_time;
    out.inner_radius = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (elements[i].slice_time != out.slice_time)
            throw DomainError("linear_combination: elements live on different slices");
        if (coeffs[i] == 0.0)
            continue;
        c.push_back(coeffs[i]);
        parts->push_back(elements[i]);
        out.support_radius = std::max(out.support_radius, elements[i].support_radius);
        out.inner_radius = std::min(out.inner_radius, elements[i].inner_radius);
        out.breakpoints.insert(out.breakpoints.end(), elements[i].breakpoints.begin(), elements[i].breakpoints.end());
    }
    if (parts->empty())
        out.inner_radius = 0.0;
    std::sort(out.breakpoints.begin(), out.breakpoints.end());
    out.breakpoints.erase(std::unique(out.breakpoints.begin(), out.breakpoints.end()), out.breakpoints.end());

    bool spectral = true;
    for (const auto& e : *parts)
        spectral = spectral && !e.spectral.empty() && e.spectral_delta == parts->front().spectral_delta &&
                   e.spectral_radius == parts->front().spectral_radius;
    if (spectral && !parts->empty()) {
        out.spectral_delta = parts->front().spectral_delta;
        out.spectral_radius = parts->front().spectral_radius;
        for (std::size_t i = 0; i < parts->size(); ++i)
            for (const auto& t : (*parts)[i].spectral)
                out.spectral.push_back({t.kind, t.t_i, c[i] * t.coeff});
    }
    auto sum = [parts, c](RadialFn PhaseSpaceElement::*member) {
        return [parts, c, member](double r) {
            double v = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i)
                v += c[i] * ((*parts)[i].*member)(r);
            return v;
        };
    };
    out.q = sum(&PhaseSpaceElement::q);
    out.dq = sum(&PhaseSpaceElement::dq);
    out.p = sum(&PhaseSpaceElement::p);
    return out;
}

} // namespace fieldent
