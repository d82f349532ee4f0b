#pragma once

#include "fieldent/precision.hpp"
#include "fieldent/smearing.hpp"

#include <functional>
#include <vector>

namespace fieldent {

enum class ModeKind { Field, Momentum };

// One original mode Φ̂(tᵢ, F) or Π̂(tᵢ, F) with a coefficient; elements built
// from such atoms carry their momentum-space representation exactly.
struct SpectralTerm {
    ModeKind kind;
    double t_i;
    double coeff;
};

using RadialFn = std::function<double(double)>;

// Phase-space representation (q, p) = (φ(t₀, r), ∂ₜφ(t₀, r)) of a smeared
// observable on the slice t₀. The radial derivative of q is carried
// alongside so the element can serve as Cauchy data for further evolution
// and for energy integrals.
struct PhaseSpaceElement {
    RadialFn q;
    RadialFn dq;
    RadialFn p;
    double slice_time = 0.0;
    double support_radius = 0.0; // q = p = 0 for r > support_radius
    double inner_radius = 0.0;   // q = p = 0 for r < inner_radius
    std::vector<double> breakpoints; // radii where the functions are not smooth

    // Present when the element is a combination of original modes of one
    // profile (empty otherwise).
    std::vector<SpectralTerm> spectral;
    double spectral_delta = 0.0;
    double spectral_radius = 0.0;
};

// Cauchy data at t_init (the element's slice_time) evolved to t_target
// with the spherical Kirchhoff formula. q and ∂ᵣq are obtained from the
// formula directly and p from its analytic time derivative; the remaining
// ∫ s ψ(s) ds is done by quadrature.
PhaseSpaceElement evolve_spherical(const PhaseSpaceElement& data, double t_target, const PrecisionContext& ctx);

// Cauchy data (φ, ∂ₜφ) = (0, F) for FIELD and (−F, 0) for MOMENTUM at time t.
PhaseSpaceElement initial_data(const SmearingProfile& profile, ModeKind kind, double t);

// Closed forms for δ = 2; dt = t₀ − tᵢ is the evolution time.
double phi_mode_solution(const SmearingProfile& profile, double dt, double r);
double pi_mode_solution(const SmearingProfile& profile, double dt, double r);

// Mode operator Φ̂(tᵢ, F) or Π̂(tᵢ, F) represented on the slice t₀.
PhaseSpaceElement mode_element(const SmearingProfile& profile, ModeKind kind, double t_i, double t0,
                               const PrecisionContext& ctx);

// E = ½∫(p² + |∇q|²) d³x.
double field_energy(const PhaseSpaceElement& e, const PrecisionContext& ctx);

// Σ cₖ eₖ on a common slice.
PhaseSpaceElement linear_combination(const std::vector<double>& coeffs, const std::vector<PhaseSpaceElement>& elements);

} // namespace fieldent
