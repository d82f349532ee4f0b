#pragma once

#include "fieldent/autocorrelation.hpp"
#include "fieldent/cache.hpp"
#include "fieldent/precision.hpp"
#include "fieldent/smearing.hpp"
#include "fieldent/waveprop.hpp"

#include <memory>

namespace fieldent {

// Vacuum correlations of instantaneous smeared modes in position space.
// For two regions of the same profile a distance d apart and τ = tᵢ − tⱼ,
//   2Re⟨Φᵢ Φⱼ⟩ = s(τ),  2Re⟨Φᵢ Πⱼ⟩ = −s′(τ),
//   2Re⟨Πᵢ Φⱼ⟩ = s′(τ), 2Re⟨Πᵢ Πⱼ⟩ = −s″(τ),
// and the commutators are expressed through H (see AutocorrelationPolynomial).
// s is obtained from H by a one-dimensional integral: a Hilbert transform
// for d = 0 and an arctanh kernel for d > 0. Integer δ only.
class VacuumKernel {
public:
    VacuumKernel(const SmearingProfile& profile, const PrecisionContext& ctx,
                 std::shared_ptr<KernelCache> cache = nullptr);

    // s^{(k)}(τ; d), k = 0, 1, 2. For d > 0 the regions must be spacelike:
    // d ≥ |τ| + 2R.
    mp_real correlation(const mp_real& tau, const mp_real& d, int k) const;

    // H^{(k)}(τ) for the profile's radius.
    mp_real commutator_function(const mp_real& tau, int k) const;

    const SmearingProfile& profile() const { return profile_; }
    const PrecisionContext& context() const { return ctx_; }
    const AutocorrelationPolynomial& polynomial() const { return poly_; }

    // Canonical description used for the cache key.
    std::string describe(const mp_real& tau, const mp_real& d, int k) const;

private:
    mp_real compute(const mp_real& tau, const mp_real& d, int k) const;

    SmearingProfile profile_;
    PrecisionContext ctx_;
    AutocorrelationPolynomial poly_;
    std::shared_ptr<KernelCache> cache_;
};

// 2Re⟨Ô(e₁) Ô(e₂)⟩ for elements whose momentum-space form is known, with
// e₂'s region displaced by `separation` from e₁'s:
//   (1/2π²) ∫₀^∞ dk [k w̃₁w̃₂ + k³ z̃₁z̃₂] sinc(k|separation|),
// where Ô = ∫(w φ + z π) on the common slice, i.e. w = p and z = −q.
double vacuum_moment(const PhaseSpaceElement& e1, const PhaseSpaceElement& e2, const Vec3& separation,
                     const PrecisionContext& ctx);

} // namespace fieldent
