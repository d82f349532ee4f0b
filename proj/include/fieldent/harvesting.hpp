#pragma once

#include "fieldent/precision.hpp"
#include "fieldent/smearing.hpp"

#include <complex>
#include <string>
#include <vector>

namespace fieldent {

// Unruh-DeWitt detector at rest at `position`, switched on by χ centred at
// t = 0. Gap Ω in inverse length units.
struct DetectorConfig {
    double gap = 0.0;
    SmearingProfile smearing{2.0, 1.0};
    SwitchingProfile switching{40.0};
    Vec3 position{0.0, 0.0, 0.0};
    double coupling = 1.0;

    void validate() const;
};

// Leading-order (λ²) density-matrix elements of the detector pair.
struct HarvestResult {
    double L_AA = 0.0;
    double L_BB = 0.0;
    std::complex<double> L_AB{0.0, 0.0};
    std::complex<double> M{0.0, 0.0};
    double negativity_log = 0.0;
    std::string diagnostic; // set when |M| cannot overcome the local-noise asymmetry
};

// Throws DomainError unless |x_A − x_B| ≥ (T_A + T_B)/2 + R_A + R_B.
void check_spacelike(const DetectorConfig& a, const DetectorConfig& b);

// 𝓛_IJ = λ_Iλ_J/(4π²) ∫₀^∞ k F̃_I F̃_J sinc(k d_IJ) χ̃_I(k + Ω_I) χ̃_J(k + Ω_J) dk.
std::complex<double> local_term(const DetectorConfig& i, const DetectorConfig& j, const PrecisionContext& ctx);

// 𝓜 = −λ_Aλ_B/(4π²) ∫₀^∞ k F̃_A F̃_B sinc(k d) χ̃_A(k − Ω_A) χ̃_B(k + Ω_B) dk
// on spacelike configurations.
std::complex<double> nonlocal_term(const DetectorConfig& a, const DetectorConfig& b, const PrecisionContext& ctx);

// E = (L_AA + L_BB)/2 − sqrt(|M|² − ((L_AA − L_BB)/2)²), E_N = max(0, −2E).
double detector_log_negativity(double L_AA, double L_BB, std::complex<double> M, std::string* diagnostic = nullptr);

HarvestResult detector_negativity(const DetectorConfig& a, const DetectorConfig& b, const PrecisionContext& ctx);

// Same quantities with every transform replaced by direct quadrature: for
// each k, the time integrals ∫χ(t)e^{∓i(k±Ω)t}dt and the radial integral
// 4π∫r²F(r)sinc(kr)dr are computed numerically inside the outer k
// quadrature. Independent of the closed-form transforms.
HarvestResult detector_negativity_nested(const DetectorConfig& a, const DetectorConfig& b,
                                         const PrecisionContext& ctx);

struct SweepPoint {
    double omega_R = 0.0;
    HarvestResult result;
};

// Identical detectors (gap overwritten per point, ΩR given in units of the
// smearing radius). The k-quadrature grid and the gap-independent factors
// k F̃² and sinc(kd) are computed once and shared across all gaps.
std::vector<SweepPoint> gap_sweep(const DetectorConfig& a, const DetectorConfig& b,
                                  const std::vector<double>& omega_R, const PrecisionContext& ctx,
                                  unsigned jobs = 1);

// ΩR values start, start + step, …, ≤ stop (inclusive up to rounding).
std::vector<double> gap_range(double start, double stop, double step);

} // namespace fieldent
