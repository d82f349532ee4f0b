#pragma once

#include "fieldent/correlations.hpp"
#include "fieldent/modes.hpp"
#include "fieldent/precision.hpp"

#include <vector>

namespace fieldent {

// σ = 2Re⟨Ξ Ξᵀ⟩ in the ordering (Q¹, P¹, …, Qᴹ, Pᴹ); the first modes_A
// modes belong to region A, the rest to B.
struct CovarianceMatrix {
    MatrixMP entries;
    int modes_A = 0;
    int modes_B = 0;
    // Bound on the absolute error of every entry, propagated from the
    // quadrature tolerance.
    mp_real entry_error = 0;

    int modes() const { return modes_A + modes_B; }
};

// Ω = ⊕ [[0, −1], [1, 0]].
MatrixMP symplectic_form(int modes);

// Correlations 2Re⟨Oₐ O_b⟩ of the original modes (Φ¹, Π¹, …) on grid_a and
// grid_b, with region b displaced by d. Entries are evaluated in parallel
// over distinct time offsets.
MatrixMP original_correlations(const VacuumKernel& kernel, const ModeGrid& grid_a, const ModeGrid& grid_b,
                               double d, unsigned jobs = 1);

// Same from momentum-space moments (double precision, any δ ≥ 1).
MatrixMP original_correlations_kspace(const SmearingProfile& profile, const ModeGrid& grid_a,
                                      const ModeGrid& grid_b, double d, const PrecisionContext& ctx,
                                      unsigned jobs = 1);

// Throws CausalityError unless every mode of A commutes with every mode of
// B, i.e. d ≥ |tᵢ − tⱼ| + R_A + R_B for all instants. Returns the smallest
// margin d − |tᵢ − tⱼ| − R_A − R_B.
double certify_microcausality(const CanonicalModeSet& a, const CanonicalModeSet& b, double d);

// [[σ_D, η], [ηᵀ, σ_B]] from the vacuum kernel; σ_B = σ_D is reused when
// the sets coincide.
CovarianceMatrix assemble_covariance(const CanonicalModeSet& a, const CanonicalModeSet& b, const Vec3& separation,
                                     const VacuumKernel& kernel, unsigned jobs = 1);

CovarianceMatrix assemble_covariance_kspace(const CanonicalModeSet& a, const CanonicalModeSet& b,
                                            const Vec3& separation, const PrecisionContext& ctx,
                                            unsigned jobs = 1);

// Flips the sign of every P row and column of the B partition.
CovarianceMatrix partial_transpose(const CovarianceMatrix& cov);

struct SymplecticSpectrum {
    std::vector<mp_real> values;    // ascending, one per mode
    std::vector<mp_real> alternate; // from the second algorithm
    mp_real path_deviation = 0;     // max |values − alternate|
};

// Primary path: eigenvalues ±iν of σΩ⁻¹ from a general eigen-solver.
// Secondary path: σ = LLᵀ, then ν² are the eigenvalues of the symmetric
// matrix (LᵀΩ⁻¹L)ᵀ(LᵀΩ⁻¹L). Throws PrecisionError when the two disagree
// by more than max(target_rel_tol, 10⁶·ε·max|σ|), or when σ is not
// positive definite.
SymplecticSpectrum symplectic_spectrum(const MatrixMP& sigma, const PrecisionContext& ctx);

struct NegativityReport {
    double log_negativity = 0.0; // 0 when certified zero
    mp_real raw_sum = 0;         // Σ max(0, −log₂ ν̃) without thresholding
    std::vector<mp_real> ppt_spectrum;
    mp_real min_ppt = 0;
    int n_below_one = 0;
    mp_real zero_tolerance = 0;
    mp_real path_deviation = 0;
    bool certified_zero = false;
};

// E_N = Σ max(0, −log₂ ν̃) over the partially transposed spectrum. Reported
// as exactly 0 when every ν̃ ≥ 1 − zero_tolerance, with
// zero_tolerance = 10·max(entry error, spectrum path deviation).
NegativityReport log_negativity(const CovarianceMatrix& cov, const PrecisionContext& ctx);

// Min symplectic eigenvalue of σ itself (physicality check).
mp_real min_symplectic_eigenvalue(const CovarianceMatrix& cov, const PrecisionContext& ctx);

// E_N between the single equal-time modes (Φ, Π) of two regions with the
// same profile, unit radius scale and centre distance sep_over_R·R.
// Integer δ uses the position-space kernel at ctx precision, other δ the
// momentum-space moments in double precision.
NegativityReport pairwise_mode_negativity(double delta, double sep_over_R, const PrecisionContext& ctx);

} // namespace fieldent
