#pragma once

#include "fieldent/precision.hpp"
#include "fieldent/smearing.hpp"
#include "fieldent/specfun.hpp"
#include "fieldent/waveprop.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace fieldent {

template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
using MatrixMP = Matrix<mp_real>;

struct ModeGrid {
    int N = 1;
    double T = 0.0;
    std::vector<double> times;

    // tᵢ = −T/2 + iT/(N − 1); the single instant of an N = 1 grid is t = 0.
    static ModeGrid uniform(int N, double T);
    double spacing() const { return N > 1 ? T / (N - 1) : 0.0; }
    // Same instants at the current mp precision, computed from the exact
    // rational position of each point.
    std::vector<mp_real> times_mp() const;
};

// α^{ij} = ω(Φⁱ, Φʲ), β^{ij} = ω(Πⁱ, Πʲ), γ^{ij} = ω(Φⁱ, Πʲ), where
// [Ô₁, Ô₂] = i ω(Ô₁, Ô₂).
template <class T>
struct CommutatorTables {
    Matrix<T> alpha;
    Matrix<T> beta;
    Matrix<T> gamma;

    int size() const { return static_cast<int>(alpha.rows()); }
    // 2N×2N commutator matrix in the ordering (Φ¹, Π¹, …, Φᴺ, Πᴺ).
    Matrix<T> commutator_matrix() const;
};

double symplectic_product(const PhaseSpaceElement& e1, const PhaseSpaceElement& e2, const PrecisionContext& ctx);

// Product of elements centred at different points. Exactly zero when the
// two supports are disjoint; overlapping displaced supports are rejected.
double symplectic_product_displaced(const PhaseSpaceElement& e1, const Vec3& c1, const PhaseSpaceElement& e2,
                                    const Vec3& c2, const PrecisionContext& ctx);

// Appendix-style closed forms for a single time offset Δt = tᵢ − tⱼ.
// Returns {α, β, γ}. Valid for δ ≥ 1 except half-integers.
template <class T>
std::array<T, 3> commutators_closed_form(double delta, double R, const T& dt, const PrecisionContext& ctx);

CommutatorTables<mp_real> commutator_tables_closed_form(const SmearingProfile& profile, const ModeGrid& grid,
                                                        const PrecisionContext& ctx);

CommutatorTables<double> commutator_tables_numeric(const SmearingProfile& profile, const ModeGrid& grid, double t0,
                                                   const PrecisionContext& ctx);

struct CanonicalModeSet {
    int size = 0;
    ModeGrid grid;
    SmearingProfile profile{2.0, 1.0};
    std::vector<int> processing_order;
    // Row 2k (2k+1) holds Q (P) of the k-th processed instant in terms of
    // the columns (Φ¹, Π¹, …, Φᴺ, Πᴺ) in time order.
    MatrixMP coeffs;

    // Canonical elements on slice t0, in the row order of coeffs.
    std::vector<PhaseSpaceElement> elements(double t0, const PrecisionContext& ctx) const;
};

struct GramSchmidtOptions {
    std::vector<int> processing_order; // empty: time order
    double degeneracy_threshold = 1e-30;
};

CanonicalModeSet symplectic_gram_schmidt(const CommutatorTables<mp_real>& tables, const ModeGrid& grid,
                                         const SmearingProfile& profile, const GramSchmidtOptions& options = {});

// Standard form J = ⊕ [[0, 1], [−1, 0]] in the commutator convention.
MatrixMP standard_commutator_form(int modes);

// max |C K Cᵀ − J| entrywise.
mp_real ccr_deviation(const CanonicalModeSet& set, const CommutatorTables<mp_real>& tables);

} // namespace fieldent
