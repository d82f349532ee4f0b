#include "fieldent/gaussian.hpp"

#include "fieldent/errors.hpp"
#include "fieldent/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>

namespace fieldent {

namespace {

using VectorMP = Eigen::Matrix<mp_real, Eigen::Dynamic, 1>;

bool same_uniform_grid(const ModeGrid& a, const ModeGrid& b) {
    return a.N == b.N && a.T == b.T && a.times == b.times;
}

// τᵢⱼ = tᵢ − tⱼ; exact multiples of the spacing when the grids coincide so
// equal offsets share one kernel evaluation.
mp_real offset(const ModeGrid& a, const ModeGrid& b, const std::vector<mp_real>& ta,
               const std::vector<mp_real>& tb, int i, int j) {
    if (same_uniform_grid(a, b) && a.N > 1)
        return mp_real(a.T) * (i - j) / (a.N - 1);
    return ta[i] - tb[j];
}

mp_real max_row_sum(const MatrixMP& C) {
    mp_real m = 0;
    for (int r = 0; r < C.rows(); ++r)
        m = std::max(m, mp_real(C.row(r).cwiseAbs().sum()));
    return m;
}

CovarianceMatrix combine(const CanonicalModeSet& a, const CanonicalModeSet& b, const MatrixMP& S_aa,
                         const MatrixMP& S_bb, const MatrixMP& S_ab, const mp_real& source_error) {
    const int na = 2 * a.size, nb = 2 * b.size;
    CovarianceMatrix cov;
    cov.modes_A = a.size;
    cov.modes_B = b.size;
    cov.entries = MatrixMP::Zero(na + nb, na + nb);
    const MatrixMP sigma_a = a.coeffs * S_aa * a.coeffs.transpose();
    cov.entries.topLeftCorner(na, na) = sigma_a;
    if (&S_aa == &S_bb && a.coeffs.rows() == b.coeffs.rows() && a.coeffs == b.coeffs)
        cov.entries.bottomRightCorner(nb, nb) = sigma_a;
    else
        cov.entries.bottomRightCorner(nb, nb) = b.coeffs * S_bb * b.coeffs.transpose();
    const MatrixMP eta = a.coeffs * S_ab * b.coeffs.transpose();
    cov.entries.topRightCorner(na, nb) = eta;
    cov.entries.bottomLeftCorner(nb, na) = eta.transpose();
    const mp_real ra = max_row_sum(a.coeffs), rb = max_row_sum(b.coeffs);
    cov.entry_error = source_error * std::max({ra * ra, rb * rb, ra * rb});
    return cov;
}

} // namespace

MatrixMP symplectic_form(int modes) {
    MatrixMP W = MatrixMP::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        W(2 * k, 2 * k + 1) = -1;
        W(2 * k + 1, 2 * k) = 1;
    }
    return W;
}

MatrixMP original_correlations(const VacuumKernel& kernel, const ModeGrid& grid_a, const ModeGrid& grid_b,
                               double d, unsigned jobs) {
    const PrecisionContext& ctx = kernel.context();
    ScopedPrecision sp(ctx);
    const auto ta = grid_a.times_mp();
    const auto tb = grid_b.times_mp();
    const mp_real dist(d);

    // s and s'' are even in τ, s' is odd: evaluate at |τ| only.
    std::map<mp_real, int> index;
    std::vector<mp_real> taus;
    std::vector<std::vector<int>> slot(grid_a.N, std::vector<int>(grid_b.N));
    for (int i = 0; i < grid_a.N; ++i) {
        for (int j = 0; j < grid_b.N; ++j) {
            const mp_real t = abs(offset(grid_a, grid_b, ta, tb, i, j));
            auto [it, inserted] = index.emplace(t, static_cast<int>(taus.size()));
            if (inserted)
                taus.push_back(t);
            slot[i][j] = it->second;
        }
    }
    std::vector<mp_real> values(3 * taus.size());
    parallel_for(values.size(), jobs, ctx, [&](std::size_t n) {
        values[n] = kernel.correlation(taus[n / 3], dist, static_cast<int>(n % 3));
    });

    MatrixMP S(2 * grid_a.N, 2 * grid_b.N);
    for (int i = 0; i < grid_a.N; ++i) {
        for (int j = 0; j < grid_b.N; ++j) {
            const int u = slot[i][j];
            const bool negative = offset(grid_a, grid_b, ta, tb, i, j) < 0;
            const mp_real s0 = values[3 * u], s2 = values[3 * u + 2];
            const mp_real s1 = negative ? mp_real(-values[3 * u + 1]) : values[3 * u + 1];
            S(2 * i, 2 * j) = s0;
            S(2 * i, 2 * j + 1) = -s1;
            S(2 * i + 1, 2 * j) = s1;
            S(2 * i + 1, 2 * j + 1) = -s2;
        }
    }
    return S;
}

MatrixMP original_correlations_kspace(const SmearingProfile& profile, const ModeGrid& grid_a,
                                      const ModeGrid& grid_b, double d, const PrecisionContext& ctx,
                                      unsigned jobs) {
    std::vector<PhaseSpaceElement> ea, eb;
    for (double t : grid_a.times) {
        ea.push_back(mode_element(profile, ModeKind::Field, t, 0.0, ctx));
        ea.push_back(mode_element(profile, ModeKind::Momentum, t, 0.0, ctx));
    }
    for (double t : grid_b.times) {
        eb.push_back(mode_element(profile, ModeKind::Field, t, 0.0, ctx));
        eb.push_back(mode_element(profile, ModeKind::Momentum, t, 0.0, ctx));
    }
    const std::size_t na = ea.size(), nb = eb.size();
    std::vector<double> values(na * nb);
    parallel_for(values.size(), jobs, ctx, [&](std::size_t n) {
        values[n] = vacuum_moment(ea[n / nb], eb[n % nb], {d, 0.0, 0.0}, ctx);
    });
    MatrixMP S(na, nb);
    for (std::size_t n = 0; n < values.size(); ++n)
        S(n / nb, n % nb) = values[n];
    return S;
}

double certify_microcausality(const CanonicalModeSet& a, const CanonicalModeSet& b, double d) {
    const double reach = a.profile.radius() + b.profile.radius();
    double margin = std::numeric_limits<double>::infinity();
    for (double ti : a.grid.times)
        for (double tj : b.grid.times)
            margin = std::min(margin, d - std::abs(ti - tj) - reach);
    if (margin < 0)
        throw CausalityError("gaussian", "assemble_covariance",
                             "modes of A and B do not commute: separation " + format_real(d, 17) +
                                 " is short of the light-cone bound by " + format_real(-margin, 6));
    return margin;
}

CovarianceMatrix assemble_covariance(const CanonicalModeSet& a, const CanonicalModeSet& b, const Vec3& separation,
                                     const VacuumKernel& kernel, unsigned jobs) {
    const double d = norm(separation);
    certify_microcausality(a, b, d);
    ScopedPrecision sp(kernel.context());
    const MatrixMP S_aa = original_correlations(kernel, a.grid, a.grid, 0.0, jobs);
    const bool same = same_uniform_grid(a.grid, b.grid);
    const MatrixMP S_bb = same ? MatrixMP() : original_correlations(kernel, b.grid, b.grid, 0.0, jobs);
    const MatrixMP S_ab = original_correlations(kernel, a.grid, b.grid, d, jobs);
    mp_real scale = S_aa.cwiseAbs().maxCoeff();
    if (!same)
        scale = std::max(scale, mp_real(S_bb.cwiseAbs().maxCoeff()));
    const mp_real err = scale * mp_real(kernel.context().target_rel_tol);
    return combine(a, b, S_aa, same ? S_aa : S_bb, S_ab, err);
}

CovarianceMatrix assemble_covariance_kspace(const CanonicalModeSet& a, const CanonicalModeSet& b,
                                            const Vec3& separation, const PrecisionContext& ctx, unsigned jobs) {
    const double d = norm(separation);
    certify_microcausality(a, b, d);
    const MatrixMP S_aa = original_correlations_kspace(a.profile, a.grid, a.grid, 0.0, ctx, jobs);
    const MatrixMP S_bb = original_correlations_kspace(b.profile, b.grid, b.grid, 0.0, ctx, jobs);
    const MatrixMP S_ab = original_correlations_kspace(a.profile, a.grid, b.grid, d, ctx, jobs);
    const mp_real scale = std::max(S_aa.cwiseAbs().maxCoeff(), S_bb.cwiseAbs().maxCoeff());
    const double tol = std::max(ctx.target_rel_tol, 4 * epsilon_of<double>());
    return combine(a, b, S_aa, S_bb, S_ab, scale * mp_real(tol));
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& cov) {
    CovarianceMatrix out = cov;
    const int n = static_cast<int>(cov.entries.rows());
    for (int k = cov.modes_A; k < cov.modes(); ++k) {
        const int p = 2 * k + 1;
        for (int j = 0; j < n; ++j) {
            out.entries(p, j) = -out.entries(p, j);
            out.entries(j, p) = -out.entries(j, p);
        }
    }
    return out;
}

SymplecticSpectrum symplectic_spectrum(const MatrixMP& sigma, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx);
    const int n = static_cast<int>(sigma.rows());
    if (n % 2 != 0 || sigma.cols() != n)
        throw DomainError("symplectic_spectrum: covariance must be square of even size");
    const int M = n / 2;
    const MatrixMP W_inv = -symplectic_form(M);

    SymplecticSpectrum out;
    {
        Eigen::EigenSolver<MatrixMP> es(sigma * W_inv, false);
        if (es.info() != Eigen::Success)
            throw ConvergenceError("gaussian", "symplectic_spectrum", "general eigen-solver did not converge");
        std::vector<mp_real> mags;
        for (int i = 0; i < n; ++i)
            mags.push_back(abs(es.eigenvalues()[i]));
        std::sort(mags.begin(), mags.end());
        for (int k = 0; k < M; ++k)
            out.values.push_back((mags[2 * k] + mags[2 * k + 1]) / 2);
    }
    {
        Eigen::LLT<MatrixMP> llt(sigma);
        if (llt.info() != Eigen::Success)
            throw PrecisionError("gaussian", "symplectic_spectrum",
                                 "covariance is not positive definite at working precision");
        const MatrixMP L = llt.matrixL();
        const MatrixMP B = L.transpose() * W_inv * L;
        Eigen::SelfAdjointEigenSolver<MatrixMP> es(B.transpose() * B, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw ConvergenceError("gaussian", "symplectic_spectrum", "symmetric eigen-solver did not converge");
        std::vector<mp_real> sq;
        for (int i = 0; i < n; ++i)
            sq.push_back(sqrt(std::max(mp_real(0), mp_real(es.eigenvalues()[i]))));
        std::sort(sq.begin(), sq.end());
        for (int k = 0; k < M; ++k)
            out.alternate.push_back((sq[2 * k] + sq[2 * k + 1]) / 2);
    }
    for (int k = 0; k < M; ++k)
        out.path_deviation = std::max(out.path_deviation, mp_real(abs(out.values[k] - out.alternate[k])));

    const mp_real scale = sigma.cwiseAbs().maxCoeff();
    const mp_real limit = std::max(mp_real(ctx.target_rel_tol), 1e6 * epsilon_of<mp_real>() * scale);
    if (out.path_deviation > limit)
        throw PrecisionError("gaussian", "symplectic_spectrum",
                             "eigen-solver paths disagree by " + format_real(out.path_deviation, 6) +
                                 "; increase the working precision");
    return out;
}

NegativityReport log_negativity(const CovarianceMatrix& cov, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx);
    const auto spec = symplectic_spectrum(partial_transpose(cov).entries, ctx);
    NegativityReport r;
    r.ppt_spectrum = spec.values;
    r.path_deviation = spec.path_deviation;
    r.min_ppt = spec.values.empty() ? mp_real(1) : spec.values.front();
    r.zero_tolerance = 10 * std::max({cov.entry_error, spec.path_deviation, 16 * epsilon_of<mp_real>()});
    const mp_real ln2 = log(mp_real(2));
    for (const auto& v : spec.values) {
        if (v < 1) {
            ++r.n_below_one;
            r.raw_sum -= log(v) / ln2;
        }
    }
    r.certified_zero = r.min_ppt >= 1 - r.zero_tolerance;
    r.log_negativity = r.certified_zero ? 0.0 : to_double(r.raw_sum);
    return r;
}

mp_real min_symplectic_eigenvalue(const CovarianceMatrix& cov, const PrecisionContext& ctx) {
    const auto spec = symplectic_spectrum(cov.entries, ctx);
    return spec.values.front();
}

NegativityReport pairwise_mode_negativity(double delta, double sep_over_R, const PrecisionContext& ctx) {
    if (!(sep_over_R >= 2.0))
        throw DomainError("pairwise_mode_negativity: regions overlap (sep_over_R < 2)");
    ctx.validate();
    ScopedPrecision sp(ctx);
    const SmearingProfile profile(delta, 1.0);
    CanonicalModeSet set;
    set.size = 1;
    set.grid = ModeGrid::uniform(1, 1.0);
    set.profile = profile;
    set.processing_order = {0};
    set.coeffs = MatrixMP::Identity(2, 2);
    const Vec3 sep{sep_over_R, 0.0, 0.0};
    if (profile.integer_delta()) {
        VacuumKernel kernel(profile, ctx);
        return log_negativity(assemble_covariance(set, set, sep, kernel), ctx);
    }
    const PrecisionContext dbl{53, std::max(ctx.target_rel_tol, 1e-12)};
    return log_negativity(assemble_covariance_kspace(set, set, sep, dbl), ctx);
}

} // namespace fieldent
