#include "fieldent/errors.hpp"
#include "fieldent/gaussian.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fieldent;

namespace {

CovarianceMatrix small_multimode(int N, double T, double d, const PrecisionContext& ctx,
                                 const std::vector<int>& order = {}) {
    SmearingProfile p(2.0, 1.0);
    VacuumKernel kernel(p, ctx);
    auto grid = ModeGrid::uniform(N, T);
    auto tables = commutator_tables_closed_form(p, grid, ctx);
    auto set = symplectic_gram_schmidt(tables, grid, p, {order});
    return assemble_covariance(set, set, {d, 0, 0}, kernel);
}

} // namespace

TEST_CASE("symplectic form") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    const MatrixMP W = symplectic_form(3);
    CHECK((W + W.transpose()).cwiseAbs().maxCoeff() == 0);
    CHECK((W * W + MatrixMP::Identity(6, 6)).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("symplectic spectra of reference states") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    auto id = symplectic_spectrum(MatrixMP::Identity(6, 6), hi);
    for (const auto& v : id.values)
        CHECK(abs(v - 1) < 1e-30);

    MatrixMP sq = MatrixMP::Zero(2, 2);
    sq(0, 0) = mp_real(7) / 3;
    sq(1, 1) = mp_real(3) / 7;
    CHECK(abs(symplectic_spectrum(sq, hi).values[0] - 1) < 1e-30);

    for (const char* s : {"0.1", "0.5", "1.3"}) {
        const mp_real r(s);
        auto tmsv = oracle::two_mode_squeezed(r);
        auto spec = symplectic_spectrum(tmsv.entries, hi);
        CHECK(abs(spec.values[0] - 1) < 1e-25);
        CHECK(abs(spec.values[1] - 1) < 1e-25);
        auto neg = log_negativity(tmsv, hi);
        CHECK(abs(neg.ppt_spectrum[0] - exp(-2 * r)) < 1e-25);
        CHECK(std::abs(neg.log_negativity - 2 * to_double(r) / std::log(2.0)) < 1e-10);
        CHECK(neg.n_below_one == 1);
    }
}

TEST_CASE("partial transpose") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    auto cov = oracle::two_mode_squeezed(mp_real("0.4"));
    auto twice = partial_transpose(partial_transpose(cov));
    CHECK(twice.entries == cov.entries);
    CovarianceMatrix onlyA = cov;
    onlyA.modes_A = 2;
    onlyA.modes_B = 0;
    CHECK(partial_transpose(onlyA).entries == cov.entries);

    // Product state: same spectrum before and after, E_N = 0.
    CovarianceMatrix prod = cov;
    prod.entries.topRightCorner(2, 2).setZero();
    prod.entries.bottomLeftCorner(2, 2).setZero();
    auto a = symplectic_spectrum(prod.entries, hi), b = symplectic_spectrum(partial_transpose(prod).entries, hi);
    CHECK(abs(a.values[0] - b.values[0]) < 1e-30);
    CHECK(log_negativity(prod, hi).log_negativity == 0.0);
}

TEST_CASE("general spectra agree with the two-mode invariant formula") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto S = oracle::random_symplectic(2, seed, 0.4);
        CHECK(oracle::symplecticity_defect(S) < 1e-30);
        CovarianceMatrix thermal;
        thermal.modes_A = thermal.modes_B = 1;
        thermal.entries = MatrixMP::Identity(4, 4);
        thermal.entries(0, 0) = thermal.entries(1, 1) = mp_real(2);
        thermal.entries(2, 2) = thermal.entries(3, 3) = mp_real(3);
        const MatrixMP sigma = S * thermal.entries * S.transpose();
        auto spec = symplectic_spectrum(sigma, hi);
        auto ref = oracle::two_mode_spectrum(sigma);
        CHECK(abs(spec.values[0] - ref[0]) < 1e-25);
        CHECK(abs(spec.values[1] - ref[1]) < 1e-25);
        CHECK(abs(spec.values[0] - 2) < 1e-25);
        CHECK(abs(spec.values[1] - 3) < 1e-25);
    }
    MatrixMP bad = MatrixMP::Identity(2, 2);
    bad(1, 1) = -1;
    CHECK_THROWS_AS(symplectic_spectrum(bad, hi), PrecisionError);
}

TEST_CASE("pairwise mode negativity vanishes") {
    PrecisionContext hi = PrecisionContext::high();
    for (double delta : {1.0, 2.0}) {
        for (double sep : {2.0, 2.5, 3.0, 4.0}) {
            auto r = pairwise_mode_negativity(delta, sep, hi);
            CHECK(r.log_negativity == 0.0);
            CHECK(r.min_ppt >= 1 - 1e-8);
        }
    }
    // Non-integer exponent through the momentum-space path.
    auto frac = pairwise_mode_negativity(1.5, 2.0, hi);
    CHECK(frac.log_negativity == 0.0);
    CHECK(frac.min_ppt >= 1 - 1e-8);

    // Non-decreasing in separation.
    mp_real prev = 0;
    for (double sep : {2.0, 3.0, 5.0, 10.0}) {
        auto r = pairwise_mode_negativity(2.0, sep, hi);
        CHECK(r.min_ppt >= prev);
        prev = r.min_ppt;
    }
    auto far = pairwise_mode_negativity(2.0, 1000.0, hi);
    auto local = pairwise_mode_negativity(2.0, 2.0, hi);
    // At d = 10³R the PPT spectrum is that of the local state alone.
    ScopedPrecision sp(hi);
    CHECK(abs(far.ppt_spectrum[0] - far.ppt_spectrum[1]) < 1e-6);
    CHECK(far.min_ppt > local.min_ppt);
    CHECK_THROWS_AS(pairwise_mode_negativity(2.0, 1.5, hi), DomainError);
}

TEST_CASE("single-mode covariance blocks") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    PrecisionContext dbl{53, 1e-12};
    SmearingProfile p(2.0, 1.0);
    CanonicalModeSet set;
    set.size = 1;
    set.grid = ModeGrid::uniform(1, 1.0);
    set.profile = p;
    set.coeffs = MatrixMP::Identity(2, 2);
    VacuumKernel kernel(p, hi);
    auto cov = assemble_covariance(set, set, {42, 0, 0}, kernel);
    auto phi = mode_element(p, ModeKind::Field, 0.0, 0.0, dbl);
    auto pi = mode_element(p, ModeKind::Momentum, 0.0, 0.0, dbl);
    const double phi2 = vacuum_moment(phi, phi, {0, 0, 0}, dbl);
    const double pi2 = vacuum_moment(pi, pi, {0, 0, 0}, dbl);
    CHECK(phi2 > 0);
    CHECK(vacuum_moment(phi, pi, {0, 0, 0}, dbl) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(to_double(cov.entries(0, 0)) == doctest::Approx(phi2).epsilon(1e-10));
    CHECK(to_double(cov.entries(1, 1)) == doctest::Approx(pi2).epsilon(1e-10));
    CHECK(abs(cov.entries(0, 1)) < 1e-35);
    CHECK(cov.entries(2, 2) == cov.entries(0, 0));
    const double near = vacuum_moment(phi, phi, {42, 0, 0}, dbl);
    const double far = vacuum_moment(phi, phi, {1000, 0, 0}, dbl);
    // Massless field correlations fall off as d⁻², momentum ones as d⁻⁴.
    CHECK(far * 1000.0 * 1000.0 == doctest::Approx(near * 42.0 * 42.0).epsilon(1e-3));
    const double pnear = vacuum_moment(pi, pi, {42, 0, 0}, dbl);
    const double pfar = vacuum_moment(pi, pi, {1000, 0, 0}, dbl);
    CHECK(std::abs(pfar) < 1e-3 * std::abs(pnear));
    CHECK(to_double(cov.entries(0, 2)) == doctest::Approx(near).epsilon(1e-9));
}

TEST_CASE("microcausality is enforced") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    SmearingProfile p(2.0, 1.0);
    auto grid = ModeGrid::uniform(5, 40.0);
    auto set = symplectic_gram_schmidt(commutator_tables_closed_form(p, grid, hi), grid, p);
    CHECK(certify_microcausality(set, set, 42.0) == 0.0);
    CHECK_THROWS_AS(certify_microcausality(set, set, 41.9), CausalityError);
    VacuumKernel kernel(p, hi);
    CHECK_THROWS_AS(assemble_covariance(set, set, {30, 0, 0}, kernel), CausalityError);
}

TEST_CASE("multimode covariance invariances") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    const int N = 6;
    auto cov = small_multimode(N, 4.0, 6.0, hi);
    auto base = log_negativity(cov, hi);
    CHECK(base.log_negativity > 1e-4);
    CHECK(min_symplectic_eigenvalue(cov, hi) >= 1 - 1e-6);

    SUBCASE("processing order") {
        auto rev = small_multimode(N, 4.0, 6.0, hi, {5, 4, 3, 2, 1, 0});
        auto mixed = small_multimode(N, 4.0, 6.0, hi, {2, 5, 0, 3, 1, 4});
        CHECK(std::abs(log_negativity(rev, hi).log_negativity - base.log_negativity) < 1e-8);
        CHECK(std::abs(log_negativity(mixed, hi).log_negativity - base.log_negativity) < 1e-8);
    }
    SUBCASE("local symplectic maps") {
        for (std::uint64_t seed : {11u, 12u}) {
            auto SA = oracle::random_symplectic(N, seed);
            auto SB = oracle::random_symplectic(N, seed + 100);
            CHECK(oracle::symplecticity_defect(SA) < 1e-12);
            CHECK(oracle::symplecticity_defect(SB) < 1e-12);
            auto moved = log_negativity(oracle::apply_local(cov, SA, SB), hi);
            CHECK(std::abs(moved.log_negativity - base.log_negativity) < 1e-8);
        }
    }
    SUBCASE("swapping the parties") {
        auto swapped = log_negativity(oracle::swap_parties(cov), hi);
        for (std::size_t i = 0; i < base.ppt_spectrum.size(); ++i)
            CHECK(abs(swapped.ppt_spectrum[i] - base.ppt_spectrum[i]) < 1e-10);
    }
    SUBCASE("parallel assembly is bit-identical") {
        SmearingProfile p(2.0, 1.0);
        VacuumKernel kernel(p, hi);
        auto grid = ModeGrid::uniform(N, 4.0);
        auto set = symplectic_gram_schmidt(commutator_tables_closed_form(p, grid, hi), grid, p);
        auto par = assemble_covariance(set, set, {6, 0, 0}, kernel, 4);
        CHECK(par.entries == cov.entries);
    }
}
