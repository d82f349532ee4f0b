#include "fieldent/autocorrelation.hpp"
#include "fieldent/errors.hpp"
#include "fieldent/modes.hpp"

#include <doctest.h>

#include <cmath>

using namespace fieldent;

namespace {

const PrecisionContext dbl{53, 1e-12};

double table_max(const CommutatorTables<double>& t) {
    return std::max({t.alpha.cwiseAbs().maxCoeff(), t.beta.cwiseAbs().maxCoeff(), t.gamma.cwiseAbs().maxCoeff()});
}

} // namespace

TEST_CASE("ModeGrid") {
    auto g = ModeGrid::uniform(5, 40.0);
    CHECK(g.times.front() == -20.0);
    CHECK(g.times.back() == 20.0);
    CHECK(g.spacing() == 10.0);
    CHECK(ModeGrid::uniform(1, 40.0).times == std::vector<double>{0.0});
    CHECK_THROWS_AS(ModeGrid::uniform(0, 40.0), DomainError);
}

TEST_CASE("symplectic_product basics") {
    SmearingProfile p(2.0, 1.0);
    auto phi = mode_element(p, ModeKind::Field, 0.0, 0.0, dbl);
    auto pi = mode_element(p, ModeKind::Momentum, 0.0, 0.0, dbl);
    CHECK(symplectic_product(phi, phi, dbl) == 0.0);
    CHECK(symplectic_product(phi, pi, dbl) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(symplectic_product(pi, phi, dbl) == doctest::Approx(-1.0).epsilon(1e-12));
    // Shells at t0 − tᵢ = 5 and the ball at t0: disjoint radial supports.
    auto far = mode_element(p, ModeKind::Field, -5.0, 0.0, dbl);
    CHECK(symplectic_product(far, pi, dbl) == 0.0);
    auto other = mode_element(p, ModeKind::Field, 0.0, 1.0, dbl);
    CHECK_THROWS_AS(symplectic_product(phi, other, dbl), DomainError);
    CHECK(symplectic_product_displaced(phi, {0, 0, 0}, pi, {3, 0, 0}, dbl) == 0.0);
    CHECK_THROWS_AS(symplectic_product_displaced(phi, {0, 0, 0}, pi, {1, 0, 0}, dbl), CausalityError);
}

TEST_CASE("closed-form commutators equal the autocorrelation polynomial") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    for (int delta : {1, 2, 3}) {
        AutocorrelationPolynomial H(delta);
        for (const char* s : {"0", "0.05", "0.4", "1", "1.33", "1.999", "-0.7"}) {
            const mp_real dt(s);
            const auto v = commutators_closed_form<mp_real>(delta, 1.0, dt, hi);
            CHECK(abs(v[0] + H.evaluate<mp_real>(dt, 0)) < 1e-25);
            CHECK(abs(v[1] - H.evaluate<mp_real>(dt, 2)) < 1e-25);
            CHECK(abs(v[2] - H.evaluate<mp_real>(dt, 1)) < 1e-25);
        }
    }
    const auto at0 = commutators_closed_form<mp_real>(2.0, 1.0, mp_real(0), hi);
    CHECK(at0[0] == 0);
    CHECK(at0[1] == 0);
    CHECK(abs(at0[2] - 1) < 1e-30);
    for (const char* s : {"2", "2.5", "-3"}) {
        const auto v = commutators_closed_form<mp_real>(2.0, 1.0, mp_real(s), hi);
        CHECK((v[0] == 0 && v[1] == 0 && v[2] == 0));
    }
    CHECK_THROWS_AS(commutators_closed_form<double>(2.5, 1.0, 0.5, dbl), PoleError);
}

TEST_CASE("closed-form tables match numeric tables") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    SmearingProfile p(2.0, 1.0);
    for (int N : {5, 21, 30}) {
        auto grid = ModeGrid::uniform(N, 40.0);
        auto closed = commutator_tables_closed_form(p, grid, hi);
        auto numeric = commutator_tables_numeric(p, grid, 0.0, dbl);
        const double scale = table_max(numeric);
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                CHECK(std::abs(to_double(closed.alpha(i, j)) - numeric.alpha(i, j)) <= 1e-8 * scale);
                CHECK(std::abs(to_double(closed.beta(i, j)) - numeric.beta(i, j)) <= 1e-8 * scale);
                CHECK(std::abs(to_double(closed.gamma(i, j)) - numeric.gamma(i, j)) <= 1e-8 * scale);
            }
        }
        if (N == 21) {
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    if (i != j)
                        CHECK((closed.alpha(i, j) == 0 && closed.beta(i, j) == 0 && closed.gamma(i, j) == 0));
        }
    }
}

TEST_CASE("numeric tables do not depend on the common slice") {
    SmearingProfile p(2.0, 1.0);
    auto grid = ModeGrid::uniform(30, 40.0);
    auto a = commutator_tables_numeric(p, grid, 0.0, dbl);
    auto b = commutator_tables_numeric(p, grid, 40.0 / 3, dbl);
    auto c = commutator_tables_numeric(p, grid, -7.25, dbl);
    CHECK((a.alpha - b.alpha).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.beta - b.beta).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.gamma - b.gamma).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.gamma - c.gamma).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.alpha + a.alpha.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symplectic Gram-Schmidt") {
    PrecisionContext hi = PrecisionContext::high();
    ScopedPrecision sp(hi);
    SmearingProfile p(2.0, 1.0);

    SUBCASE("N = 1 is already canonical") {
        auto grid = ModeGrid::uniform(1, 40.0);
        auto tables = commutator_tables_closed_form(p, grid, hi);
        auto set = symplectic_gram_schmidt(tables, grid, p);
        CHECK((set.coeffs - MatrixMP::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-35);
    }
    SUBCASE("commuting input gives identity") {
        auto grid = ModeGrid::uniform(21, 40.0);
        auto tables = commutator_tables_closed_form(p, grid, hi);
        auto set = symplectic_gram_schmidt(tables, grid, p);
        CHECK((set.coeffs - MatrixMP::Identity(42, 42)).cwiseAbs().maxCoeff() < 1e-35);
    }
    SUBCASE("N = 45 satisfies the CCR and is block triangular") {
        auto grid = ModeGrid::uniform(45, 40.0);
        auto tables = commutator_tables_closed_form(p, grid, hi);
        auto set = symplectic_gram_schmidt(tables, grid, p);
        CHECK(ccr_deviation(set, tables) < 1e-10);
        for (int r = 0; r < 90; ++r)
            for (int c = 2 * (r / 2) + 2; c < 90; ++c)
                CHECK(set.coeffs(r, c) == 0);
        for (int r = 0; r < 90; ++r)
            CHECK(set.coeffs(r, r) != 0);

        std::vector<int> order(45);
        for (int i = 0; i < 45; ++i)
            order[i] = (i * 7) % 45;
        auto shuffled = symplectic_gram_schmidt(tables, grid, p, {order});
        CHECK(ccr_deviation(shuffled, tables) < 1e-10);
    }
    SUBCASE("elements realise the canonical commutators") {
        auto grid = ModeGrid::uniform(5, 6.0);
        auto tables = commutator_tables_closed_form(p, grid, hi);
        auto set = symplectic_gram_schmidt(tables, grid, p);
        auto el = set.elements(0.0, dbl);
        for (int a = 0; a < 10; ++a) {
            for (int b = 0; b < 10; ++b) {
                const double expect = (a % 2 == 0 && b == a + 1) ? 1.0 : (b % 2 == 0 && a == b + 1) ? -1.0 : 0.0;
                CHECK(symplectic_product(el[a], el[b], dbl) == doctest::Approx(expect).epsilon(1e-8).scale(1.0));
            }
        }
    }
    SUBCASE("degenerate input is rejected with the step") {
        auto grid = ModeGrid::uniform(3, 2.0);
        auto tables = commutator_tables_closed_form(p, grid, hi);
        tables.gamma(1, 1) = 0;
        tables.gamma(1, 0) = tables.gamma(0, 1) = 0;
        tables.alpha.setZero();
        tables.beta.setZero();
        tables.gamma.row(1).setZero();
        tables.gamma.col(1).setZero();
        try {
            symplectic_gram_schmidt(tables, grid, p);
            FAIL("expected DegeneracyError");
        } catch (const DegeneracyError& e) {
            CHECK(e.step() == 2);
        }
        CHECK_THROWS_AS(symplectic_gram_schmidt(tables, grid, p, {{0, 0, 1}}), DomainError);
    }
}
