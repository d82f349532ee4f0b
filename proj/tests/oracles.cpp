#include "oracles.hpp"

#include <random>

namespace fieldent::oracle {

MatrixMP random_symplectic(int modes, std::uint64_t seed, double scale) {
    const int n = 2 * modes;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    MatrixMP H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            H(i, j) = H(j, i) = u(rng);
    const MatrixMP X = symplectic_form(modes) * H;
    // Taylor series with scaling and squaring.
    int squarings = 0;
    mp_real norm = X.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.5) {
        norm /= 2;
        ++squarings;
    }
    const MatrixMP Y = X / pow(mp_real(2), squarings);
    MatrixMP S = MatrixMP::Identity(n, n), term = S;
    for (int k = 1; k < 200; ++k) {
        term = term * Y / k;
        S += term;
        if (term.cwiseAbs().maxCoeff() < epsilon_of<mp_real>() * 1e-3)
            break;
    }
    for (int i = 0; i < squarings; ++i)
        S = S * S;
    return S;
}

mp_real symplecticity_defect(const MatrixMP& S) {
    const MatrixMP W = symplectic_form(static_cast<int>(S.rows()) / 2);
    return (S.transpose() * W * S - W).cwiseAbs().maxCoeff();
}

CovarianceMatrix two_mode_squeezed(const mp_real& r) {
    CovarianceMatrix cov;
    cov.modes_A = cov.modes_B = 1;
    cov.entries = MatrixMP::Zero(4, 4);
    const mp_real c = cosh(2 * r), s = sinh(2 * r);
    for (int i = 0; i < 4; ++i)
        cov.entries(i, i) = c;
    cov.entries(0, 2) = cov.entries(2, 0) = s;
    cov.entries(1, 3) = cov.entries(3, 1) = -s;
    return cov;
}

std::array<mp_real, 2> two_mode_spectrum(const MatrixMP& sigma) {
    const MatrixMP A = sigma.topLeftCorner(2, 2), B = sigma.bottomRightCorner(2, 2), C = sigma.topRightCorner(2, 2);
    const mp_real delta = A.determinant() + B.determinant() + 2 * C.determinant();
    const mp_real det = sigma.determinant();
    const mp_real root = sqrt(delta * delta - 4 * det);
    return {sqrt((delta - root) / 2), sqrt((delta + root) / 2)};
}

CovarianceMatrix apply_local(const CovarianceMatrix& cov, const MatrixMP& S_A, const MatrixMP& S_B) {
    const int na = 2 * cov.modes_A, nb = 2 * cov.modes_B;
    MatrixMP S = MatrixMP::Zero(na + nb, na + nb);
    S.topLeftCorner(na, na) = S_A;
    S.bottomRightCorner(nb, nb) = S_B;
    CovarianceMatrix out = cov;
    out.entries = S * cov.entries * S.transpose();
    return out;
}

CovarianceMatrix swap_parties(const CovarianceMatrix& cov) {
    const int na = 2 * cov.modes_A, nb = 2 * cov.modes_B;
    CovarianceMatrix out = cov;
    out.modes_A = cov.modes_B;
    out.modes_B = cov.modes_A;
    out.entries.topLeftCorner(nb, nb) = cov.entries.bottomRightCorner(nb, nb);
    out.entries.bottomRightCorner(na, na) = cov.entries.topLeftCorner(na, na);
    out.entries.topRightCorner(nb, na) = cov.entries.bottomLeftCorner(nb, na);
    out.entries.bottomLeftCorner(na, nb) = cov.entries.topRightCorner(na, nb);
    return out;
}

} // namespace fieldent::oracle
