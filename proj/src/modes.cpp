#include "fieldent/modes.hpp"

#include "fieldent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fieldent {

ModeGrid ModeGrid::uniform(int N, double T) {
    if (N < 1)
        throw DomainError("mode grid needs N >= 1");
    if (!(T > 0))
        throw DomainError("mode grid needs T > 0");
    ModeGrid g;
    g.N = N;
    g.T = T;
    if (N == 1) {
        g.times = {0.0};
        return g;
    }
    for (int i = 0; i < N; ++i)
        g.times.push_back(-T / 2 + T * i / (N - 1));
    return g;
}

std::vector<mp_real> ModeGrid::times_mp() const {
    std::vector<mp_real> out;
    if (N == 1)
        return {mp_real(0)};
    const mp_real Tm(T);
    for (int i = 0; i < N; ++i)
        out.push_back(-Tm / 2 + Tm * i / (N - 1));
    return out;
}

template <class T>
Matrix<T> CommutatorTables<T>::commutator_matrix() const {
    const int N = size();
    Matrix<T> K(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            K(2 * i, 2 * j) = alpha(i, j);
            K(2 * i + 1, 2 * j + 1) = beta(i, j);
            K(2 * i, 2 * j + 1) = gamma(i, j);
            K(2 * i + 1, 2 * j) = -gamma(j, i);
        }
    }
    return K;
}

template struct CommutatorTables<double>;
template struct CommutatorTables<mp_real>;

namespace {

std::vector<double> merged_breaks(const PhaseSpaceElement& a, const PhaseSpaceElement& b, double lo, double hi) {
    std::vector<double> pts{lo, hi};
    for (const auto* e : {&a, &b})
        for (double x : e->breakpoints)
            if (x > lo && x < hi)
                pts.push_back(x);
    return pts;
}

} // namespace

double symplectic_product(const PhaseSpaceElement& e1, const PhaseSpaceElement& e2, const PrecisionContext& ctx) {
    if (e1.slice_time != e2.slice_time)
        throw DomainError("symplectic_product: elements live on different slices");
    const double lo = std::max(e1.inner_radius, e2.inner_radius);
    const double hi = std::min(e1.support_radius, e2.support_radius);
    if (!(lo < hi))
        return 0.0;
    auto f = [&](double r) { return r * r * (e1.q(r) * e2.p(r) - e1.p(r) * e2.q(r)); };
    return 4 * M_PI * integrate_adaptive<double>(f, merged_breaks(e1, e2, lo, hi), ctx).value;
}

double symplectic_product_displaced(const PhaseSpaceElement& e1, const Vec3& c1, const PhaseSpaceElement& e2,
                                    const Vec3& c2, const PrecisionContext& ctx) {
    const double d = distance(c1, c2);
    if (d == 0.0)
        return symplectic_product(e1, e2, ctx);
    if (e1.slice_time != e2.slice_time)
        throw DomainError("symplectic_product: elements live on different slices");
    if (d >= e1.support_radius + e2.support_radius)
        return 0.0;
    throw CausalityError("modes", "symplectic_product", "supports of displaced elements overlap");
}

namespace {

// sin(πδ) Γ(−2δ − m) written through the reflection formula so that the
// integer-δ limit is finite: (−1)^{m+1} π / (2 cos(πδ) Γ(2δ + 1 + m)).
template <class T>
T sin_gamma(const T& delta, int m) {
    using std::abs;
    using std::cos;
    const T pi = pi_of<T>();
    const T c = cos(pi * delta);
    if (c == 0 || abs(c) < 64 * epsilon_of<T>())
        throw PoleError("modes", "commutators_closed_form", "half-integer delta makes the closed form singular");
    const T sign = (m % 2 == 0) ? T(-1) : T(1);
    return sign * pi / (2 * c * gamma_fn<T>(2 * delta + 1 + m));
}

} // namespace

template <class T>
std::array<T, 3> commutators_closed_form(double delta_d, double R_d, const T& dt, const PrecisionContext& ctx) {
    using std::abs;
    using std::pow;
    const T R = R_d;
    const T delta = delta_d;
    if (abs(dt) >= 2 * R)
        return {T(0), T(0), T(0)};
    const T pi = pi_of<T>();
    const T z = dt * dt / (4 * R * R);
    const T x = abs(dt / R);
    const T A = normalization_constant<T>(delta, 3, R);
    const T A2 = A * A;
    const T g1 = gamma_fn<T>(delta + 1);
    const T g1sq = g1 * g1;
    const T half = T(1) / 2;

    // α
    T a1 = sin_gamma(delta, 2) / pi * pow(x, 2 * delta + 1) * hyp2f1<T>(half, -delta - 1, delta + T(1.5), z, ctx);
    T a2 = gamma_fn<T>(delta + half) / (4 * g1 * gamma_fn<T>(2 * delta + T(2.5))) *
           hyp2f1<T>(-2 * delta - T(1.5), -delta, half - delta, z, ctx);
    T alpha = -pow(T(2), 2 * delta + 2) * pi * R * R * R * A2 * g1sq * dt * (a1 + a2);

    // β
    T b1 = pow(T(2), 2 * delta + 1) * sin_gamma(delta, 0) * g1sq * pow(x, 2 * delta - 1) *
           hyp3f2<T>(half, -delta - 1, delta + 2, delta + half, delta + 1, z, ctx);
    T b2 = -3 * pow(pi, T(1.5)) * delta * delta * gamma_fn<T>(2 * delta - 1) / gamma_fn<T>(2 * delta + T(1.5)) *
           hyp3f2<T>(T(2.5), -2 * delta - half, 1 - delta, T(1.5), T(1.5) - delta, z, ctx);
    T beta = 2 * dt * R * A2 * (b1 + b2);

    // γ
    T c1 = pow(pi, T(1.5)) * gamma_fn<T>(2 * delta + 1) / gamma_fn<T>(2 * delta + T(2.5)) *
           hyp3f2<T>(T(1.5), -2 * delta - T(1.5), -delta, half, half - delta, z, ctx);
    T c2 = -pow(T(4), delta + 1) * sin_gamma(delta, 1) * g1sq * pow(x, 2 * delta + 1) *
           hyp3f2<T>(half, -delta - 1, delta + 2, delta + 1, delta + T(1.5), z, ctx);
    T gamma = R * R * R * A2 * (c1 + c2);
    return {alpha, beta, gamma};
}

template std::array<double, 3> commutators_closed_form<double>(double, double, const double&, const PrecisionContext&);
template std::array<mp_real, 3> commutators_closed_form<mp_real>(double, double, const mp_real&,
                                                                 const PrecisionContext&);

CommutatorTables<mp_real> commutator_tables_closed_form(const SmearingProfile& profile, const ModeGrid& grid,
                                                        const PrecisionContext& ctx) {
    const int N = grid.N;
    CommutatorTables<mp_real> t;
    t.alpha = MatrixMP::Zero(N, N);
    t.beta = MatrixMP::Zero(N, N);
    t.gamma = MatrixMP::Zero(N, N);
    const mp_real h = N > 1 ? mp_real(grid.T) / (N - 1) : mp_real(0);
    for (int m = -(N - 1); m <= N - 1; ++m) {
        const mp_real dt = h * m;
        const auto v = commutators_closed_form<mp_real>(profile.delta(), profile.radius(), dt, ctx);
        for (int i = std::max(0, m); i < N && i - m < N; ++i) {
            const int j = i - m;
            t.alpha(i, j) = v[0];
            t.beta(i, j) = v[1];
            t.gamma(i, j) = v[2];
        }
    }
    return t;
}

CommutatorTables<double> commutator_tables_numeric(const SmearingProfile& profile, const ModeGrid& grid, double t0,
                                                   const PrecisionContext& ctx) {
    const int N = grid.N;
    std::vector<PhaseSpaceElement> phi, pi;
    for (double t : grid.times) {
        phi.push_back(mode_element(profile, ModeKind::Field, t, t0, ctx));
        pi.push_back(mode_element(profile, ModeKind::Momentum, t, t0, ctx));
    }
    CommutatorTables<double> t;
    t.alpha = Matrix<double>::Zero(N, N);
    t.beta = Matrix<double>::Zero(N, N);
    t.gamma = Matrix<double>::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (j > i) {
                t.alpha(i, j) = symplectic_product(phi[i], phi[j], ctx);
                t.beta(i, j) = symplectic_product(pi[i], pi[j], ctx);
                t.alpha(j, i) = -t.alpha(i, j);
                t.beta(j, i) = -t.beta(i, j);
            }
            t.gamma(i, j) = symplectic_product(phi[i], pi[j], ctx);
        }
    }
    return t;
}

MatrixMP standard_commutator_form(int modes) {
    MatrixMP J = MatrixMP::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        J(2 * k, 2 * k + 1) = 1;
        J(2 * k + 1, 2 * k) = -1;
    }
    return J;
}

CanonicalModeSet symplectic_gram_schmidt(const CommutatorTables<mp_real>& tables, const ModeGrid& grid,
                                         const SmearingProfile& profile, const GramSchmidtOptions& options) {
    const int N = tables.size();
    if (grid.N != N)
        throw DomainError("symplectic_gram_schmidt: grid and tables differ in size");
    std::vector<int> order = options.processing_order;
    if (order.empty()) {
        order.resize(N);
        std::iota(order.begin(), order.end(), 0);
    }
    {
        std::vector<int> check = order;
        std::sort(check.begin(), check.end());
        for (int i = 0; i < N; ++i)
            if (static_cast<int>(check.size()) != N || check[i] != i)
                throw DomainError("symplectic_gram_schmidt: processing order is not a permutation");
    }
    const MatrixMP K = tables.commutator_matrix();
    const int n = 2 * N;
    MatrixMP C = MatrixMP::Zero(n, n);
    // Rows Qⱼᵀ K and Pⱼᵀ K, kept so each projection is a single lookup.
    MatrixMP CK = MatrixMP::Zero(n, n);
    const mp_real threshold(options.degeneracy_threshold);

    for (int k = 0; k < N; ++k) {
        const int col_phi = 2 * order[k];
        const int col_pi = col_phi + 1;
        Eigen::Matrix<mp_real, Eigen::Dynamic, 1> X = Eigen::Matrix<mp_real, Eigen::Dynamic, 1>::Zero(n);
        Eigen::Matrix<mp_real, Eigen::Dynamic, 1> Y = X;
        X(col_phi) = 1;
        Y(col_pi) = 1;
        for (int j = 0; j < k; ++j) {
            // ω(Qⱼ, Φᵏ) Pⱼ − ω(Pⱼ, Φᵏ) Qⱼ
            const mp_real qx = CK(2 * j, col_phi), px = CK(2 * j + 1, col_phi);
            const mp_real qy = CK(2 * j, col_pi), py = CK(2 * j + 1, col_pi);
            X -= qx * C.row(2 * j + 1).transpose() - px * C.row(2 * j).transpose();
            Y -= qy * C.row(2 * j + 1).transpose() - py * C.row(2 * j).transpose();
        }
        const mp_real gbar = X.dot(K * Y);
        if (abs(gbar) < threshold)
            throw DegeneracyError("modes", "symplectic_gram_schmidt",
                                  "normalization gamma_bar vanishes at step " + std::to_string(k + 1) +
                                      " (instant index " + std::to_string(order[k]) + ")",
                                  k + 1);
        const mp_real root = sqrt(abs(gbar));
        C.row(2 * k) = X.transpose() / root;
        C.row(2 * k + 1) = Y.transpose() * (root / gbar);
        CK.row(2 * k) = C.row(2 * k) * K;
        CK.row(2 * k + 1) = C.row(2 * k + 1) * K;
    }

    CanonicalModeSet set;
    set.size = N;
    set.grid = grid;
    set.profile = profile;
    set.processing_order = order;
    set.coeffs = std::move(C);
    return set;
}

mp_real ccr_deviation(const CanonicalModeSet& set, const CommutatorTables<mp_real>& tables) {
    const MatrixMP K = tables.commutator_matrix();
    const MatrixMP D = set.coeffs * K * set.coeffs.transpose() - standard_commutator_form(set.size);
    return D.cwiseAbs().maxCoeff();
}

std::vector<PhaseSpaceElement> CanonicalModeSet::elements(double t0, const PrecisionContext& ctx) const {
    std::vector<PhaseSpaceElement> originals;
    for (double t : grid.times) {
        originals.push_back(mode_element(profile, ModeKind::Field, t, t0, ctx));
        originals.push_back(mode_element(profile, ModeKind::Momentum, t, t0, ctx));
    }
    std::vector<PhaseSpaceElement> out;
    for (int r = 0; r < coeffs.rows(); ++r) {
        std::vector<double> c(coeffs.cols());
        for (int j = 0; j < coeffs.cols(); ++j)
            c[j] = coeffs(r, j).convert_to<double>();
        out.push_back(linear_combination(c, originals));
    }
    return out;
}

} // namespace fieldent
