// Acceptance suite: one PASS/FAIL line per primary criterion.

#include "fieldent/experiment.hpp"
#include "fieldent/gaussian.hpp"
#include "fieldent/harvesting.hpp"
#include "fieldent/modes.hpp"
#include "fieldent/multimode.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

using namespace fieldent;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

void note(const std::string& line) {
    std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
}

std::string sci(double x, int digits = 3) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*e", digits, x);
    return buf;
}

DetectorConfig detector(double gap, double x, double coupling = 1.0) {
    DetectorConfig d;
    d.gap = gap;
    d.smearing = SmearingProfile(2.0, 1.0);
    d.switching = SwitchingProfile(40.0);
    d.position = {x, 0.0, 0.0};
    d.coupling = coupling;
    return d;
}

void criterion_pairwise() {
    const PrecisionContext ctx = PrecisionContext::high();
    bool pass = true;
    double worst = 1e300;
    for (double delta : {1.0, 2.0}) {
        for (double sep : {2.0, 2.5, 3.0, 4.0}) {
            const auto r = pairwise_mode_negativity(delta, sep, ctx);
            const double m = to_double(r.min_ppt);
            worst = std::min(worst, m);
            pass = pass && r.log_negativity == 0.0 && m >= 1 - 1e-8;
        }
    }
    report(1, pass, "E_N = 0 for all 8 pairs, min PPT eigenvalue " + sci(worst, 6));
}

void criterion_gap_sweep() {
    const auto a = detector(0, 0), b = detector(0, 42);
    const PrecisionContext dbl{53, 1e-12};
    const auto sweep = gap_sweep(a, b, gap_range(0.05, 1.0, 0.005), dbl, 1);
    std::vector<double> e;
    for (const auto& p : sweep)
        e.push_back(p.result.negativity_log);
    // Count sign changes + -> - of the successive differences, ignoring flat runs.
    int peaks = 0, last = 0;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const int s = e[i] > e[i - 1] ? 1 : (e[i] < e[i - 1] ? -1 : 0);
        if (s == 0)
            continue;
        if (last == 1 && s == -1)
            ++peaks;
        last = s;
    }
    const std::size_t k = std::max_element(e.begin(), e.end()) - e.begin();
    const bool interior = k > 0 && k + 1 < e.size();

    // Golden-section refinement of the maximum between the grid neighbours.
    auto en = [&](double w) {
        auto aa = a, bb = b;
        aa.gap = bb.gap = w;
        return detector_negativity(aa, bb, dbl).negativity_log;
    };
    double lo = sweep[interior ? k - 1 : k].omega_R, hi = sweep[interior ? k + 1 : k].omega_R;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo), f1 = en(x1), f2 = en(x2);
    while (hi - lo > 1e-5) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = en(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = en(x1);
        }
    }
    const double peak = (lo + hi) / 2;
    const bool pass = peaks == 1 && interior && e[k] > 0 && std::abs(peak - 0.236) <= 0.005;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d interior maximum, grid argmax %.3f, refined %.4f, E_N/lambda^2 = %.6e",
                  peaks, sweep[k].omega_R, peak, std::max(f1, f2));
    report(2, pass, buf);
}

void criterion_closed_forms() {
    bool pass = true;
    double worst = 0.0, zero = 0.0, g0 = 0.0;
    const PrecisionContext mp = PrecisionContext::high();
    const PrecisionContext dbl{53, 1e-12};
    ScopedPrecision sp(mp);
    for (double delta : {1.0, 2.0}) {
        const SmearingProfile p(delta, 1.0);
        const auto phi0 = mode_element(p, ModeKind::Field, 0.0, 0.0, dbl);
        const auto pi0 = mode_element(p, ModeKind::Momentum, 0.0, 0.0, dbl);
        for (int k = 1; k <= 40; ++k) {
            const double dt = 2.0 * k / 41;
            const auto c = commutators_closed_form<mp_real>(delta, 1.0, mp_real(dt), mp);
            const auto phi = mode_element(p, ModeKind::Field, dt, 0.0, dbl);
            const auto pi = mode_element(p, ModeKind::Momentum, dt, 0.0, dbl);
            const double n[3] = {symplectic_product(phi, phi0, dbl), symplectic_product(pi, pi0, dbl),
                                 symplectic_product(phi, pi0, dbl)};
            for (int j = 0; j < 3; ++j)
                worst = std::max(worst, std::abs(to_double(c[j]) - n[j]) / std::abs(to_double(c[j])));
        }
        for (const char* s : {"2", "-2", "2.000001", "3", "17.5", "-40"}) {
            for (const auto& v : commutators_closed_form<mp_real>(delta, 1.0, mp_real(s), mp))
                zero = std::max(zero, std::abs(to_double(v)));
        }
        const auto at0 = commutators_closed_form<mp_real>(delta, 1.0, mp_real(0), mp);
        g0 = std::max(g0, std::abs(to_double(at0[2] - 1)));
    }
    pass = worst <= 1e-8 && zero == 0.0 && g0 <= 1e-12;
    report(5, pass,
           "delta in {1,2}, 40 points: max rel. dev " + sci(worst) + ", max |value| beyond 2R " + sci(zero) +
               ", |gamma(0) - 1| " + sci(g0));
}

struct Check {
    std::string name;
    double value;
    double limit;
    bool pass;
};

void criterion_properties(std::vector<MultimodeRecord>& seen) {
    const auto start = Clock::now();
    std::vector<Check> checks;
    auto add = [&](std::string name, double value, double limit, bool pass) {
        checks.push_back({std::move(name), value, limit, pass});
        note(std::string(pass ? "ok   " : "FAIL ") + checks.back().name + ": " + sci(value) + " (limit " +
             sci(limit, 1) + ")");
    };

    // Two-mode squeezed vacuum.
    {
        ScopedPrecision sp(PrecisionContext::high());
        double dev = 0.0;
        for (const char* r : {"0.05", "0.3", "1", "2.5"}) {
            const mp_real rr(r);
            const auto neg = log_negativity(oracle::two_mode_squeezed(rr), PrecisionContext::high());
            dev = std::max(dev, std::abs(neg.log_negativity - to_double(2 * rr / log(mp_real(2)))));
        }
        add("TMSV E_N = 2r/ln 2", dev, 1e-10, dev <= 1e-10);
    }

    // Slice independence of the numeric commutator tables.
    {
        const SmearingProfile p(2.0, 1.0);
        const auto grid = ModeGrid::uniform(21, 40.0);
        const PrecisionContext dbl{53, 1e-12};
        const auto t0 = commutator_tables_numeric(p, grid, 0.0, dbl);
        double dev = 0.0;
        for (double s : {40.0 / 3, -10.0, 7.25}) {
            const auto t = commutator_tables_numeric(p, grid, s, dbl);
            dev = std::max({dev, (t.alpha - t0.alpha).cwiseAbs().maxCoeff(), (t.beta - t0.beta).cwiseAbs().maxCoeff(),
                            (t.gamma - t0.gamma).cwiseAbs().maxCoeff()});
        }
        add("slice independence (N = 21, 3 slices)", dev, 1e-9, dev <= 1e-9);
    }

    // Harvesting: 1D reduction vs nested quadrature, and coupling scaling.
    {
        const PrecisionContext dbl{53, 1e-12}, loose{53, 1e-9};
        double dev = 0.0;
        for (const auto& pt : std::vector<std::array<double, 2>>{{0.236, 42}, {0.1, 42}, {0.5, 60}}) {
            const auto r = detector_negativity(detector(pt[0], 0), detector(pt[0], pt[1]), dbl);
            const auto n = detector_negativity_nested(detector(pt[0], 0), detector(pt[0], pt[1]), loose);
            dev = std::max({dev, std::abs(r.L_AA - n.L_AA) / r.L_AA, std::abs(r.M - n.M) / std::abs(r.M)});
        }
        add("harvesting 1D vs nested oracle", dev, 1e-6, dev <= 1e-6);

        const auto one = detector_negativity(detector(0.236, 0), detector(0.236, 42), dbl);
        double sdev = 0.0;
        for (double lam : {0.5, 0.01}) {
            const auto r = detector_negativity(detector(0.236, 0, lam), detector(0.236, 42, lam), dbl);
            const double l2 = lam * lam;
            sdev = std::max({sdev, std::abs(r.L_AA / l2 - one.L_AA) / one.L_AA,
                             std::abs(r.M / l2 - one.M) / std::abs(one.M),
                             std::abs(r.negativity_log / l2 - one.negativity_log) / one.negativity_log});
        }
        add("lambda^2 scaling of L, M, E_N", sdev, 1e-12, sdev <= 1e-12);

        const auto s1 = gap_sweep(detector(0, 0), detector(0, 42), gap_range(0.2, 0.3, 0.01), dbl, 1);
        const auto s2 = gap_sweep(detector(0, 0), detector(0, 42), gap_range(0.2, 0.3, 0.01), dbl, 1);
        bool same = s1.size() == s2.size();
        for (std::size_t i = 0; same && i < s1.size(); ++i)
            same = s1[i].result.negativity_log == s2[i].result.negativity_log && s1[i].result.M == s2[i].result.M;
        add("determinism of gap_sweep (bitwise)", same ? 0.0 : 1.0, 0.0, same);
    }

    // Multimode at N = 45: order, local symplectic, precision doubling.
    MultimodeConfig cfg;
    const int N = 45;
    const auto base = run_single(cfg, N);
    seen.push_back(base);
    note("N = 45, 128 bits: E_N = " + format_real(base.E_N_mp, 20) + " (" + sci(base.wall_s, 1) + " s)");
    {
        std::vector<int> shuffled(N);
        std::iota(shuffled.begin(), shuffled.end(), 0);
        std::reverse(shuffled.begin(), shuffled.end());
        std::swap(shuffled[3], shuffled[30]);
        const auto other = run_single(cfg, N, shuffled);
        seen.push_back(other);
        const double dev = to_double(abs(other.E_N_mp - base.E_N_mp));
        add("processing-order invariance (N = 45)", dev, 1e-8, dev <= 1e-8);
    }
    {
        ScopedPrecision sp(cfg.precision);
        const SmearingProfile p(cfg.delta, 1.0);
        const auto grid = ModeGrid::uniform(N, cfg.T);
        const auto set = symplectic_gram_schmidt(commutator_tables_closed_form(p, grid, cfg.precision), grid, p);
        const VacuumKernel kernel(p, cfg.precision);
        const auto cov = assemble_covariance(set, set, {cfg.separation, 0.0, 0.0}, kernel, 1);
        const auto moved = oracle::apply_local(cov, oracle::random_symplectic(N, 11, 0.02),
                                               oracle::random_symplectic(N, 12, 0.02));
        const auto neg = log_negativity(moved, cfg.precision);
        const double dev = to_double(abs(neg.raw_sum - base.E_N_mp));
        add("local-symplectic invariance (N = 45)", dev, 1e-8, dev <= 1e-8);
    }
    {
        MultimodeConfig hi = cfg;
        hi.precision = PrecisionContext{256, default_tolerance(256)};
        const auto r = run_single(hi, N);
        seen.push_back(r);
        ScopedPrecision wide(hi.precision);
        const double dev = to_double(abs(r.E_N_mp - base.E_N_mp));
        add("precision doubling 128 -> 256 bits (N = 45)", dev, 1e-6, dev <= 1e-6);
    }
    {
        const auto a = run_single(cfg, 42), b = run_single(cfg, 42);
        seen.push_back(a);
        const bool same = a.E_N_mp == b.E_N_mp && a.min_ppt == b.min_ppt;
        add("determinism of the multimode pipeline (N = 42, bitwise)", same ? 0.0 : 1.0, 0.0, same);
    }

    double ccr = 0.0, phys = 1e300;
    for (const auto& r : seen) {
        ccr = std::max(ccr, to_double(r.ccr_deviation));
        phys = std::min(phys, to_double(r.min_physical));
    }
    add("CCR deviation of canonical modes", ccr, 1e-10, ccr <= 1e-10);
    add("physicality: 1 - min symplectic eigenvalue", 1 - phys, 1e-6, phys >= 1 - 1e-6);

    const double wall = seconds_since(start);
    const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    report(6, all && wall < 3600,
           std::to_string(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.pass; })) + "/" +
               std::to_string(checks.size()) + " properties hold, " + sci(wall, 2) + " s");
}

void criterion_threshold(std::vector<MultimodeRecord>& seen) {
    const auto start = Clock::now();
    MultimodeConfig cfg;
    const auto scan = threshold_scan(cfg);
    for (const auto& r : scan.result.records) {
        seen.push_back(r);
        char buf[160];
        std::snprintf(buf, sizeof buf, "N = %2d  E_N = %-24s min PPT = %-12s %.1f s", r.N,
                      format_real(r.E_N_mp, 17).c_str(), format_real(r.min_ppt, 8).c_str(), r.wall_s);
        note(buf);
    }
    const auto& rep = scan.report;
    report(3, rep.N_star && *rep.N_star == 42,
           "N* = " + (rep.N_star ? std::to_string(*rep.N_star) : std::string("none")) + " (" +
               sci(seconds_since(start), 2) + " s)");
    report(4, rep.monotone && rep.plateau,
           std::string("non-decreasing: ") + (rep.monotone ? "yes" : "no") + " (largest decrease " +
               sci(rep.max_decrease) + "), relative increment between the two largest N " +
               sci(rep.last_relative_increment));
}

} // namespace

template <class F>
void guarded(int id, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

int main() {
    std::vector<MultimodeRecord> seen;
    guarded(1, criterion_pairwise);
    guarded(2, criterion_gap_sweep);
    guarded(3, [&] { criterion_threshold(seen); });
    guarded(5, criterion_closed_forms);
    guarded(6, [&] { criterion_properties(seen); });
    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
