#include "fieldent/multimode.hpp"

#include "fieldent/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace fieldent {

void MultimodeConfig::validate() const {
    const SmearingProfile profile(delta, radius);
    if (!profile.integer_delta())
        throw DomainError("multimode: delta must be an integer");
    if (!(T > 0))
        throw DomainError("multimode: T must be > 0");
    if (separation < T + 2 * radius)
        throw DomainError("multimode: separation must be >= T + 2R (spacelike guard)");
    if (N_list.empty())
        throw DomainError("multimode: N_list is empty");
    for (int N : N_list)
        if (N < 1)
            throw DomainError("multimode: N_list entries must be >= 1");
    if (!(plateau_fraction > 0))
        throw DomainError("multimode: plateau fraction must be > 0");
    precision.validate();
}

MultimodeRecord run_single(const MultimodeConfig& cfg, int N, std::vector<int> processing_order) {
    const auto start = std::chrono::steady_clock::now();
    const PrecisionContext& ctx = cfg.precision;
    ScopedPrecision sp(ctx);
    const SmearingProfile profile(cfg.delta, cfg.radius);
    const ModeGrid grid = ModeGrid::uniform(N, cfg.T);

    if (processing_order.empty() && cfg.order == ProcessingOrder::Reverse) {
        processing_order.resize(N);
        std::iota(processing_order.rbegin(), processing_order.rend(), 0);
    }
    const auto tables = commutator_tables_closed_form(profile, grid, ctx);
    GramSchmidtOptions opts;
    opts.processing_order = processing_order;
    const CanonicalModeSet set = symplectic_gram_schmidt(tables, grid, profile, opts);

    MultimodeRecord rec;
    rec.N = N;
    rec.precision_bits = ctx.working_bits;
    rec.ccr_deviation = ccr_deviation(set, tables);
    const mp_real ccr_limit = std::max(mp_real(1e-10), 1e6 * epsilon_of<mp_real>());
    if (rec.ccr_deviation > ccr_limit)
        throw PrecisionError("modes", "symplectic_gram_schmidt",
                             "CCR deviation " + format_real(rec.ccr_deviation, 6) + " at N = " + std::to_string(N) +
                                 "; increase the working precision");

    const VacuumKernel kernel(profile, ctx, cfg.cache);
    const CovarianceMatrix cov = assemble_covariance(set, set, {cfg.separation, 0.0, 0.0}, kernel, cfg.jobs);
    rec.min_physical = min_symplectic_eigenvalue(cov, ctx);
    const NegativityReport neg = log_negativity(cov, ctx);
    rec.E_N = neg.log_negativity;
    rec.E_N_mp = neg.certified_zero ? mp_real(0) : neg.raw_sum;
    rec.min_ppt = neg.min_ppt;
    rec.n_ppt_below_1 = neg.certified_zero ? 0 : neg.n_below_one;
    rec.zero_tolerance = neg.zero_tolerance;
    rec.certified_zero = neg.certified_zero;
    rec.path_deviation = neg.path_deviation;
    rec.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

MultimodeResult run_multimode(const MultimodeConfig& cfg) {
    cfg.validate();
    std::vector<int> Ns = cfg.N_list;
    std::sort(Ns.begin(), Ns.end());
    Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
    MultimodeResult out;
    for (int N : Ns)
        out.records.push_back(run_single(cfg, N));
    return out;
}

ThresholdReport analyze_threshold(const MultimodeResult& result, double plateau_fraction) {
    ThresholdReport r;
    for (const auto& rec : result.records) {
        if (rec.E_N > 0) {
            r.N_star = rec.N;
            break;
        }
    }
    for (std::size_t i = 1; i < result.records.size(); ++i) {
        const double drop = result.records[i - 1].E_N - result.records[i].E_N;
        r.max_decrease = std::max(r.max_decrease, drop);
        if (drop > 1e-10)
            r.monotone = false;
    }
    const std::size_t n = result.records.size();
    if (n >= 2) {
        const double prev = result.records[n - 2].E_N, last = result.records[n - 1].E_N;
        if (prev > 0) {
            r.last_relative_increment = (last - prev) / prev;
            r.plateau = std::abs(r.last_relative_increment) < plateau_fraction;
        }
    }
    return r;
}

ThresholdScan threshold_scan(const MultimodeConfig& cfg) {
    ThresholdScan s;
    s.result = run_multimode(cfg);
    s.report = analyze_threshold(s.result, cfg.plateau_fraction);
    return s;
}

} // namespace fieldent
