#include "fieldent/experiment.hpp"

#include "fieldent/cache.hpp"
#include "fieldent/errors.hpp"
#include "fieldent/gaussian.hpp"
#include "fieldent/harvesting.hpp"
#include "fieldent/modes.hpp"
#include "fieldent/version.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fieldent {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string field_name(const std::string& section, const std::string& key) {
    return section.empty() ? key : "[" + section + "] " + key;
}

double parse_double(const std::string& text, const std::string& field) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError(field + ": expected a number, got '" + t + "'");
    return v;
}

long parse_int(const std::string& text, const std::string& field) {
    const std::string t = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(field + ": expected an integer, got '" + t + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty())
            out.push_back(trim(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& field) {
    std::vector<double> out;
    for (const auto& s : split_list(text))
        out.push_back(parse_double(s, field));
    if (out.empty())
        throw ConfigError(field + ": empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& field) {
    std::vector<int> out;
    for (const auto& s : split_list(text))
        out.push_back(static_cast<int>(parse_int(s, field)));
    if (out.empty())
        throw ConfigError(field + ": empty list");
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ",";
        if constexpr (std::is_same_v<T, double>)
            s += format_real(v[i], 17);
        else
            s += std::to_string(v[i]);
    }
    return s;
}

std::string f17(double x) { return format_real(x, 17); }

} // namespace

const char* experiment_name(Experiment e) {
    switch (e) {
    case Experiment::Pairwise:
        return "pairwise";
    case Experiment::HarvestSweep:
        return "harvest-sweep";
    case Experiment::Multimode:
        return "multimode";
    case Experiment::CommutatorCheck:
        return "commutator-check";
    }
    return "?";
}

double default_tolerance(unsigned bits) {
    if (bits == 53)
        return 1e-10;
    if (bits == 128)
        return 1e-20;
    return std::pow(10.0, -std::ceil(bits * std::log10(2.0) / 2));
}

void ExperimentConfig::set_precision_bits(unsigned bits) {
    precision.working_bits = bits;
    precision.target_rel_tol = default_tolerance(bits);
}

void ExperimentConfig::validate() const {
    try {
        precision.validate();
        for (double d : pairwise.deltas)
            if (!(d >= 1.0))
                throw ConfigError("[pairwise] delta: values must be >= 1");
        for (double s : pairwise.seps)
            if (!(s >= 2.0))
                throw ConfigError("[pairwise] sep_over_R: values must be >= 2 (non-overlapping regions)");
        if (!(harvest.delta >= 1.0))
            throw ConfigError("[harvest-sweep] delta: must be >= 1");
        if (!(harvest.T_over_R > 0))
            throw ConfigError("[harvest-sweep] T_over_R: must be > 0");
        if (harvest.d_over_R < harvest.T_over_R + 2)
            throw ConfigError("[harvest-sweep] d_over_R: must be >= T_over_R + 2 (spacelike guard)");
        if (!(harvest.omega_start >= 0) || !(harvest.omega_step > 0) || harvest.omega_stop < harvest.omega_start)
            throw ConfigError("[harvest-sweep] omega range: need 0 <= omega_start <= omega_stop and omega_step > 0");
        if (!(harvest.coupling > 0))
            throw ConfigError("[harvest-sweep] coupling: must be > 0");
        if (commutator.points < 1)
            throw ConfigError("[commutator-check] points: must be >= 1");
        if (!(commutator.delta >= 1.0) || std::floor(commutator.delta) != commutator.delta)
            throw ConfigError("[commutator-check] delta: must be an integer >= 1");
        for (int N : commutator.N_list)
            if (N < 1)
                throw ConfigError("[commutator-check] N_list: entries must be >= 1");
        if (experiment == Experiment::Multimode)
            multimode_config().validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string(experiment_name(experiment)) + ": " + e.what());
    }
}

MultimodeConfig ExperimentConfig::multimode_config() const {
    MultimodeConfig m;
    m.delta = multimode.delta;
    m.radius = 1.0;
    m.T = multimode.T_over_R;
    m.separation = multimode.d_over_R;
    m.N_list = multimode.N_list;
    m.precision = precision;
    m.order = multimode.order;
    m.plateau_fraction = multimode.plateau_fraction;
    m.jobs = jobs;
    return m;
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "experiment=" << experiment_name(experiment) << "\n";
    os << "precision.bits=" << precision.working_bits << "\nprecision.tol=" << f17(precision.target_rel_tol) << "\n";
    switch (experiment) {
    case Experiment::Pairwise:
        os << "pairwise.delta=" << join(pairwise.deltas) << "\npairwise.sep_over_R=" << join(pairwise.seps) << "\n";
        break;
    case Experiment::HarvestSweep:
        os << "harvest.delta=" << f17(harvest.delta) << "\nharvest.T_over_R=" << f17(harvest.T_over_R)
           << "\nharvest.d_over_R=" << f17(harvest.d_over_R) << "\nharvest.omega=" << f17(harvest.omega_start) << ":"
           << f17(harvest.omega_step) << ":" << f17(harvest.omega_stop) << "\nharvest.coupling=" << f17(harvest.coupling)
           << "\n";
        break;
    case Experiment::Multimode:
        os << "multimode.delta=" << f17(multimode.delta) << "\nmultimode.T_over_R=" << f17(multimode.T_over_R)
           << "\nmultimode.d_over_R=" << f17(multimode.d_over_R) << "\nmultimode.N_list=" << join(multimode.N_list)
           << "\nmultimode.plateau_fraction=" << f17(multimode.plateau_fraction)
           << "\nmultimode.order=" << (multimode.order == ProcessingOrder::Time ? "time" : "reverse") << "\n";
        break;
    case Experiment::CommutatorCheck:
        os << "commutator.delta=" << f17(commutator.delta) << "\ncommutator.points=" << commutator.points
           << "\ncommutator.T_over_R=" << f17(commutator.T_over_R) << "\ncommutator.N_list=" << join(commutator.N_list)
           << "\n";
        break;
    }
    return os.str();
}

std::string ExperimentConfig::hash() const { return hex64(fnv1a64(canonical())); }

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    ExperimentConfig cfg;
    bool tol_given = false, harvest_d_given = false, multimode_d_given = false;
    std::set<std::string> seen;

    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            // top-level key
            const std::string v = node.get_value<std::string>();
            if (name == "experiment") {
                const std::string e = trim(v);
                if (e == "pairwise")
                    cfg.experiment = Experiment::Pairwise;
                else if (e == "harvest-sweep")
                    cfg.experiment = Experiment::HarvestSweep;
                else if (e == "multimode")
                    cfg.experiment = Experiment::Multimode;
                else if (e == "commutator-check")
                    cfg.experiment = Experiment::CommutatorCheck;
                else
                    throw ConfigError("experiment: unknown experiment '" + e +
                                      "' (expected pairwise, harvest-sweep, multimode or commutator-check)");
                seen.insert("experiment");
            } else if (name == "jobs") {
                const long j = parse_int(v, "jobs");
                if (j < 0)
                    throw ConfigError("jobs: must be >= 0");
                cfg.jobs = static_cast<unsigned>(j);
            } else if (name == "cache") {
                cfg.cache_path = trim(v);
            } else if (name == "output") {
                cfg.output_path = trim(v);
            } else if (name == "format") {
                const std::string f = trim(v);
                if (f == "csv")
                    cfg.format = OutputFormat::Csv;
                else if (f == "json")
                    cfg.format = OutputFormat::Json;
                else
                    throw ConfigError("format: expected csv or json, got '" + f + "'");
            } else {
                throw ConfigError("unknown top-level key '" + name + "'");
            }
            continue;
        }
        for (const auto& [key, leaf] : node) {
            const std::string v = leaf.get_value<std::string>();
            const std::string field = field_name(name, key);
            if (name == "precision") {
                if (key == "bits") {
                    const long b = parse_int(v, field);
                    if (b < 24 || b > 4096)
                        throw ConfigError(field + ": must be between 24 and 4096");
                    cfg.precision.working_bits = static_cast<unsigned>(b);
                } else if (key == "tol") {
                    cfg.precision.target_rel_tol = parse_double(v, field);
                    tol_given = true;
                } else {
                    throw ConfigError("unknown key " + field);
                }
            } else if (name == "pairwise") {
                if (key == "delta")
                    cfg.pairwise.deltas = parse_double_list(v, field);
                else if (key == "sep_over_R")
                    cfg.pairwise.seps = parse_double_list(v, field);
                else
                    throw ConfigError("unknown key " + field);
            } else if (name == "harvest-sweep") {
                auto& h = cfg.harvest;
                if (key == "delta")
                    h.delta = parse_double(v, field);
                else if (key == "T_over_R")
                    h.T_over_R = parse_double(v, field);
                else if (key == "d_over_R") {
                    h.d_over_R = parse_double(v, field);
                    harvest_d_given = true;
                } else if (key == "omega_start")
                    h.omega_start = parse_double(v, field);
                else if (key == "omega_stop")
                    h.omega_stop = parse_double(v, field);
                else if (key == "omega_step")
                    h.omega_step = parse_double(v, field);
                else if (key == "coupling")
                    h.coupling = parse_double(v, field);
                else
                    throw ConfigError("unknown key " + field);
            } else if (name == "multimode") {
                auto& m = cfg.multimode;
                if (key == "delta")
                    m.delta = parse_double(v, field);
                else if (key == "T_over_R")
                    m.T_over_R = parse_double(v, field);
                else if (key == "d_over_R") {
                    m.d_over_R = parse_double(v, field);
                    multimode_d_given = true;
                } else if (key == "N_list")
                    m.N_list = parse_int_list(v, field);
                else if (key == "plateau_fraction")
                    m.plateau_fraction = parse_double(v, field);
                else if (key == "order") {
                    const std::string o = trim(v);
                    if (o == "time")
                        m.order = ProcessingOrder::Time;
                    else if (o == "reverse")
                        m.order = ProcessingOrder::Reverse;
                    else
                        throw ConfigError(field + ": expected time or reverse, got '" + o + "'");
                } else
                    throw ConfigError("unknown key " + field);
            } else if (name == "commutator-check") {
                auto& c = cfg.commutator;
                if (key == "delta")
                    c.delta = parse_double(v, field);
                else if (key == "points")
                    c.points = static_cast<int>(parse_int(v, field));
                else if (key == "T_over_R")
                    c.T_over_R = parse_double(v, field);
                else if (key == "N_list")
                    c.N_list = parse_int_list(v, field);
                else
                    throw ConfigError("unknown key " + field);
            } else {
                throw ConfigError("unknown section [" + name + "]");
            }
        }
    }
    if (!seen.count("experiment"))
        throw ConfigError(source + ": missing required key 'experiment'");
    if (!tol_given)
        cfg.precision.target_rel_tol = default_tolerance(cfg.precision.working_bits);
    if (!harvest_d_given)
        cfg.harvest.d_over_R = cfg.harvest.T_over_R + 2;
    if (!multimode_d_given)
        cfg.multimode.d_over_R = cfg.multimode.T_over_R + 2;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

namespace {

RunOutput run_pairwise(const ExperimentConfig& cfg) {
    RunOutput out;
    out.table.columns = {"delta", "sep_over_R", "E_N", "min_ppt_eig"};
    const int digits = cfg.precision.output_digits();
    ScopedPrecision sp(cfg.precision);
    for (double delta : cfg.pairwise.deltas) {
        for (double sep : cfg.pairwise.seps) {
            const auto r = pairwise_mode_negativity(delta, sep, cfg.precision);
            const mp_real en = r.certified_zero ? mp_real(0) : r.raw_sum;
            out.table.rows.push_back({f17(delta), f17(sep), format_real(en, digits), format_real(r.min_ppt, digits)});
        }
    }
    return out;
}

RunOutput run_harvest(const ExperimentConfig& cfg) {
    RunOutput out;
    out.table.columns = {"omega_R", "L_over_lambda2", "absM_over_lambda2", "EN_over_lambda2"};
    const auto& h = cfg.harvest;
    DetectorConfig a;
    a.smearing = SmearingProfile(h.delta, 1.0);
    a.switching = SwitchingProfile(h.T_over_R);
    a.coupling = h.coupling;
    DetectorConfig b = a;
    b.position = {h.d_over_R, 0.0, 0.0};
    const PrecisionContext dbl{53, std::max(1e-12, std::min(cfg.precision.target_rel_tol, 1e-10))};
    const auto sweep = gap_sweep(a, b, gap_range(h.omega_start, h.omega_stop, h.omega_step), dbl, cfg.jobs);
    const double l2 = h.coupling * h.coupling;
    std::size_t best = 0;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const auto& r = sweep[i].result;
        out.table.rows.push_back(
            {f17(sweep[i].omega_R), f17(r.L_AA / l2), f17(std::abs(r.M) / l2), f17(r.negativity_log / l2)});
        if (r.negativity_log > sweep[best].result.negativity_log)
            best = i;
    }
    if (sweep[best].result.negativity_log > 0)
        out.summary.push_back("max E_N/lambda^2 = " + f17(sweep[best].result.negativity_log / l2) +
                              " at omega_R = " + f17(sweep[best].omega_R));
    else
        out.summary.push_back("E_N = 0 at every gap");
    return out;
}

RunOutput run_multimode_experiment(const ExperimentConfig& cfg) {
    RunOutput out;
    out.table.columns = {"N", "E_N", "min_ppt_eig", "n_ppt_below_1", "precision_bits", "wall_s"};
    MultimodeConfig m = cfg.multimode_config();
    if (!cfg.cache_path.empty()) {
        try {
            m.cache = std::make_shared<KernelCache>(cfg.cache_path);
        } catch (const std::exception& e) {
            throw IoError(e.what());
        }
    }
    const auto scan = threshold_scan(m);
    const int digits = cfg.precision.output_digits();
    ScopedPrecision sp(cfg.precision);
    for (const auto& r : scan.result.records) {
        char wall[32];
        std::snprintf(wall, sizeof wall, "%.3f", r.wall_s);
        out.table.rows.push_back({std::to_string(r.N), format_real(r.E_N_mp, digits), format_real(r.min_ppt, digits),
                                  std::to_string(r.n_ppt_below_1), std::to_string(r.precision_bits), wall});
    }
    const auto& rep = scan.report;
    out.summary.push_back(rep.N_star ? "threshold N* = " + std::to_string(*rep.N_star)
                                     : std::string("no positive E_N on the scanned list"));
    out.summary.push_back(std::string("monotone non-decreasing: ") + (rep.monotone ? "yes" : "no") +
                          " (max decrease " + format_real(rep.max_decrease, 3) + ")");
    out.summary.push_back("relative increment between the two largest N: " +
                          format_real(rep.last_relative_increment, 4) + (rep.plateau ? " (plateau)" : " (no plateau)"));
    return out;
}

struct CommutatorRow {
    double dt;
    std::array<mp_real, 3> closed;
    std::array<double, 3> numeric;
    double rel_dev;
};

std::vector<CommutatorRow> commutator_rows(const ExperimentConfig& cfg) {
    const auto& c = cfg.commutator;
    const SmearingProfile p(c.delta, 1.0);
    const PrecisionContext dbl{53, 1e-12};
    ScopedPrecision sp(cfg.precision);
    std::vector<CommutatorRow> rows;
    const auto pi0 = mode_element(p, ModeKind::Momentum, 0.0, 0.0, dbl);
    const auto phi0 = mode_element(p, ModeKind::Field, 0.0, 0.0, dbl);
    for (int k = 1; k <= c.points; ++k) {
        CommutatorRow row;
        row.dt = 2.0 * k / (c.points + 1);
        row.closed = commutators_closed_form<mp_real>(c.delta, 1.0, mp_real(row.dt), cfg.precision);
        const auto phi = mode_element(p, ModeKind::Field, row.dt, 0.0, dbl);
        const auto pi = mode_element(p, ModeKind::Momentum, row.dt, 0.0, dbl);
        row.numeric = {symplectic_product(phi, phi0, dbl), symplectic_product(pi, pi0, dbl),
                       symplectic_product(phi, pi0, dbl)};
        row.rel_dev = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double cv = to_double(row.closed[j]);
            row.rel_dev = std::max(row.rel_dev, std::abs(cv - row.numeric[j]) / std::abs(cv));
        }
        rows.push_back(row);
    }
    return rows;
}

RunOutput run_commutator_check(const ExperimentConfig& cfg) {
    RunOutput out;
    out.table.columns = {"dt_over_R", "alpha", "beta", "gamma", "alpha_numeric", "beta_numeric", "gamma_numeric",
                         "max_rel_dev"};
    const int digits = cfg.precision.output_digits();
    ScopedPrecision sp(cfg.precision);
    double worst = 0.0;
    for (const auto& r : commutator_rows(cfg)) {
        out.table.rows.push_back({f17(r.dt), format_real(r.closed[0], digits), format_real(r.closed[1], digits),
                                  format_real(r.closed[2], digits), f17(r.numeric[0]), f17(r.numeric[1]),
                                  f17(r.numeric[2]), format_real(r.rel_dev, 3)});
        worst = std::max(worst, r.rel_dev);
    }
    out.summary.push_back("max relative deviation closed form vs numeric: " + format_real(worst, 3));
    return out;
}

} // namespace

RunOutput run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    RunOutput out;
    switch (cfg.experiment) {
    case Experiment::Pairwise:
        out = run_pairwise(cfg);
        break;
    case Experiment::HarvestSweep:
        out = run_harvest(cfg);
        break;
    case Experiment::Multimode:
        out = run_multimode_experiment(cfg);
        break;
    case Experiment::CommutatorCheck:
        out = run_commutator_check(cfg);
        break;
    }
    out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

Manifest make_manifest(const ExperimentConfig& cfg, double wall_s) {
    Manifest m;
    m.experiment = experiment_name(cfg.experiment);
    m.config_hash = cfg.hash();
    m.precision_bits = cfg.precision.working_bits;
    m.target_tolerance = cfg.precision.target_rel_tol;
    m.version = version;
    m.wall_s = wall_s;
    return m;
}

void write_csv(std::ostream& out, const Table& table, const Manifest& m) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", m.wall_s);
    out << "# fieldent " << m.version << " experiment=" << m.experiment << " config_hash=" << m.config_hash
        << " precision_bits=" << m.precision_bits << " tol=" << format_real(m.target_tolerance, 3)
        << " wall_s=" << wall << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_json(std::ostream& out, const Table& table, const Manifest& m) {
    nlohmann::ordered_json j;
    j["manifest"] = {{"program", "fieldent"},
                     {"version", m.version},
                     {"experiment", m.experiment},
                     {"config_hash", m.config_hash},
                     {"precision_bits", m.precision_bits},
                     {"tol", m.target_tolerance},
                     {"wall_s", std::round(m.wall_s * 1000) / 1000}};
    j["columns"] = table.columns;
    // Values stay decimal strings so no digits are lost in transit.
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size(); ++i)
            r[table.columns[i]] = row[i];
        rows.push_back(r);
    }
    j["rows"] = rows;
    out << j.dump(2) << "\n";
}

std::vector<CheckResult> verify_checks(const ExperimentConfig& cfg) {
    std::vector<CheckResult> checks;
    auto add = [&](std::string name, double dev, double tol) {
        checks.push_back({std::move(name), dev, tol, dev <= tol});
    };
    ScopedPrecision sp(cfg.precision);
    const PrecisionContext dbl{53, 1e-12};

    {
        double worst = 0.0;
        for (const auto& r : commutator_rows(cfg))
            worst = std::max(worst, r.rel_dev);
        add("commutators closed form vs numeric (" + std::to_string(cfg.commutator.points) +
                " points in (0, 2R), max rel. dev)",
            worst, 1e-8);

        double beyond = 0.0;
        for (const char* s : {"2", "2.5", "3", "10", "-2", "-7"}) {
            const auto v = commutators_closed_form<mp_real>(cfg.commutator.delta, 1.0, mp_real(s), cfg.precision);
            for (const auto& x : v)
                beyond = std::max(beyond, std::abs(to_double(x)));
        }
        add("commutators vanish for |dt| >= 2R (max |value|)", beyond, 0.0);
        const auto at0 = commutators_closed_form<mp_real>(cfg.commutator.delta, 1.0, mp_real(0), cfg.precision);
        add("gamma(0) = 1 (abs. dev)", std::abs(to_double(at0[2] - 1)), 1e-12);
    }
    {
        const SmearingProfile p(cfg.commutator.delta, 1.0);
        double worst = 0.0;
        for (int N : cfg.commutator.N_list) {
            const auto grid = ModeGrid::uniform(N, cfg.commutator.T_over_R);
            const auto closed = commutator_tables_closed_form(p, grid, cfg.precision);
            const auto numeric = commutator_tables_numeric(p, grid, 0.0, dbl);
            double scale = 0.0, dev = 0.0;
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j) {
                    const double c[3] = {to_double(closed.alpha(i, j)), to_double(closed.beta(i, j)),
                                         to_double(closed.gamma(i, j))};
                    const double n[3] = {numeric.alpha(i, j), numeric.beta(i, j), numeric.gamma(i, j)};
                    for (int t = 0; t < 3; ++t) {
                        scale = std::max(scale, std::abs(c[t]));
                        dev = std::max(dev, std::abs(c[t] - n[t]));
                    }
                }
            }
            worst = std::max(worst, dev / scale);
        }
        add("commutator tables closed form vs numeric, N in {" + join(cfg.commutator.N_list) +
                "} (max dev / largest entry)",
            worst, 1e-8);

        const int N = cfg.commutator.N_list.back();
        const auto grid = ModeGrid::uniform(N, cfg.commutator.T_over_R);
        const double T = cfg.commutator.T_over_R;
        const auto t0 = commutator_tables_numeric(p, grid, 0.0, dbl);
        double dev = 0.0;
        for (double slice : {T / 3, -T / 4}) {
            const auto t1 = commutator_tables_numeric(p, grid, slice, dbl);
            dev = std::max({dev, (t0.alpha - t1.alpha).cwiseAbs().maxCoeff(), (t0.beta - t1.beta).cwiseAbs().maxCoeff(),
                            (t0.gamma - t1.gamma).cwiseAbs().maxCoeff()});
        }
        add("slice independence of numeric tables, t0 in {0, T/3, -T/4} (max abs. dev)", dev, 1e-9);
    }
    {
        const auto& h = cfg.harvest;
        double worst = 0.0;
        const PrecisionContext loose{53, 1e-9};
        const double pts[3][2] = {{0.236, h.d_over_R}, {0.1, h.d_over_R}, {0.5, h.d_over_R + 18}};
        for (const auto& pt : pts) {
            DetectorConfig a;
            a.smearing = SmearingProfile(h.delta, 1.0);
            a.switching = SwitchingProfile(h.T_over_R);
            a.gap = pt[0];
            DetectorConfig b = a;
            b.position = {pt[1], 0.0, 0.0};
            const auto r = detector_negativity(a, b, dbl);
            const auto n = detector_negativity_nested(a, b, loose);
            worst = std::max({worst, std::abs(r.L_AA - n.L_AA) / r.L_AA, std::abs(r.M - n.M) / std::abs(r.M)});
        }
        add("harvesting 1D reduction vs nested quadrature, 3 points (max rel. dev)", worst, 1e-6);
    }
    {
        MultimodeConfig m = cfg.multimode_config();
        const SmearingProfile p(m.delta, 1.0);
        const int N = 10;
        const auto grid = ModeGrid::uniform(N, m.T);
        const auto set = symplectic_gram_schmidt(commutator_tables_closed_form(p, grid, m.precision), grid, p);
        const VacuumKernel kernel(p, m.precision);
        const auto cov = assemble_covariance(set, set, {m.separation, 0.0, 0.0}, kernel, cfg.jobs);
        const auto a = symplectic_spectrum(cov.entries, m.precision);
        const auto b = symplectic_spectrum(partial_transpose(cov).entries, m.precision);
        add("symplectic spectrum, general vs Cholesky path at N = 10 (max abs. dev)",
            to_double(std::max(a.path_deviation, b.path_deviation)), std::max(1e-12, m.precision.target_rel_tol));
    }
    return checks;
}

} // namespace fieldent
