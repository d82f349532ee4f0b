#include "fieldent/errors.hpp"
#include "fieldent/experiment.hpp"
#include "fieldent/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace fieldent;

namespace {

enum Exit { Ok = 0, Failed = 1, ConfigFailure = 2, NumericalFailure = 3, IoFailure = 4 };

struct Options {
    std::string config;
    unsigned jobs = 0;
    unsigned precision = 0;
    std::string cache;
    std::string output;
    std::string format;
};

ExperimentConfig resolve(const Options& opt, CLI::App& sub) {
    ExperimentConfig cfg = load_config(opt.config);
    if (sub.count("--jobs"))
        cfg.jobs = opt.jobs;
    if (sub.count("--precision"))
        cfg.set_precision_bits(opt.precision);
    if (sub.count("--cache"))
        cfg.cache_path = opt.cache;
    if (sub.count("--output"))
        cfg.output_path = opt.output;
    if (sub.count("--format"))
        cfg.format = opt.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    cfg.validate();
    return cfg;
}

void log(const std::string& line) { std::cerr << "[fieldent] " << line << "\n"; }

int do_run(const ExperimentConfig& cfg) {
    log(std::string("experiment ") + experiment_name(cfg.experiment) + ", config hash " + cfg.hash() + ", " +
        std::to_string(cfg.precision.working_bits) + " bits");
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!cfg.output_path.empty()) {
        file.open(cfg.output_path);
        if (!file)
            throw IoError("cannot open output file '" + cfg.output_path + "'");
        os = &file;
    }
    const RunOutput out = run_experiment(cfg);
    const Manifest manifest = make_manifest(cfg, out.wall_s);
    if (cfg.format == OutputFormat::Json)
        write_json(*os, out.table, manifest);
    else
        write_csv(*os, out.table, manifest);
    os->flush();
    if (!*os)
        throw IoError("write failed for '" + (cfg.output_path.empty() ? "stdout" : cfg.output_path) + "'");

    for (const auto& line : out.summary)
        log(line);
    char wall[64];
    std::snprintf(wall, sizeof wall, "done in %.2f s", out.wall_s);
    log(wall);
    return Ok;
}

int do_verify(const ExperimentConfig& cfg) {
    const auto checks = verify_checks(cfg);
    int failed = 0;
    for (const auto& c : checks) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "deviation %.3e (tol %.1e)", c.deviation, c.tolerance);
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << buf << "\n";
        failed += !c.pass;
    }
    std::cout << (checks.size() - failed) << "/" << checks.size() << " checks passed\n";
    return failed ? Failed : Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vacuum entanglement of smeared field modes in 3+1 Minkowski space"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "key=value config file with [sections]")->required();
        sub->add_option("--jobs", opt.jobs, "worker threads (0: all cores)");
        sub->add_option("--precision", opt.precision, "working precision in bits (53 = double)")
            ->check(CLI::Range(24u, 4096u));
        sub->add_option("--cache", opt.cache, "kernel cache file (JSON lines)");
        sub->add_option("--output", opt.output, "output file (default: stdout)");
        sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    CLI::App* run = app.add_subcommand("run", "run the experiment described by the config");
    CLI::App* verify = app.add_subcommand("verify", "run the internal consistency checks");
    add_common(run);
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : ConfigFailure;
    }

    try {
        if (*run)
            return do_run(resolve(opt, *run));
        return do_verify(resolve(opt, *verify));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return IoFailure;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error (module " << e.module() << ", operation " << e.operation() << "): " << e.what() << "\n";
        return NumericalFailure;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return IoFailure;
    }
}
