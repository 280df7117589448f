// Command-line front end for the verification suite.
//
//   clf_verify verify-measure   [--config PATH] [--out DIR]
//   clf_verify verify-kernel    [--config PATH] [--out DIR] [--seed N] [--fixtures PATH] [--calibrate]
//   clf_verify blowup           [--config PATH] [--out DIR] [--fixtures PATH] [--calibrate] [--positive-control]
//   clf_verify check-log-holder [--config PATH] [--out DIR] [--seed N]
//
// Exit status: 0 all checks pass, 1 a check failed, 2 configuration or usage error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "clf/commands.hpp"
#include "clf/errors.hpp"

#ifndef CLF_DEFAULT_FIXTURES
#define CLF_DEFAULT_FIXTURES "fixtures/golden.json"
#endif

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string fixtures = CLF_DEFAULT_FIXTURES;
    bool calibrate = false;
    bool positive_control = false;
};

clf::RunConfig make_config(const Options& o)
{
    clf::RunConfig cfg = o.config.empty() ? clf::RunConfig{} : clf::load_config(o.config);
    if (o.seed)
        cfg.seed = *o.seed;
    if (!o.out.empty())
        cfg.out_dir = o.out;
    if (o.positive_control)
        cfg.positive_control = true;
    cfg.validate();
    return cfg;
}

clf::Fixtures fixtures_for_calibration(const std::string& path)
{
    try {
        return clf::load_fixtures(path);
    } catch (const clf::ConfigError&) {
        return {};
    }
}

int emit(const clf::CommandReport& r, const clf::RunConfig& cfg)
{
    std::cout << r.command << '\n' << r.table;
    clf::write_report(r, cfg.out_dir);
    return r.pass() ? clf::exit_pass : clf::exit_failed;
}

int run(const std::string& command, const Options& o)
{
    const clf::RunConfig cfg = make_config(o);
    if (command == "verify-measure")
        return emit(clf::cmd_verify_measure(cfg), cfg);
    if (command == "check-log-holder")
        return emit(clf::cmd_check_log_holder(cfg), cfg);
    if (command == "verify-kernel") {
        if (!o.calibrate)
            return emit(clf::cmd_verify_kernel(cfg, clf::load_fixtures(o.fixtures)), cfg);
        const auto study = clf::run_kernel_study(cfg);
        const auto fx = clf::calibrate_kernel(cfg, study, fixtures_for_calibration(o.fixtures));
        clf::save_fixtures(fx, o.fixtures);
        std::cout << fmt::format("calibrated kernel fixtures -> {}\n", o.fixtures);
        return emit(clf::evaluate_kernel(cfg, fx, study), cfg);
    }
    if (command == "blowup") {
        if (cfg.n_max < 2)
            throw clf::ConfigError(fmt::format("schedule.n_max: blowup needs N >= 2 (got {})",
                                               cfg.n_max));
        if (!o.calibrate)
            return emit(clf::cmd_blowup(cfg, clf::load_fixtures(o.fixtures)), cfg);
        const auto study = clf::run_blowup_study(cfg, cfg.positive_control);
        const auto fx = clf::calibrate_blowup(cfg, study, fixtures_for_calibration(o.fixtures));
        clf::save_fixtures(fx, o.fixtures);
        std::cout << fmt::format("calibrated blowup fixtures -> {}\n", o.fixtures);
        return emit(clf::evaluate_blowup(cfg, fx, study), cfg);
    }
    throw clf::ConfigError(fmt::format("unknown command '{}'", command));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical verification of the CLF operator counterexample on complex ellipsoids"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "Directory for the JSON report and CSV");
        sub->add_option("--seed", o.seed, "Sampling seed");
    };
    auto add_fixtures = [&](CLI::App* sub) {
        sub->add_option("--fixtures", o.fixtures, "Golden constants file");
        sub->add_flag("--calibrate", o.calibrate, "Measure and freeze the golden constants");
    };

    auto* measure = app.add_subcommand("verify-measure", "Patch measures against the alpha^2 law");
    add_common(measure);
    auto* kernel = app.add_subcommand("verify-kernel", "Kernel sign and scale bounds on patch pairs");
    add_common(kernel);
    add_fixtures(kernel);
    auto* blowup = app.add_subcommand("blowup", "Blow-up experiment for the truncated test function");
    add_common(blowup);
    add_fixtures(blowup);
    blowup->add_flag("--positive-control", o.positive_control,
                     "Also run the constant-exponent control");
    auto* holder = app.add_subcommand("check-log-holder", "Log-Hoelder modulus of the exponent");
    add_common(holder);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? clf::exit_pass : clf::exit_usage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, o);
    } catch (const clf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return clf::exit_usage;
    } catch (const clf::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return clf::exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return clf::exit_failed;
    }
}
