// simulate - batch experiment driver and filter-table inspection CLI
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "cotx/experiments.hpp"
#include "cotx/filters.hpp"

namespace {

int dump_filter(const std::string& config_path, const std::string& out_path,
                const std::string& sign_name) {
    const cotx::SystemConfig cfg = cotx::load_config_file(config_path);
    const cotx::DerivedConstants consts = cotx::validate(cfg);
    const cotx::CdSign sign = (sign_name == "propagate") ? cotx::CdSign::propagate
                                                         : cotx::CdSign::precompensate;
    const cotx::JointFilter f =
        cotx::build_joint_filter(cfg, consts, cfg.block_symbols, sign);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw cotx::IoError("cannot open output file: " + out_path);
    out << "bin,freq_hz,real,imag,mask\n";
    char buf[160];
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        const double freq = consts.omega_grid_2n[k] / (2.0 * std::numbers::pi);
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%d\n", k, freq,
                      f.coeffs[k].real(), f.coeffs[k].imag(),
                      static_cast<int>(f.stopband_mask[k]));
        out << buf;
    }
    out.flush();
    if (!out) throw cotx::IoError("failed writing output file: " + out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent-link DSP simulation experiments"};
    app.require_subcommand(0, 1);

    std::string config_path, experiment, out_path, format = "csv";
    long long seed_override = 0;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--experiment", experiment,
                   "one of: equivalence, ccdf, cr_sweep, osnr_sweep, complexity, single_run");
    app.add_option("--out", out_path, "result file path");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");

    auto* dump = app.add_subcommand("dump-filter", "emit the joint filter table as CSV");
    std::string d_config, d_out, d_sign = "precompensate";
    dump->add_option("--config", d_config, "JSON config file")->required();
    dump->add_option("--out", d_out, "CSV output path")->required();
    dump->add_option("--sign", d_sign, "dispersion phase sign")
        ->check(CLI::IsMember({"precompensate", "propagate"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    try {
        if (dump->parsed()) return dump_filter(d_config, d_out, d_sign);

        if (config_path.empty() || experiment.empty() || out_path.empty()) {
            std::cerr << "simulate: --config, --experiment and --out are required\n";
            return 1;
        }
        cotx::ExperimentSpec spec;
        spec.config = cotx::load_config_file(config_path);
        if (seed_opt->count() > 0)
            spec.config.seed = static_cast<unsigned long long>(seed_override);
        spec.name = cotx::experiment_from_name(experiment);
        spec.output_path = out_path;
        spec.format = (format == "json") ? cotx::OutputFormat::json : cotx::OutputFormat::csv;
        cotx::run_experiment(spec);
        return 0;
    } catch (const cotx::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const cotx::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const cotx::InvariantFailure& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
