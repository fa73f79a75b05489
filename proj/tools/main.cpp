// cvdistill command-line front end.
//
// Batch runner for the symmetric CV entanglement-distillation simulator:
// validation sweeps, single stages, nested protocols and figure-data
// exports. All data files are CSV with a fixed 12-significant-digit float
// format; every run writes a .manifest.json next to its outputs with the
// resolved configuration, versions and wall-clock, sufficient to reproduce
// the CSV byte-for-byte.
//
// Usage:
//   cvdistill validate [--cutoff D] [--lambda L] [--out report.json]
//   cvdistill stage    --r R --T T [--q Q | --target-r TR] [--cutoff D] --out PREFIX
//   cvdistill nested   --r R --T T --stages N [--q Q,...] [--cutoff D] --out PREFIX
//   cvdistill figure3  --eps A:B:STEP --stages N --out PREFIX
//   cvdistill figure4  --T A:B:STEP --stages N [--cutoff D] [--jobs J] --out PREFIX
//
// Grid flags accept a single value or start:stop:step (inclusive endpoints).
// A flat `key = value` config file can be passed with --config; explicit
// flags win over the file, the file wins over defaults. --jobs defaults to
// the GAUSS_DISTILL_JOBS environment variable, then to the hardware
// concurrency. Exit codes: 0 success, 1 validation failure, 2 usage error.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cvdistill/cli.hpp"
#include "cvdistill/errors.hpp"
#include "cvdistill/report.hpp"

namespace {

void add_common(CLI::App* cmd, cvdistill::CliOptions& opt) {
    cmd->add_option("--jobs", opt.jobs, "worker threads (0 = hardware concurrency)")
        ->envname("GAUSS_DISTILL_JOBS");
    cmd->set_config("--config", "", "flat key = value config file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symmetric CV entanglement distillation simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("cvdistill ") + cvdistill::version());

    cvdistill::CliOptions opt;

    CLI::App* validate = app.add_subcommand("validate", "run the module invariant suites");
    validate->add_option("--cutoff", opt.validate_cutoff, "Fock cutoff for the leakage gate");
    validate->add_option("--lambda", opt.lambda, "squeezing parameter for the leakage gate");
    validate->add_option("--out", opt.out, "JSON report path");
    add_common(validate, opt);

    CLI::App* stage = app.add_subcommand("stage", "run one distillation stage");
    stage->add_option("--r", opt.r, "initial two-mode squeezing")->required();
    stage->add_option("--T", opt.T, "initial channel transmittance")->required();
    stage->add_option("--q", opt.q_list, "detection parameter (omit to auto-tune)");
    stage->add_option("--target-r", opt.target_r, "output squeezing held by auto-tuned q");
    stage->add_option("--cutoff", opt.cutoff, "per-mode Fock cutoff");
    stage->add_option("--out", opt.out, "output prefix")->default_val("stage");
    add_common(stage, opt);

    CLI::App* nested = app.add_subcommand("nested", "run the nested protocol");
    nested->add_option("--r", opt.r, "initial two-mode squeezing")->required();
    nested->add_option("--T", opt.T, "initial channel transmittance")->required();
    nested->add_option("--stages", opt.stages, "number of stages")->required();
    nested->add_option("--q", opt.q_list, "per-stage q values (omit to auto-tune)");
    nested->add_option("--target-r", opt.target_r, "output squeezing held by auto-tuned q");
    nested->add_option("--cutoff", opt.cutoff, "per-mode Fock cutoff");
    nested->add_option("--out", opt.out, "output prefix")->default_val("nested");
    add_common(nested, opt);

    CLI::App* fig3 = app.add_subcommand("figure3", "epsilon vs stage count data");
    fig3->add_option("--eps", opt.eps_grid, "eps_in grid (value or start:stop:step)");
    fig3->add_option("--stages", opt.stages, "maximum stage count")->default_val(4);
    fig3->add_option("--out", opt.out, "output prefix")->default_val("figure3");
    add_common(fig3, opt);

    CLI::App* fig4 = app.add_subcommand("figure4", "purity/EoF vs transmittance data");
    fig4->add_option("--T", opt.t_grid, "transmittance grid (value or start:stop:step)");
    fig4->add_option("--stages", opt.stages, "maximum stage count")->default_val(3);
    fig4->add_option("--cutoff", opt.cutoff, "per-mode Fock cutoff");
    fig4->add_option("--target-r", opt.target_r, "squeezing held per stage");
    fig4->add_option("--out", opt.out, "output prefix")->default_val("figure4");
    add_common(fig4, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (validate->parsed()) return cvdistill::cmd_validate(opt);
        if (stage->parsed()) return cvdistill::cmd_stage(opt);
        if (nested->parsed()) return cvdistill::cmd_nested(opt);
        if (fig3->parsed()) return cvdistill::cmd_figure3(opt);
        if (fig4->parsed()) return cvdistill::cmd_figure4(opt);
    } catch (const cvdistill::DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
