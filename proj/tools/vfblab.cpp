// Experiment driver for the vacuum free-boundary lab: single runs, parameter
// sweeps, the scalar oracle, operator identity checks, convergence tables and
// decay-envelope tables. Exit codes: 0 success, 1 usage/config error,
// 2 numerical failure, 3 identity-suite failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vfb/affine.hpp"
#include "vfb/energy.hpp"
#include "vfb/experiment.hpp"
#include "vfb/operators.hpp"
#include "vfb/params.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_flag)
{
    vfb::RunConfig cfg = vfb::load_config(config_path);
    vfb::RunRecord rec = vfb::run_experiment(cfg);
    std::string dir = vfb::output_root(out_flag);
    std::string stem = dir + "/" + rec.label + "-" + rec.hash;
    vfb::write_csv(rec, stem + ".csv");
    vfb::write_dat(rec, stem + ".dat");
    std::cout << rec.label << " [" << rec.hash << "] " << rec.status
              << " sup_S=" << rec.sup_S << " wall=" << rec.wall_seconds
              << "s -> " << stem << ".csv\n";
    return rec.status == "completed" ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, int workers,
              const std::string& out_flag)
{
    vfb::RunConfig cfg = vfb::load_config(config_path);
    std::string dir = vfb::output_root(out_flag);
    std::vector<vfb::RunRecord> recs = vfb::sweep_experiment(cfg, workers, dir);
    bool all_ok = true;
    for (const vfb::RunRecord& r : recs) {
        std::cout << r.label << " [" << r.hash << "] " << r.status
                  << " sup_S=" << r.sup_S << "\n";
        if (r.status != "completed") all_ok = false;
    }
    std::cout << recs.size() << " runs -> " << dir << "\n";
    return all_ok ? 0 : 2;
}

int cmd_oracle(double gamma, double delta, double tmax, double lambda0,
               double lambdadot0, int samples)
{
    vfb::EquationOfState eos = vfb::make_eos(gamma);
    std::vector<double> times;
    for (int i = 0; i <= samples; ++i)
        times.push_back(tmax * i / static_cast<double>(samples));
    std::vector<vfb::AffineState> states =
        vfb::integrate_affine(lambda0, lambdadot0, delta, eos, times, 1e-3);
    std::printf("t,lambda,lambda_dot,energy,tau,value,rate\n");
    for (const vfb::AffineState& s : states) {
        vfb::RescaledAffine r = vfb::to_rescaled(s);
        std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                    s.lambda, s.lambda_dot, vfb::affine_energy(s, delta, eos),
                    r.tau, r.value, r.rate);
    }
    return 0;
}

int cmd_ops_check()
{
    return vfb::run_identity_suite(std::cout) ? 0 : 3;
}

int cmd_convergence(const std::string& config_path, int levels, bool temporal)
{
    vfb::RunConfig cfg = vfb::load_config(config_path);
    std::vector<vfb::ConvergenceRow> rows =
        vfb::convergence_study(cfg, levels, temporal);
    std::printf("%8s %12s %16s %10s\n", "n", "dtau", "error", "ratio");
    for (const vfb::ConvergenceRow& r : rows)
        std::printf("%8d %12.5g %16.8g %10.4g\n", r.n, r.dtau, r.error, r.ratio);
    return 0;
}

int cmd_envelopes(double beta)
{
    vfb::DecayEnvelopes env = vfb::decay_envelopes(beta);
    vfb::EnvelopeChecks chk = vfb::envelope_checks(env);
    std::printf("beta=%g sigma1=%g sigma2=%g\n", env.beta, env.sigma1,
                env.sigma2);
    static const char* names[8] = {"Gt1", "Gt2", "Gt3", "Gt4",
                                   "Gt5", "Gt6", "H1",  "H2"};
    std::printf("%6s %16s %16s\n", "curve", "mass", "rel_tail");
    for (int i = 0; i < 8; ++i)
        std::printf("%6s %16.8g %16.8g\n", names[i], chk.mass[i], chk.tail[i]);
    std::printf("max_value=%.8g bounded=%s worst_tail=%.8g\n", chk.max_value,
                chk.bounded ? "yes" : "no", chk.worst_tail);
    return chk.bounded ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"vacuum free-boundary flow laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_flag = "out";
    int workers = 4, levels = 3, samples = 200;
    bool temporal = false;
    double gamma = 2.0, delta = 1e-3, tmax = 10.0;
    double lambda0 = 1.0, lambdadot0 = 1.05, beta = 3.0;

    CLI::App* run = app.add_subcommand("run", "single experiment from a config");
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--out", out_flag, "output directory");

    CLI::App* sweep = app.add_subcommand("sweep", "cartesian parameter sweep");
    sweep->add_option("--config", config_path, "JSON config file")->required();
    sweep->add_option("--workers", workers, "worker threads");
    sweep->add_option("--out", out_flag, "output directory");

    CLI::App* oracle = app.add_subcommand("oracle", "scalar affine oracle CSV");
    oracle->add_option("--gamma", gamma, "adiabatic exponent > 1");
    oracle->add_option("--delta", delta, "weight scale >= 0");
    oracle->add_option("--tmax", tmax, "physical horizon");
    oracle->add_option("--lambda0", lambda0, "initial factor");
    oracle->add_option("--lambdadot0", lambdadot0, "initial rate");
    oracle->add_option("--samples", samples, "output rows");

    app.add_subcommand("ops-check", "exact operator identity suite");

    CLI::App* conv = app.add_subcommand("convergence", "Richardson table");
    conv->add_option("--config", config_path, "JSON config file")->required();
    conv->add_option("--levels", levels, "refinement levels (>= 3)");
    conv->add_flag("--temporal", temporal, "halve dtau instead of h");

    CLI::App* envs = app.add_subcommand("envelopes", "decay envelope table");
    envs->add_option("--beta", beta, "exponent beta > 0")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("run")) return cmd_run(config_path, out_flag);
        if (app.got_subcommand("sweep"))
            return cmd_sweep(config_path, workers, out_flag);
        if (app.got_subcommand("oracle"))
            return cmd_oracle(gamma, delta, tmax, lambda0, lambdadot0, samples);
        if (app.got_subcommand("ops-check")) return cmd_ops_check();
        if (app.got_subcommand("convergence"))
            return cmd_convergence(config_path, levels, temporal);
        if (app.got_subcommand("envelopes")) return cmd_envelopes(beta);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
