#include "geit/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "geit/analysis.hpp"
#include "geit/config.hpp"
#include "geit/dde.hpp"
#include "geit/errors.hpp"
#include "geit/io.hpp"
#include "geit/model.hpp"
#include "geit/scattering.hpp"

namespace geit {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

SystemParams random_cross_check_params(std::mt19937_64& rng, bool lossy) {
    auto u = [&rng] { return uniform01(rng); };
    SystemParams p;
    p.coupling_a.n_points = 1 + std::min(3, static_cast<int>(u() * 4.0));
    p.coupling_b.m_points = std::min(3, static_cast<int>(u() * 4.0));
    p.coupling_a.tau = 10.0 * u();
    p.coupling_b.tau_tilde = 10.0 * u();
    p.atom.omega_21 = 100.0 + 900.0 * u();
    p.atom.omega_31 = p.atom.omega_21 + 50.0 + 950.0 * u();
    p.coupling_a.gamma_31 = 1.0;
    p.coupling_b.gamma_21 = 2.0 * u();
    if (p.coupling_b.m_points == 0) p.coupling_b.gamma_21 = 0.0;
    const double oc_mag = 2.0 * u();
    const double oc_arg = 2.0 * kPi * u();
    p.drive.omega_c = std::polar(oc_mag, oc_arg);
    p.drive.delta_32 = 2.0 * u() - 1.0;
    p.probe.delta_31 = 6.0 * u() - 3.0;
    const double g2 = u();
    const double g3 = u();
    if (lossy) {
        p.atom.gamma_2 = g2;
        p.atom.gamma_3 = g3;
    }
    return p;
}

double relative_deviation(Complex a, Complex b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

OracleCheckReport oracle_check(std::uint64_t seed, int draws, double tolerance) {
    if (draws < 1) throw ValidationError("oracle check needs at least one draw");
    if (!(tolerance > 0.0)) throw ValidationError("oracle check tolerance must be > 0");
    std::mt19937_64 rng(seed);
    OracleCheckReport rep;
    rep.seed = seed;
    rep.draws = draws;
    rep.tolerance = tolerance;
    for (int k = 0; k < draws; ++k) {
        const bool lossy = (k % 2) == 1;
        const SystemParams p = random_cross_check_params(rng, lossy);
        const double d = p.probe.delta_31;
        const ScatteringSolution sol = solve_amplitudes(p, d);
        const double dev_t = relative_deviation(transmission(p, d), sol.transmitted());
        const double dev_e3 = relative_deviation(excitation_e3(p, d), sol.e3);
        rep.max_dev_t = std::max(rep.max_dev_t, dev_t);
        rep.max_dev_e3 = std::max(rep.max_dev_e3, dev_e3);
        if (!lossy) rep.max_flux_dev = std::max(rep.max_flux_dev, flux_deviation(sol, p));
        if (dev_t > tolerance || dev_e3 > tolerance) ++rep.failures;
    }
    rep.pass = rep.failures == 0;
    return rep;
}

std::string oracle_check_json(const OracleCheckReport& rep) {
    ordered_json j;
    j["seed"] = rep.seed;
    j["draws"] = rep.draws;
    j["tolerance"] = rep.tolerance;
    j["max_dev_t"] = rep.max_dev_t;
    j["max_dev_e3"] = rep.max_dev_e3;
    j["max_flux_dev"] = rep.max_flux_dev;
    j["failures"] = rep.failures;
    j["pass"] = rep.pass;
    return j.dump(2) + "\n";
}

namespace {

fs::path resolve_dir(const std::string& flag, const std::string& config_dir) {
    if (!flag.empty()) return flag;
    if (!config_dir.empty()) return config_dir;
    if (const char* env = std::getenv("GEIT_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

std::string stem_or(const std::string& flag, const RunConfig& cfg, const char* fallback) {
    if (!flag.empty()) return flag;
    if (!cfg.output.basename.empty()) return cfg.output.basename;
    return fallback;
}

void emit(const fs::path& path, const std::string& content) {
    atomic_write(path, content);
    std::cout << "wrote " << path.string() << "\n";
}

int task_spectrum(const RunConfig& cfg, const fs::path& dir, const std::string& stem) {
    emit(dir / (stem + ".csv"), spectrum_csv(sweep_spectrum(cfg.params, cfg.grid)));
    return 0;
}

int task_resonances(const RunConfig& cfg, const fs::path& dir, const std::string& stem) {
    cfg.params.validate();
    auto roots = single_photon_resonances(cfg.params, cfg.grid.min, cfg.grid.max);
    ordered_json j;
    j["delta_min"] = cfg.grid.min;
    j["delta_max"] = cfg.grid.max;
    j["count"] = roots.size();
    j["resonances"] = roots;
    emit(dir / (stem + ".json"), j.dump(2) + "\n");
    return 0;
}

int task_df_points(const RunConfig& cfg, const fs::path& dir, const std::string& stem) {
    cfg.params.validate();
    DfReport rep = decoherence_free_points(cfg.params, cfg.grid.min, cfg.grid.max);
    ordered_json j;
    j["delta_min"] = cfg.grid.min;
    j["delta_max"] = cfg.grid.max;
    j["whole_range"] = rep.whole_range;
    j["count"] = rep.points.size();
    j["points"] = rep.points;
    emit(dir / (stem + ".json"), j.dump(2) + "\n");
    return 0;
}

int task_window(const RunConfig& cfg, const fs::path& dir, const std::string& stem) {
    Spectrum s = sweep_spectrum(cfg.params, cfg.grid);
    WindowReport w = transparency_window(cfg.params, s);
    ordered_json j;
    j["center"] = w.center;
    j["width"] = w.width;
    j["predicted"] = w.predicted;
    j["regime"] = w.regime;
    emit(dir / (stem + ".json"), j.dump(2) + "\n");
    return 0;
}

int task_eliminate(const RunConfig& cfg, const fs::path& dir, const std::string& stem,
                   double tau_lo, double tau_hi) {
    cfg.params.validate();
    auto taus = elimination_scan(cfg.params, tau_lo, tau_hi);
    ordered_json j;
    j["tau_min"] = tau_lo;
    j["tau_max"] = tau_hi;
    j["count"] = taus.size();
    j["tau_values"] = taus;
    emit(dir / (stem + ".json"), j.dump(2) + "\n");
    return 0;
}

int task_dde(const RunConfig& cfg, const fs::path& dir, const std::string& stem) {
    DdeResult r = run_dde(cfg.params, cfg.dde);
    emit(dir / (stem + "_trajectory.csv"), trajectory_csv(r.trajectory));
    ordered_json j;
    j["delta_31"] = cfg.params.probe.delta_31;
    j["re_rho31_tilde"] = r.rho31_tilde.real();
    j["im_rho31_tilde"] = r.rho31_tilde.imag();
    j["demod_window"] = cfg.dde.demod_window;
    j["t_final"] = r.trajectory.final_time();
    j["max_trace_dev"] = r.trajectory.max_trace_dev;
    j["max_herm_dev"] = r.trajectory.max_herm_dev;
    emit(dir / (stem + "_demod.json"), j.dump(2) + "\n");
    return 0;
}

int task_oracle_check(std::uint64_t seed, int draws, double tol, const fs::path& dir,
                      const std::string& stem) {
    OracleCheckReport rep = oracle_check(seed, draws, tol);
    emit(dir / (stem + ".json"), oracle_check_json(rep));
    if (!rep.pass) {
        std::cerr << "oracle check failed: " << rep.failures << " of " << rep.draws
                  << " draws exceeded tolerance\n";
        return 1;
    }
    return 0;
}

// Built-in presets for the two-point lossless configuration driven at
// omega_c = 0.1: probe spectra for short, intermediate, and long interval
// times, a zoom on the transparency window, and the out-of-phase variant.
SystemParams preset_two_point(double tau, double phi) {
    SystemParams p;
    p.coupling_a.n_points = 2;
    p.coupling_a.tau = tau;
    p.coupling_a.gamma_31 = 1.0;
    p.coupling_a.phi = phi;
    p.drive.omega_c = 0.1;
    return p;
}

int task_fig3(const fs::path& dir) {
    struct Panel {
        const char* file;
        double tau;
        double phi;
        DetuningGrid grid;
    };
    const double phi0 = 200.0 * kPi;
    const Panel panels[] = {
        {"fig3a.csv", 0.05, phi0, {-2.0, 2.0, 4001}},
        {"fig3a_phase_pi.csv", 0.05, 201.0 * kPi, {-2.0, 2.0, 4001}},
        {"fig3b.csv", 0.05, phi0, {-0.05, 0.05, 2001}},
        {"fig3c.csv", 3.0, phi0, {-2.0, 2.0, 4001}},
        {"fig3d.csv", 10.0, phi0, {-2.0, 2.0, 8001}},
    };
    for (const Panel& panel : panels) {
        SystemParams p = preset_two_point(panel.tau, panel.phi);
        emit(dir / panel.file, spectrum_csv(sweep_spectrum(p, panel.grid)));
    }
    return 0;
}

struct TaskOptions {
    std::string config_path;
    std::string outdir;
    std::string outname;
    std::uint64_t seed = 42;
    int draws = 200;
    double tol = 1e-9;
    double tau_lo = 0.0;
    double tau_hi = 10.0;
};

int dispatch_named(const std::string& task, const RunConfig& cfg, const TaskOptions& opt) {
    const fs::path dir = resolve_dir(opt.outdir, cfg.output.dir);
    if (task == "spectrum") return task_spectrum(cfg, dir, stem_or(opt.outname, cfg, "spectrum"));
    if (task == "resonances")
        return task_resonances(cfg, dir, stem_or(opt.outname, cfg, "resonances"));
    if (task == "df-points")
        return task_df_points(cfg, dir, stem_or(opt.outname, cfg, "df_points"));
    if (task == "window") return task_window(cfg, dir, stem_or(opt.outname, cfg, "window"));
    if (task == "eliminate")
        return task_eliminate(cfg, dir, stem_or(opt.outname, cfg, "eliminate"), opt.tau_lo,
                              opt.tau_hi);
    if (task == "dde") return task_dde(cfg, dir, stem_or(opt.outname, cfg, "dde"));
    if (task == "oracle-check")
        return task_oracle_check(opt.seed, opt.draws, opt.tol, dir,
                                 stem_or(opt.outname, cfg, "oracle_check"));
    if (task == "fig3") return task_fig3(dir);
    throw ValidationError("unknown task '" + task + "'");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"three-level giant-atom waveguide transport simulator"};
    app.require_subcommand(1);
    TaskOptions opt;

    auto add_output_opts = [&opt](CLI::App* sc) {
        sc->add_option("--outdir", opt.outdir,
                       "output directory (overrides config and GEIT_OUTPUT_DIR)");
        sc->add_option("-o,--output", opt.outname, "output file stem");
    };
    auto add_config_opt = [&opt](CLI::App* sc) {
        sc->add_option("-c,--config", opt.config_path, "run configuration file")
            ->required()
            ->check(CLI::ExistingFile);
    };

    int rc = 0;
    auto config_task = [&](const char* name, const char* help) {
        CLI::App* sc = app.add_subcommand(name, help);
        add_config_opt(sc);
        add_output_opts(sc);
        sc->callback([&rc, &opt, name] {
            rc = dispatch_named(name, load_config(opt.config_path), opt);
        });
        return sc;
    };

    config_task("spectrum", "sweep the probe transmission over the detuning grid");
    config_task("resonances", "locate single-photon resonances (detuning = collective shift)");
    config_task("df-points", "locate detunings where the collective decay vanishes");
    config_task("window", "measure the transparency window and classify the regime");
    CLI::App* elim =
        config_task("eliminate", "scan waveguide-B interval times that cancel the |2> decay");
    elim->add_option("--tau-min", opt.tau_lo, "scan lower bound")->capture_default_str();
    elim->add_option("--tau-max", opt.tau_hi, "scan upper bound")->capture_default_str();
    config_task("dde", "integrate the delayed master equation and demodulate rho_31");

    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "randomized closed-form vs direct-solver comparison report");
    oracle->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    oracle->add_option("--draws", opt.draws, "number of parameter draws")->capture_default_str();
    oracle->add_option("--tol", opt.tol, "relative deviation tolerance")->capture_default_str();
    add_output_opts(oracle);
    oracle->callback([&rc, &opt] {
        rc = task_oracle_check(opt.seed, opt.draws, opt.tol, resolve_dir(opt.outdir, ""),
                               opt.outname.empty() ? "oracle_check" : opt.outname);
    });

    CLI::App* fig3 = app.add_subcommand(
        "fig3", "emit the built-in two-point preset spectra (panels a-d plus variants)");
    fig3->add_option("--outdir", opt.outdir, "output directory");
    fig3->callback([&rc, &opt] { rc = task_fig3(resolve_dir(opt.outdir, "")); });

    CLI::App* runsc = app.add_subcommand("run", "run the task named in the config [run] section");
    add_config_opt(runsc);
    add_output_opts(runsc);
    runsc->add_option("--tau-min", opt.tau_lo, "eliminate-scan lower bound")
        ->capture_default_str();
    runsc->add_option("--tau-max", opt.tau_hi, "eliminate-scan upper bound")
        ->capture_default_str();
    runsc->callback([&rc, &opt] {
        RunConfig cfg = load_config(opt.config_path);
        if (cfg.task.empty())
            throw ValidationError("config has no [run] task entry; nothing to run");
        rc = dispatch_named(cfg.task, cfg, opt);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StepSizeTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MissingHistory& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateDenominator& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SingularSystem& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NonFiniteState& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NotConverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const NoWindowFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

}  // namespace geit
