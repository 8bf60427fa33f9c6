#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdiff/anneal.hpp"
#include "qdiff/config.hpp"
#include "qdiff/identities.hpp"
#include "qdiff/pdesim.hpp"
#include "qdiff/speed.hpp"
#include "qdiff/sweeps.hpp"

using nlohmann::json;

namespace {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QDIFF_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qdiff::DomainError("config: cannot open " + path);
    return json::parse(in);
}

template <typename T>
void apply_cfg(const json& cfg, const char* key, const CLI::Option* opt,
               T& var) {
    if (cfg.contains(key) && opt->count() == 0) var = cfg.at(key).get<T>();
}

qdiff::PeriodicField field_from(const json* cfg, const char* key,
                                const CLI::Option* opt,
                                const std::string& text) {
    if (cfg && cfg->contains(key) && opt->count() == 0)
        return qdiff::parse_field_json(cfg->at(key));
    return qdiff::parse_field_inline(text);
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw qdiff::Error("cannot open output file " + path);
    out << j.dump(2) << "\n";
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{
        "Principal eigenvalues and spreading speeds for periodic "
        "q-diffusion KPP equations"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    app.add_option("--output-dir", out_dir, "Directory for output files");

    // ---- eig ----------------------------------------------------------
    auto* eig = app.add_subcommand(
        "eig", "Principal eigenvalue of the q-diffusion operator");
    std::string eig_r = "const:1", eig_D = "const:1", eig_cfg,
                eig_json = "eig.json";
    double eig_q = 0.0, eig_lambda = 0.0, eig_tol = 1e-8;
    auto* eig_r_opt = eig->add_option("--r", eig_r, "Growth rate field");
    auto* eig_D_opt = eig->add_option("--D", eig_D, "Diffusion field");
    auto* eig_q_opt = eig->add_option("--q", eig_q, "Diffusion law exponent");
    auto* eig_l_opt = eig->add_option("--lambda", eig_lambda, "Tilt");
    auto* eig_t_opt = eig->add_option("--tol", eig_tol, "Eigenvalue tolerance");
    eig->add_option("--config", eig_cfg, "JSON config file");
    eig->add_option("--json", eig_json, "Machine-readable output file");

    // ---- speed --------------------------------------------------------
    auto* speed =
        app.add_subcommand("speed", "Freidlin-Gartner spreading speed");
    std::string sp_r = "const:1", sp_D = "cos2:0.1,1,0", sp_dir = "right",
                sp_cfg, sp_json = "speed.json";
    double sp_q = 0.0, sp_tol = 1e-6;
    auto* sp_r_opt = speed->add_option("--r", sp_r, "Growth rate field");
    auto* sp_D_opt = speed->add_option("--D", sp_D, "Diffusion field");
    auto* sp_q_opt = speed->add_option("--q", sp_q, "Diffusion law exponent");
    auto* sp_dir_opt =
        speed->add_option("--direction", sp_dir, "right or left")
            ->check(CLI::IsMember({"right", "left"}));
    auto* sp_t_opt = speed->add_option("--tol", sp_tol, "Speed tolerance");
    speed->add_option("--config", sp_cfg, "JSON config file");
    speed->add_option("--json", sp_json, "Machine-readable output file");

    // ---- verify -------------------------------------------------------
    auto* verify =
        app.add_subcommand("verify", "Run the analytic identity suite");
    std::string vf_cfg, vf_csv = "verify.csv", vf_json = "verify.json";
    double vf_tol = 1e-8;
    int vf_workers = 0;
    std::uint64_t vf_seed = 20240901ULL;
    auto* vf_t_opt = verify->add_option("--tol", vf_tol, "Eigen tolerance");
    auto* vf_s_opt =
        verify->add_option("--seed", vf_seed, "Seed for random trials");
    auto* vf_w_opt = verify->add_option("--workers", vf_workers,
                                        "Parallel workers (0 = env/1)");
    verify->add_option("--config", vf_cfg, "JSON config file");
    verify->add_option("--csv", vf_csv, "Result table file");
    verify->add_option("--json", vf_json, "Machine-readable output file");

    // ---- sweep --------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "Batch parameter sweep");
    std::string sw_exp = "speed_vs_q", sw_r = "const:1",
                sw_D = "cos2:0.1,1,0", sw_cfg, sw_csv = "sweep.csv";
    std::vector<double> sw_grid, sw_qs;
    double sw_tol = 1e-6;
    int sw_workers = 0;
    auto* sw_e_opt =
        sweep->add_option("--experiment", sw_exp, "Experiment name");
    auto* sw_g_opt =
        sweep->add_option("--grid", sw_grid, "Parameter grid")->delimiter(',');
    auto* sw_q_opt = sweep->add_option("--q-list", sw_qs, "q values")
                         ->delimiter(',');
    auto* sw_r_opt = sweep->add_option("--r", sw_r, "Growth rate field");
    auto* sw_D_opt = sweep->add_option("--D", sw_D, "Diffusion field");
    auto* sw_t_opt = sweep->add_option("--tol", sw_tol, "Per-point tolerance");
    auto* sw_w_opt = sweep->add_option("--workers", sw_workers,
                                       "Parallel workers (0 = env/1)");
    sweep->add_option("--config", sw_cfg, "JSON config file");
    sweep->add_option("--csv", sw_csv, "Output CSV file");

    // ---- simulate -----------------------------------------------------
    auto* simulate =
        app.add_subcommand("simulate", "Direct front propagation experiment");
    std::string si_r = "cos2:0,1,0", si_D = "cos2:0.1,1,0", si_cfg,
                si_csv = "front_trace.csv", si_json = "simulate.json";
    qdiff::SimConfig sim_defaults;
    double si_q = 0.0, si_len = sim_defaults.domain_length,
           si_dx = sim_defaults.dx, si_cfl = sim_defaults.cfl_safety,
           si_tf = sim_defaults.t_final, si_level = sim_defaults.level,
           si_trans = sim_defaults.transient_fraction,
           si_width = sim_defaults.initial_width,
           si_sample = sim_defaults.sample_interval;
    auto* si_r_opt = simulate->add_option("--r", si_r, "Growth rate field");
    auto* si_D_opt = simulate->add_option("--D", si_D, "Diffusion field");
    auto* si_q_opt = simulate->add_option("--q", si_q, "Exponent");
    auto* si_len_opt =
        simulate->add_option("--domain-length", si_len, "Domain length");
    auto* si_dx_opt = simulate->add_option("--dx", si_dx, "Grid spacing");
    auto* si_cfl_opt = simulate->add_option("--cfl", si_cfl, "CFL safety");
    auto* si_tf_opt = simulate->add_option("--t-final", si_tf, "End time");
    auto* si_lv_opt =
        simulate->add_option("--level", si_level, "Front tracking level");
    auto* si_tr_opt = simulate->add_option("--transient", si_trans,
                                           "Fraction discarded before fit");
    auto* si_w_opt = simulate->add_option("--initial-width", si_width,
                                          "Width of the initial plateau");
    auto* si_si_opt = simulate->add_option("--sample-interval", si_sample,
                                           "Front sampling interval");
    simulate->add_option("--config", si_cfg, "JSON config file");
    simulate->add_option("--csv", si_csv, "Front trace file");
    simulate->add_option("--json", si_json, "Machine-readable output file");

    // ---- optimize -----------------------------------------------------
    auto* optimize = app.add_subcommand(
        "optimize", "Simulated annealing over the spline diffusion");
    std::string op_r = "cos2:0,1,0", op_cfg, op_json = "optimize.json",
                op_csv = "optimize_trace.csv";
    qdiff::AnnealConfig anneal_defaults;
    double op_qn = anneal_defaults.q_num, op_qd = anneal_defaults.q_den,
           op_T0 = anneal_defaults.T0, op_cool = anneal_defaults.cool,
           op_sigma = anneal_defaults.proposal_sigma,
           op_stol = anneal_defaults.speed_tol;
    int op_iters = anneal_defaults.n_iters,
        op_ce = anneal_defaults.cool_every;
    std::uint64_t op_seed = 0;
    std::vector<double> op_init = {0.5, 0.5, 0.5, 0.5};
    auto* op_r_opt = optimize->add_option("--r", op_r, "Growth rate field");
    auto* op_qn_opt =
        optimize->add_option("--q-num", op_qn, "Numerator speed exponent");
    auto* op_qd_opt =
        optimize->add_option("--q-den", op_qd, "Denominator speed exponent");
    auto* op_it_opt =
        optimize->add_option("--iters", op_iters, "Chain length");
    auto* op_seed_opt =
        optimize->add_option("--seed", op_seed, "RNG seed")->required();
    auto* op_T_opt =
        optimize->add_option("--t0", op_T0, "Initial temperature");
    auto* op_c_opt = optimize->add_option("--cool", op_cool, "Cooling factor");
    auto* op_ce_opt =
        optimize->add_option("--cool-every", op_ce, "Cooling interval");
    auto* op_sg_opt =
        optimize->add_option("--sigma", op_sigma, "Proposal std deviation");
    auto* op_st_opt =
        optimize->add_option("--speed-tol", op_stol, "Per-speed tolerance");
    auto* op_in_opt =
        optimize->add_option("--initial", op_init, "Initial control values")
            ->delimiter(',')
            ->expected(4);
    optimize->add_option("--config", op_cfg, "JSON config file");
    optimize->add_option("--json", op_json, "Machine-readable output file");
    optimize->add_option("--csv", op_csv, "Acceptance trace file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*eig) {
        json cfg;
        if (!eig_cfg.empty()) {
            cfg = load_config(eig_cfg);
            qdiff::reject_unknown_keys(
                cfg, {"r", "D", "q", "lambda", "tol"}, "eig config");
            apply_cfg(cfg, "q", eig_q_opt, eig_q);
            apply_cfg(cfg, "lambda", eig_l_opt, eig_lambda);
            apply_cfg(cfg, "tol", eig_t_opt, eig_tol);
        }
        const auto r = field_from(&cfg, "r", eig_r_opt, eig_r);
        const auto D = field_from(&cfg, "D", eig_D_opt, eig_D);
        const auto res = qdiff::k_value(r, D, eig_q, eig_lambda, eig_tol);
        std::printf("k = %.12g\n", res.k);
        std::printf("n = %d\n", res.n_used);
        write_json_file(join_path(out_dir, eig_json),
                        json{{"command", "eig"},
                             {"r", r.describe()},
                             {"D", D.describe()},
                             {"q", eig_q},
                             {"lambda", eig_lambda},
                             {"tol", eig_tol},
                             {"k", res.k},
                             {"n", res.n_used}});
        return 0;
    }

    if (*speed) {
        json cfg;
        if (!sp_cfg.empty()) {
            cfg = load_config(sp_cfg);
            qdiff::reject_unknown_keys(
                cfg, {"r", "D", "q", "direction", "tol"}, "speed config");
            apply_cfg(cfg, "q", sp_q_opt, sp_q);
            apply_cfg(cfg, "direction", sp_dir_opt, sp_dir);
            apply_cfg(cfg, "tol", sp_t_opt, sp_tol);
            if (sp_dir != "right" && sp_dir != "left")
                throw qdiff::DomainError(
                    "speed config: direction must be right or left");
        }
        const auto r = field_from(&cfg, "r", sp_r_opt, sp_r);
        const auto D = field_from(&cfg, "D", sp_D_opt, sp_D);
        const auto dir = sp_dir == "right" ? qdiff::Direction::right
                                           : qdiff::Direction::left;
        const auto out = qdiff::spreading_speed(r, D, sp_q, dir, sp_tol);
        std::printf("k0 = %.12g\n", out.k0);
        json j{{"command", "speed"}, {"r", r.describe()},
               {"D", D.describe()},  {"q", sp_q},
               {"direction", sp_dir}, {"tol", sp_tol},
               {"k0", out.k0},       {"spreading", out.spreading()}};
        if (out.spreading()) {
            std::printf("c_star = %.12g\n", out.speed->c_star);
            std::printf("lambda_star = %.12g\n", out.speed->lambda_star);
            j["c_star"] = out.speed->c_star;
            j["lambda_star"] = out.speed->lambda_star;
        } else {
            std::printf("extinction (no positive spreading speed)\n");
        }
        write_json_file(join_path(out_dir, sp_json), j);
        return 0;
    }

    if (*verify) {
        json cfg;
        if (!vf_cfg.empty()) {
            cfg = load_config(vf_cfg);
            qdiff::reject_unknown_keys(cfg, {"tol", "seed", "workers"},
                                       "verify config");
            apply_cfg(cfg, "tol", vf_t_opt, vf_tol);
            apply_cfg(cfg, "seed", vf_s_opt, vf_seed);
            apply_cfg(cfg, "workers", vf_w_opt, vf_workers);
        }
        qdiff::VerifyOptions options;
        options.eig_tol = vf_tol;
        options.seed = vf_seed;
        options.workers = resolve_workers(vf_workers);
        const auto checks = qdiff::run_verify(options);

        qdiff::SweepTable table;
        table.columns = {"identity", "case", "gap", "tolerance", "status"};
        json rows = json::array();
        int failures = 0;
        for (const auto& c : checks) {
            std::printf("%-22s %-24s gap=%-13.4g tol=%-9.3g %s\n",
                        c.identity.c_str(), c.case_name.c_str(), c.gap,
                        c.tolerance, c.pass ? "pass" : "FAIL");
            table.rows.push_back({c.identity, c.case_name,
                                  qdiff::format_double(c.gap),
                                  qdiff::format_double(c.tolerance),
                                  c.pass ? "pass" : "fail"});
            rows.push_back(json{{"identity", c.identity},
                                {"case", c.case_name},
                                {"gap", c.gap},
                                {"tolerance", c.tolerance},
                                {"pass", c.pass}});
            if (!c.pass) ++failures;
        }
        std::printf("%zu checks, %d failures\n", checks.size(), failures);
        qdiff::write_csv(table, join_path(out_dir, vf_csv));
        write_json_file(join_path(out_dir, vf_json),
                        json{{"command", "verify"},
                             {"tol", vf_tol},
                             {"seed", vf_seed},
                             {"workers", options.workers},
                             {"failures", failures},
                             {"checks", rows}});
        return failures == 0 ? 0 : 1;
    }

    if (*sweep) {
        json cfg;
        if (!sw_cfg.empty()) {
            cfg = load_config(sw_cfg);
            qdiff::reject_unknown_keys(
                cfg,
                {"experiment", "grid", "q_list", "r", "D", "tol", "workers"},
                "sweep config");
            apply_cfg(cfg, "experiment", sw_e_opt, sw_exp);
            apply_cfg(cfg, "grid", sw_g_opt, sw_grid);
            apply_cfg(cfg, "q_list", sw_q_opt, sw_qs);
            apply_cfg(cfg, "tol", sw_t_opt, sw_tol);
            apply_cfg(cfg, "workers", sw_w_opt, sw_workers);
        }
        qdiff::SweepSpec spec;
        spec.experiment = qdiff::experiment_from_string(sw_exp);
        spec.grid = sw_grid;
        spec.q_list = sw_qs;
        spec.r = field_from(&cfg, "r", sw_r_opt, sw_r);
        spec.D = field_from(&cfg, "D", sw_D_opt, sw_D);
        spec.tolerance = sw_tol;
        spec.workers = resolve_workers(sw_workers);

        const auto table = qdiff::run_sweep(spec);
        const std::string csv_path = join_path(out_dir, sw_csv);
        qdiff::write_csv(table, csv_path);

        for (std::size_t c = 0; c < table.columns.size(); ++c)
            std::printf("%s%s", c ? "," : "", table.columns[c].c_str());
        std::printf("\n");
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                std::printf("%s%s", c ? "," : "", row[c].c_str());
            std::printf("\n");
        }

        write_json_file(csv_path + ".manifest.json",
                        json{{"command", "sweep"},
                             {"experiment", sw_exp},
                             {"grid", spec.grid},
                             {"q_list", spec.q_list},
                             {"r", spec.r.describe()},
                             {"D", spec.D.describe()},
                             {"tol", spec.tolerance},
                             {"workers", spec.workers},
                             {"csv", sw_csv},
                             {"columns", table.columns},
                             {"rows", table.rows.size()}});
        return 0;
    }

    if (*simulate) {
        json cfg;
        if (!si_cfg.empty()) {
            cfg = load_config(si_cfg);
            qdiff::reject_unknown_keys(
                cfg,
                {"r", "D", "q", "domain_length", "dx", "cfl", "t_final",
                 "level", "transient", "initial_width", "sample_interval"},
                "simulate config");
            apply_cfg(cfg, "q", si_q_opt, si_q);
            apply_cfg(cfg, "domain_length", si_len_opt, si_len);
            apply_cfg(cfg, "dx", si_dx_opt, si_dx);
            apply_cfg(cfg, "cfl", si_cfl_opt, si_cfl);
            apply_cfg(cfg, "t_final", si_tf_opt, si_tf);
            apply_cfg(cfg, "level", si_lv_opt, si_level);
            apply_cfg(cfg, "transient", si_tr_opt, si_trans);
            apply_cfg(cfg, "initial_width", si_w_opt, si_width);
            apply_cfg(cfg, "sample_interval", si_si_opt, si_sample);
        }
        qdiff::SimConfig sim;
        sim.r = field_from(&cfg, "r", si_r_opt, si_r);
        sim.D = field_from(&cfg, "D", si_D_opt, si_D);
        sim.q = si_q;
        sim.domain_length = si_len;
        sim.dx = si_dx;
        sim.cfl_safety = si_cfl;
        sim.t_final = si_tf;
        sim.level = si_level;
        sim.transient_fraction = si_trans;
        sim.initial_width = si_width;
        sim.sample_interval = si_sample;

        const auto trace = qdiff::measure_front_speed(sim);
        std::printf("fitted_speed = %.12g\n", trace.fitted_speed);
        std::printf("fit_residual = %.12g\n", trace.fit_residual);
        std::printf("dt = %.12g\n", trace.dt);
        std::printf("dx = %.12g\n", trace.dx);
        if (trace.hit_boundary)
            std::printf("warning: front reached the domain boundary\n");

        std::ofstream csv(join_path(out_dir, si_csv));
        if (!csv) throw qdiff::Error("cannot open front trace file");
        csv << "t,x_front\n";
        for (std::size_t i = 0; i < trace.times.size(); ++i)
            csv << qdiff::format_double(trace.times[i]) << ","
                << qdiff::format_double(trace.positions[i]) << "\n";

        write_json_file(join_path(out_dir, si_json),
                        json{{"command", "simulate"},
                             {"r", sim.r.describe()},
                             {"D", sim.D.describe()},
                             {"q", sim.q},
                             {"fitted_speed", trace.fitted_speed},
                             {"fit_residual", trace.fit_residual},
                             {"dt", trace.dt},
                             {"dx", trace.dx},
                             {"hit_boundary", trace.hit_boundary},
                             {"monotone", trace.monotone},
                             {"samples", trace.times.size()}});
        return 0;
    }

    if (*optimize) {
        json cfg;
        if (!op_cfg.empty()) {
            cfg = load_config(op_cfg);
            qdiff::reject_unknown_keys(
                cfg,
                {"r", "q_num", "q_den", "iters", "seed", "t0", "cool",
                 "cool_every", "sigma", "speed_tol", "initial"},
                "optimize config");
            apply_cfg(cfg, "q_num", op_qn_opt, op_qn);
            apply_cfg(cfg, "q_den", op_qd_opt, op_qd);
            apply_cfg(cfg, "iters", op_it_opt, op_iters);
            apply_cfg(cfg, "seed", op_seed_opt, op_seed);
            apply_cfg(cfg, "t0", op_T_opt, op_T0);
            apply_cfg(cfg, "cool", op_c_opt, op_cool);
            apply_cfg(cfg, "cool_every", op_ce_opt, op_ce);
            apply_cfg(cfg, "sigma", op_sg_opt, op_sigma);
            apply_cfg(cfg, "speed_tol", op_st_opt, op_stol);
            apply_cfg(cfg, "initial", op_in_opt, op_init);
        }
        if (op_init.size() != 4)
            throw qdiff::DomainError("optimize: initial needs 4 values");
        qdiff::AnnealConfig anneal;
        anneal.q_num = op_qn;
        anneal.q_den = op_qd;
        anneal.r = field_from(&cfg, "r", op_r_opt, op_r);
        anneal.n_iters = op_iters;
        anneal.T0 = op_T0;
        anneal.cool = op_cool;
        anneal.cool_every = op_ce;
        anneal.proposal_sigma = op_sigma;
        anneal.seed = op_seed;
        anneal.speed_tol = op_stol;
        anneal.initial = {op_init[0], op_init[1], op_init[2], op_init[3]};

        const auto result = qdiff::run_annealing(anneal);
        std::printf("best_ratio = %.12g\n", result.best_ratio);
        std::printf("best_control = %.12g,%.12g,%.12g,%.12g\n",
                    result.best_control[0], result.best_control[1],
                    result.best_control[2], result.best_control[3]);
        std::printf("evaluations = %ld\n", result.evaluations);

        std::ofstream csv(join_path(out_dir, op_csv));
        if (!csv) throw qdiff::Error("cannot open trace file");
        csv << "iteration,ratio,accepted\n";
        for (const auto& h : result.history)
            csv << h.iteration << "," << qdiff::format_double(h.ratio) << ","
                << (h.accepted ? 1 : 0) << "\n";

        write_json_file(join_path(out_dir, op_json),
                        json{{"command", "optimize"},
                             {"r", anneal.r.describe()},
                             {"q_num", op_qn},
                             {"q_den", op_qd},
                             {"iters", op_iters},
                             {"seed", op_seed},
                             {"t0", op_T0},
                             {"cool", op_cool},
                             {"cool_every", op_ce},
                             {"sigma", op_sigma},
                             {"speed_tol", op_stol},
                             {"best_ratio", result.best_ratio},
                             {"best_control", result.best_control},
                             {"evaluations", result.evaluations}});
        return 0;
    }

    return 0;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qdiff::ConvergenceError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 1;
    } catch (const qdiff::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
