#include "qdiff/sweeps.hpp"

#include <cstdio>
#include <fstream>
#include <functional>

#include "parallel.hpp"
#include "qdiff/identities.hpp"
#include "qdiff/speed.hpp"

namespace qdiff {

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::speed_vs_q: return "speed_vs_q";
        case Experiment::k_and_c_vs_omega: return "k_and_c_vs_omega";
        case Experiment::k_vs_B: return "k_vs_B";
        case Experiment::k_vs_q: return "k_vs_q";
        case Experiment::verify: return "verify";
        case Experiment::lemma_constructions: return "lemma_constructions";
    }
    throw DomainError("unknown experiment");
}

Experiment experiment_from_string(const std::string& s) {
    for (Experiment e :
         {Experiment::speed_vs_q, Experiment::k_and_c_vs_omega,
          Experiment::k_vs_B, Experiment::k_vs_q, Experiment::verify,
          Experiment::lemma_constructions})
        if (to_string(e) == s) return e;
    throw DomainError("unknown experiment: " + s);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

using RowTask = std::function<std::vector<std::string>()>;

SweepTable run_tasks(std::vector<std::string> columns,
                     const std::vector<RowTask>& tasks, int workers) {
    SweepTable table;
    table.columns = std::move(columns);
    table.rows.resize(tasks.size());
    detail::parallel_for(
        static_cast<int>(tasks.size()), workers, [&](int i) {
            try {
                table.rows[i] = tasks[i]();
            } catch (const std::exception& e) {
                std::vector<std::string> row(table.columns.size(), "nan");
                row.back() = "error: " + sanitize(e.what());
                table.rows[i] = row;
            }
        });
    return table;
}

std::vector<std::string> speed_row(
    const std::vector<std::string>& prefix, const PeriodicField& r,
    const PeriodicField& D, double q, double tol) {
    const SpeedOutcome out = spreading_speed(r, D, q, Direction::right, tol);
    std::vector<std::string> row = prefix;
    row.push_back(format_double(out.k0));
    if (out.spreading()) {
        row.push_back(format_double(out.speed->c_star));
        row.push_back(format_double(out.speed->lambda_star));
        row.push_back("ok");
    } else {
        row.push_back("0");
        row.push_back("nan");
        row.push_back("extinct");
    }
    return row;
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec) {
    std::vector<RowTask> tasks;

    switch (spec.experiment) {
        case Experiment::speed_vs_q: {
            for (double q : spec.grid)
                tasks.push_back([=, &spec] {
                    return speed_row({format_double(q)}, spec.r, spec.D, q,
                                     spec.tolerance);
                });
            return run_tasks({"q", "k0", "c_star", "lambda_star", "status"},
                             tasks, spec.workers);
        }
        case Experiment::k_and_c_vs_omega: {
            std::vector<double> qs =
                spec.q_list.empty() ? std::vector<double>{1.0} : spec.q_list;
            for (double omega : spec.grid)
                for (double q : qs)
                    tasks.push_back([=, &spec] {
                        return speed_row(
                            {format_double(omega), format_double(q)}, spec.r,
                            phase_shift(spec.D, omega), q, spec.tolerance);
                    });
            return run_tasks(
                {"omega", "q", "k0", "c_star", "lambda_star", "status"},
                tasks, spec.workers);
        }
        case Experiment::k_vs_B: {
            std::vector<double> qs =
                spec.q_list.empty() ? std::vector<double>{1.0} : spec.q_list;
            for (double B : spec.grid)
                for (double q : qs)
                    tasks.push_back([=, &spec]() -> std::vector<std::string> {
                        const double k = persistence(spec.r, B * spec.D, q,
                                                     spec.tolerance);
                        const double limit =
                            large_B_limit(spec.r, spec.D, q);
                        return {format_double(B), format_double(q),
                                format_double(k), format_double(limit), "ok"};
                    });
            return run_tasks({"B", "q", "k0", "large_B_limit", "status"},
                             tasks, spec.workers);
        }
        case Experiment::k_vs_q: {
            for (double q : spec.grid)
                tasks.push_back([=, &spec]() -> std::vector<std::string> {
                    const double k =
                        persistence(spec.r, spec.D, q, spec.tolerance);
                    return {format_double(q), format_double(k), "ok"};
                });
            return run_tasks({"q", "k0", "status"}, tasks, spec.workers);
        }
        case Experiment::verify: {
            VerifyOptions options;
            options.workers = spec.workers;
            SweepTable table;
            table.columns = {"identity", "case", "gap", "tolerance", "status"};
            for (const IdentityCheck& c : run_verify(options))
                table.rows.push_back({sanitize(c.identity),
                                      sanitize(c.case_name),
                                      format_double(c.gap),
                                      format_double(c.tolerance),
                                      c.pass ? "pass" : "fail"});
            return table;
        }
        case Experiment::lemma_constructions: {
            const double q = spec.q_list.empty() ? 1.0 : spec.q_list[0];
            for (int which : {0, 1})
                tasks.push_back([=, &spec]() -> std::vector<std::string> {
                    const PeriodicField hq = hq_correction(spec.D, q);
                    const bool slower = which == 0;
                    const PeriodicField r =
                        slower ? hq + 1.0 : (-50.0) * hq;
                    const double kq = persistence(r, spec.D, q, 1e-8);
                    const double k0 = persistence(r, spec.D, 0.0, 1e-8);
                    const double gap = slower ? k0 - kq : kq - k0;
                    return {slower ? "slower" : "faster", format_double(q),
                            format_double(kq), format_double(k0),
                            format_double(gap),
                            gap > 1e-4 ? "pass" : "fail"};
                });
            return run_tasks({"construction", "q", "k_q", "k_0", "gap",
                              "status"},
                             tasks, spec.workers);
        }
    }
    throw DomainError("unknown experiment");
}

void write_csv(const SweepTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("write_csv: cannot open " + path);
    out << "# qdiff-sweep v1\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << (i ? "," : "") << cells[i];
        out << "\n";
    };
    line(table.columns);
    for (const auto& row : table.rows) line(row);
    if (!out) throw Error("write_csv: write failed for " + path);
}

}  // namespace qdiff
