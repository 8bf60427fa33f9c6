#pragma once

#include <string>
#include <vector>

#include "qdiff/field.hpp"

namespace qdiff {

enum class Experiment {
    speed_vs_q,
    k_and_c_vs_omega,
    k_vs_B,
    k_vs_q,
    verify,
    lemma_constructions,
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

/// Batch experiment over a parameter grid. `grid` is the list of q, omega or
/// B values depending on the experiment; `q_list` is used by the omega sweep.
struct SweepSpec {
    Experiment experiment = Experiment::speed_vs_q;
    std::vector<double> grid;
    std::vector<double> q_list;
    PeriodicField r = PeriodicField::constant(1.0);
    PeriodicField D = PeriodicField::cosine_squared(0.1, 1.0, 0.0);
    double tolerance = 1e-6;
    int workers = 1;
};

/// Formatted result rows; the CSV body is reproducible bit-for-bit because
/// formatting happens at computation time with a fixed ordering.
struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Evaluates every grid point (parallel over points, results ordered by
/// input index); per-point failures are recorded in the status column.
SweepTable run_sweep(const SweepSpec& spec);

/// Writes `# qdiff-sweep v1`, the header line and the rows.
void write_csv(const SweepTable& table, const std::string& path);

std::string format_double(double v);

}  // namespace qdiff
