// output.hpp: CSV tables and SVG quick-looks
//
// Every CSV starts with "# config_hash=<hash> seed=<seed>" followed by a
// header row.  Numbers are written with 12 significant digits; nothing
// timing-dependent ends up in a CSV, so reruns are byte-identical.
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "otto/ensemble.hpp"
#include "otto/grid_propagator.hpp"

namespace otto::output {

namespace fs = std::filesystem;

std::string header(const std::string& config_hash, std::uint64_t seed);

// Files written for an engine run: ledger.csv, moments.csv, summary.csv,
// corners.csv.  Relax runs write moments.csv and summary.csv.
void write_run(const fs::path& dir, const RunResult& r);

void write_ledger(const fs::path& file, const RunResult& r);
void write_moments(const fs::path& file, const RunResult& r);
void write_summary(const fs::path& file, const RunResult& r);
void write_corners(const fs::path& file, const RunResult& r);

// sweep.csv plus phase_diagram.csv / boundary.csv when available.
void write_sweep(const fs::path& dir, const SweepResult& s, const RunConfig& cfg);

void write_crosscheck(const fs::path& file, const CrosscheckResult& c, const std::string& hash,
                      std::uint64_t seed);
void write_noise_selftest(const fs::path& file, const std::vector<NoiseCheck>& checks,
                          const std::string& hash, std::uint64_t seed);
void write_noise_path(const fs::path& file, const NoisePath& p);
// rho(r, 0) along the diagonal and the moments.
void write_snapshot(const fs::path& file, const DensityGrid& g);

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> xy;
};

void svg_lines(const fs::path& file, const std::string& title, const std::string& xlabel,
               const std::vector<Series>& series);
// values[i][j] on (xs[i], ys[j]); NaN cells are drawn grey.
void svg_heatmap(const fs::path& file, const std::string& title, const std::vector<double>& xs,
                 const std::vector<double>& ys, const std::vector<std::vector<double>>& values);

} // namespace otto::output
