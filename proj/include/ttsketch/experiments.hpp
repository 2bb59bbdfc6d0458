#pragma once

#include "ttsketch/decompose.hpp"
#include "ttsketch/tensor.hpp"
#include "ttsketch/tt.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ttsketch {

enum class Experiment { noise, oversampling, oversampling_decay, order, order_decay, runtime, als };

[[nodiscard]] std::optional<Experiment> parse_experiment(std::string_view name);
[[nodiscard]] std::string_view experiment_name(Experiment e);

struct ExperimentConfig {
    Experiment experiment = Experiment::noise;
    std::size_t d = 10;
    std::size_t n = 4;
    std::size_t rStar = 10;
    std::size_t r = 10;
    std::size_t p = 5;
    double tau = 0.05;
    std::size_t samples = 32;
    std::uint64_t seed = 1;
    double decayExponent = 2.0;
    std::size_t cutoff = 250;
    /// Rank of the random train that the decay profile is imposed on.
    std::size_t decayRank = 250;
    std::size_t nnz = 500;
    /// Values of the swept parameter; empty selects the default grid.
    std::vector<double> grid;
    /// Timed runs per record (median taken); a discarded warm-up precedes them when > 1.
    std::size_t repeats = 3;
    /// Worker threads; 0 uses the hardware concurrency.
    std::size_t threads = 0;
    bool fullScale = false;
    /// Empty writes to standard output.
    std::filesystem::path outPath;
};

/// Defaults of each experiment (runtime: n = 2, r = 10, p = 10, d swept).
[[nodiscard]] ExperimentConfig default_config(Experiment e);

/// The swept parameter's values for cfg (cfg.grid when set).
[[nodiscard]] std::vector<double> parameter_grid(const ExperimentConfig& cfg);

struct SampleRecord {
    std::string experiment;
    std::size_t sample = 0;
    std::uint64_t seed = 0;
    double param = 0.0;
    double epsDet = 0.0;
    /// ε_rnd, or ε_ALS for "als" records.
    double epsRnd = 0.0;
    /// epsRnd / epsDet, NaN when epsDet is zero or unavailable.
    double ratio = 0.0;
    double tRndMs = 0.0;
    double tDetMs = 0.0;
};

[[nodiscard]] std::vector<SampleRecord> run_noise(const ExperimentConfig& cfg);
[[nodiscard]] std::vector<SampleRecord> run_oversampling(const ExperimentConfig& cfg);
[[nodiscard]] std::vector<SampleRecord> run_order(const ExperimentConfig& cfg);
[[nodiscard]] std::vector<SampleRecord> run_runtime(const ExperimentConfig& cfg);
/// Emits "als" records and, per sample and p, an "als-rnd" record for the randomized TT-SVD.
[[nodiscard]] std::vector<SampleRecord> run_als(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment.
[[nodiscard]] std::vector<SampleRecord> run_experiment(const ExperimentConfig& cfg);

/// Randomized TT-SVD at sketch ranks clip(r + p), rounded to clip(r).
[[nodiscard]] TTTensor randomized_truncated(const DenseTensor& x, std::size_t r, std::size_t p, const RngStream& rng);

/// Random train of rank clip(decayRank) carrying the decay profile, evaluated densely.
[[nodiscard]] DenseTensor decay_input(const Shape& shape, const ExperimentConfig& cfg, const RngStream& rng);

inline constexpr std::string_view kCsvHeader = "experiment,sample,seed,param,eps_det,eps_rnd,ratio,t_rnd_ms,t_det_ms";

/// Schema comment line, column header, then one line per record.
void write_csv(std::ostream& out, const std::vector<SampleRecord>& records);

struct ParameterSummary {
    std::string experiment;
    double param = 0.0;
    std::size_t samples = 0;
    double meanEpsDet = 0.0;
    double meanEpsRnd = 0.0;
    double meanRatio = 0.0;
    double medianTRndMs = 0.0;
};

/// Per (experiment, param) means in first-appearance order.
[[nodiscard]] std::vector<ParameterSummary> summarize(const std::vector<SampleRecord>& records);

}  // namespace ttsketch
