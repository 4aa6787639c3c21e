#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>

#include "monolab/config.hpp"
#include "monolab/csv.hpp"
#include "monolab/fpi.hpp"
#include "monolab/functions.hpp"

namespace monolab {

/// Seed of the f_Π instance used for every run at size n.
[[nodiscard]] std::uint64_t instance_seed(std::uint64_t master, std::size_t n);
/// Seed of replicate r at (n, c_index).
[[nodiscard]] std::uint64_t replicate_seed(std::uint64_t master, std::size_t n, std::size_t c_index,
                                           std::size_t replicate);

/// Instance parameters for size n under cfg. A zero length means the
/// existence bound; lengths below ell are raised to ell.
[[nodiscard]] FPiParams fpi_params_for(const ExperimentConfig& cfg, std::size_t n);

/// The function under study at size n (one shared instance per n).
[[nodiscard]] std::unique_ptr<PseudoBooleanFunction> make_study_function(const ExperimentConfig& cfg, std::size_t n);

/// Columns: row_type,n,c,replicate,T,hit_optimum,T_over_nlogn,T_over_n15,
/// mean_T,se_T,median_T,success_fraction,censored_fraction,harmonic_bound,budget.
/// row_type is run, aggregate or warning.
[[nodiscard]] CsvReport run_scaling_study(const ExperimentConfig& cfg);

/// Per-replicate path statistics plus one aggregate row per (n, c). When
/// trace is given it receives every strided record.
[[nodiscard]] CsvReport run_stagnation_study(const ExperimentConfig& cfg, CsvReport* trace = nullptr);

/// Runs the study selected by cfg.kind and writes cfg.output (and
/// cfg.trace_output) under out_dir. Returns the report.
CsvReport run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// MONOLAB_OUTPUT_DIR, or the working directory.
[[nodiscard]] std::filesystem::path output_directory();

}  // namespace monolab
