#ifndef HANKEL_HARNESS_HPP
#define HANKEL_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

#include <hankel/modal.hpp>
#include <hankel/solver.hpp>
#include <hankel/types.hpp>

namespace hankel
{

/// Environment variable capping the worker pool.
inline constexpr const char* threads_env_var = "HANKEL_RECOVER_THREADS";

/// Worker count: HANKEL_RECOVER_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
unsigned worker_count();

/// Runs task(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& task);

/// Per-trial seeds derived from hash(base_seed, R, M, trial).
struct TrialSeeds
{
    std::uint64_t signal;
    std::uint64_t ensemble;
    std::uint64_t noise;
};

TrialSeeds trial_seeds(std::uint64_t base_seed, Index r, Index m,
                       Index trial);

struct PhaseGridSpec
{
    Index n = 16;
    std::vector<Index> r_values;
    std::vector<Index> m_values;
    int trials       = 20;
    double threshold = default_success_threshold;
    std::uint64_t base_seed = 0;
    ModeFamily family = ModeFamily::sinusoid;
    SolverConfig solver;
    unsigned workers = 0; ///< 0 selects worker_count()

    /// Throws ArgumentError for empty/out-of-range values or trials < 1.
    void validate() const;
};

struct TrialOutcome
{
    double rel_error = 0.0;
    bool success     = false;
    bool converged   = false;
    int iterations   = 0;
};

struct PhaseCell
{
    Index r = 0;
    Index m = 0;
    int successes = 0;
    int trials    = 0;
    double success_rate = 0.0;
};

struct PhaseGrid
{
    Index n = 0;
    std::vector<Index> r_values;
    std::vector<Index> m_values;
    int trials       = 0;
    double threshold = 0.0;
    std::uint64_t base_seed = 0;
    std::vector<PhaseCell> cells; ///< sorted by (R, M)

    /// Rate of cell (r, m); throws ArgumentError when absent.
    double rate(Index r, Index m) const;
};

/// One instance: random_instance -> measure -> solve -> success.
TrialOutcome run_trial(const PhaseGridSpec& spec, Index r, Index m,
                       Index trial);

/// All trials of one cell, reproducible in isolation.
PhaseCell run_cell(const PhaseGridSpec& spec, Index r, Index m);

/// Every (R, M) cell of the grid. Validation happens before any work.
PhaseGrid run_phase_transition(const PhaseGridSpec& spec);

struct NormEstimate
{
    Index n = 0;
    double mean   = 0.0;
    double std_error = 0.0;
};

struct NormScan
{
    std::vector<Index> n_values;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<NormEstimate> estimates; ///< sorted by N
};

/// Monte-Carlo mean and standard error of ||lift(g)||_2 for complex Gaussian
/// g in C^{2N-1}. Requires trials >= 30.
NormScan run_norm_scan(const std::vector<Index>& n_values, int trials,
                       std::uint64_t seed, unsigned workers = 0);

/// CSV with header N,R,M,trials,threshold,success_rate.
void write_csv(const PhaseGrid& grid, std::ostream& os);
/// CSV with header N,trials,mean_norm,stderr.
void write_csv(const NormScan& scan, std::ostream& os);

/// write_csv to a file; throws std::runtime_error naming the path on failure.
void emit_csv(const PhaseGrid& grid, const std::filesystem::path& path);
void emit_csv(const NormScan& scan, const std::filesystem::path& path);

/// Parsers for the two CSV schemas; trial-count and seed fields that the
/// schema does not carry are left at their defaults.
PhaseGrid read_phase_csv(std::istream& is);
NormScan read_norm_csv(std::istream& is);

} // namespace hankel

#endif // HANKEL_HARNESS_HPP
