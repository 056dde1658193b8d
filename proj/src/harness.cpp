#include <hankel/harness.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include <hankel/hankel_core.hpp>
#include <hankel/measurement.hpp>
#include <hankel/random.hpp>

namespace hankel
{

namespace
{

// Stream tags keep the three per-trial draws independent.
constexpr std::uint64_t signal_stream   = 0x5167;
constexpr std::uint64_t ensemble_stream = 0xE45E;
constexpr std::uint64_t noise_stream    = 0x4015;

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
    {
        fields.push_back(field);
    }
    return fields;
}

std::string strip_cr(std::string line)
{
    if (!line.empty() && line.back() == '\r')
    {
        line.pop_back();
    }
    return line;
}

template <typename Result>
void write_file(const Result& result, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw std::runtime_error("cannot open " + path.string() +
                                 " for writing");
    }
    write_csv(result, out);
    out.flush();
    if (!out)
    {
        throw std::runtime_error("failed writing " + path.string());
    }
}

} // namespace

unsigned worker_count()
{
    if (const char* env = std::getenv(threads_env_var))
    {
        char* end        = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0)
        {
            return static_cast<unsigned>(value);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& task)
{
    if (workers == 0)
    {
        workers = worker_count();
    }
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
        {
            task(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
            {
                return;
            }
            try
            {
                task(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
    {
        pool.emplace_back(worker);
    }
    for (auto& t : pool)
    {
        t.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

TrialSeeds trial_seeds(std::uint64_t base_seed, Index r, Index m, Index trial)
{
    const std::uint64_t cell = derive_seed(
        base_seed, {static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(m),
                    static_cast<std::uint64_t>(trial)});
    return {derive_seed(cell, {signal_stream}),
            derive_seed(cell, {ensemble_stream}),
            derive_seed(cell, {noise_stream})};
}

void PhaseGridSpec::validate() const
{
    if (n < 1)
    {
        throw ArgumentError("phase grid: N must be >= 1");
    }
    if (trials < 1)
    {
        throw ArgumentError("phase grid: trials must be >= 1");
    }
    if (!(threshold > 0.0))
    {
        throw ArgumentError("phase grid: threshold must be positive");
    }
    const Index len = ambient_length(n);
    for (Index r : r_values)
    {
        if (r < 1 || r >= len)
        {
            throw ArgumentError("phase grid: R=" + std::to_string(r) +
                                " outside [1, 2N-2]");
        }
    }
    for (Index m : m_values)
    {
        if (m < 1 || m > len)
        {
            throw ArgumentError("phase grid: M=" + std::to_string(m) +
                                " outside [1, 2N-1]");
        }
    }
    solver.validate();
}

double PhaseGrid::rate(Index r, Index m) const
{
    for (const auto& cell : cells)
    {
        if (cell.r == r && cell.m == m)
        {
            return cell.success_rate;
        }
    }
    throw ArgumentError("phase grid has no cell R=" + std::to_string(r) +
                        ", M=" + std::to_string(m));
}

TrialOutcome run_trial(const PhaseGridSpec& spec, Index r, Index m,
                       Index trial)
{
    const TrialSeeds seeds = trial_seeds(spec.base_seed, r, m, trial);
    const ComplexVector truth =
        synthesize(random_instance(spec.n, r, spec.family, seeds.signal));
    const MeasurementEnsemble ens = sample_ensemble(m, spec.n, seeds.ensemble);
    const Observation obs = measure(ens, truth, spec.solver.delta, seeds.noise);
    const RecoveryResult res = solve(ens, obs, ens.lift(), spec.solver);

    TrialOutcome out;
    out.rel_error  = relative_error(res.x_hat, truth);
    out.success    = out.rel_error <= spec.threshold;
    out.converged  = res.converged;
    out.iterations = res.iterations;
    return out;
}

PhaseCell run_cell(const PhaseGridSpec& spec, Index r, Index m)
{
    spec.validate();
    PhaseCell cell;
    cell.r      = r;
    cell.m      = m;
    cell.trials = spec.trials;
    for (int t = 0; t < spec.trials; ++t)
    {
        cell.successes += run_trial(spec, r, m, t).success ? 1 : 0;
    }
    cell.success_rate =
        static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
    return cell;
}

PhaseGrid run_phase_transition(const PhaseGridSpec& spec)
{
    spec.validate();

    PhaseGrid grid;
    grid.n         = spec.n;
    grid.trials    = spec.trials;
    grid.threshold = spec.threshold;
    grid.base_seed = spec.base_seed;
    grid.r_values  = spec.r_values;
    grid.m_values  = spec.m_values;
    std::sort(grid.r_values.begin(), grid.r_values.end());
    grid.r_values.erase(std::unique(grid.r_values.begin(), grid.r_values.end()),
                        grid.r_values.end());
    std::sort(grid.m_values.begin(), grid.m_values.end());
    grid.m_values.erase(std::unique(grid.m_values.begin(), grid.m_values.end()),
                        grid.m_values.end());

    const std::size_t n_r     = grid.r_values.size();
    const std::size_t n_m     = grid.m_values.size();
    const std::size_t n_trial = static_cast<std::size_t>(spec.trials);
    const std::size_t total   = n_r * n_m * n_trial;

    // Flat (R, M, trial) task index; each task writes only its own slot.
    std::vector<char> hits(total, 0);
    parallel_for(total, spec.workers, [&](std::size_t idx) {
        const std::size_t t  = idx % n_trial;
        const std::size_t mi = (idx / n_trial) % n_m;
        const std::size_t ri = idx / (n_trial * n_m);
        hits[idx] = run_trial(spec, grid.r_values[ri], grid.m_values[mi],
                              static_cast<Index>(t))
                        .success
                        ? 1
                        : 0;
    });

    grid.cells.reserve(n_r * n_m);
    for (std::size_t ri = 0; ri < n_r; ++ri)
    {
        for (std::size_t mi = 0; mi < n_m; ++mi)
        {
            PhaseCell cell;
            cell.r      = grid.r_values[ri];
            cell.m      = grid.m_values[mi];
            cell.trials = spec.trials;
            const std::size_t base = (ri * n_m + mi) * n_trial;
            for (std::size_t t = 0; t < n_trial; ++t)
            {
                cell.successes += hits[base + t];
            }
            cell.success_rate = static_cast<double>(cell.successes) /
                                static_cast<double>(cell.trials);
            grid.cells.push_back(cell);
        }
    }
    return grid;
}

NormScan run_norm_scan(const std::vector<Index>& n_values, int trials,
                       std::uint64_t seed, unsigned workers)
{
    if (trials < 30)
    {
        throw ArgumentError("norm scan needs at least 30 trials");
    }
    NormScan scan;
    scan.trials   = trials;
    scan.seed     = seed;
    scan.n_values = n_values;
    std::sort(scan.n_values.begin(), scan.n_values.end());
    scan.n_values.erase(std::unique(scan.n_values.begin(), scan.n_values.end()),
                        scan.n_values.end());
    for (Index n : scan.n_values)
    {
        if (n < 1)
        {
            throw ArgumentError("norm scan: N must be >= 1");
        }
    }

    const std::size_t per_n = static_cast<std::size_t>(trials);
    std::vector<double> norms(scan.n_values.size() * per_n, 0.0);
    parallel_for(norms.size(), workers, [&](std::size_t idx) {
        const Index n = scan.n_values[idx / per_n];
        const auto t  = static_cast<std::uint64_t>(idx % per_n);
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(n), t}));
        const ComplexVector g = complex_gaussian_vector(ambient_length(n), rng);
        norms[idx]            = spectral_norm(lift(g, n));
    });

    for (std::size_t i = 0; i < scan.n_values.size(); ++i)
    {
        const auto first = norms.begin() + static_cast<std::ptrdiff_t>(i * per_n);
        const Eigen::Map<const RealVector> sample(&*first,
                                                  static_cast<Index>(per_n));
        const double mean = sample.mean();
        const double var  = (sample.array() - mean).square().sum() /
                           static_cast<double>(per_n - 1);
        scan.estimates.push_back(
            {scan.n_values[i], mean,
             std::sqrt(var) / std::sqrt(static_cast<double>(per_n))});
    }
    return scan;
}

void write_csv(const PhaseGrid& grid, std::ostream& os)
{
    std::vector<PhaseCell> cells = grid.cells;
    std::sort(cells.begin(), cells.end(),
              [](const PhaseCell& a, const PhaseCell& b) {
                  return a.r != b.r ? a.r < b.r : a.m < b.m;
              });
    os << "N,R,M,trials,threshold,success_rate\n";
    os << std::setprecision(9);
    for (const auto& c : cells)
    {
        os << grid.n << ',' << c.r << ',' << c.m << ',' << c.trials << ','
           << grid.threshold << ',' << c.success_rate << '\n';
    }
}

void write_csv(const NormScan& scan, std::ostream& os)
{
    std::vector<NormEstimate> rows = scan.estimates;
    std::sort(rows.begin(), rows.end(),
              [](const NormEstimate& a, const NormEstimate& b) {
                  return a.n < b.n;
              });
    os << "N,trials,mean_norm,stderr\n";
    os << std::setprecision(9);
    for (const auto& e : rows)
    {
        os << e.n << ',' << scan.trials << ',' << e.mean << ',' << e.std_error
           << '\n';
    }
}

void emit_csv(const PhaseGrid& grid, const std::filesystem::path& path)
{
    write_file(grid, path);
}

void emit_csv(const NormScan& scan, const std::filesystem::path& path)
{
    write_file(scan, path);
}

PhaseGrid read_phase_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) ||
        strip_cr(line) != "N,R,M,trials,threshold,success_rate")
    {
        throw ArgumentError("phase CSV: missing or unexpected header");
    }
    PhaseGrid grid;
    while (std::getline(is, line))
    {
        line = strip_cr(line);
        if (line.empty())
        {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 6)
        {
            throw ArgumentError("phase CSV: malformed row '" + line + "'");
        }
        PhaseCell cell;
        grid.n            = std::stol(f[0]);
        cell.r            = std::stol(f[1]);
        cell.m            = std::stol(f[2]);
        cell.trials       = std::stoi(f[3]);
        grid.threshold    = std::stod(f[4]);
        cell.success_rate = std::stod(f[5]);
        cell.successes    = static_cast<int>(
            std::lround(cell.success_rate * static_cast<double>(cell.trials)));
        grid.trials = cell.trials;
        grid.cells.push_back(cell);
        if (std::find(grid.r_values.begin(), grid.r_values.end(), cell.r) ==
            grid.r_values.end())
        {
            grid.r_values.push_back(cell.r);
        }
        if (std::find(grid.m_values.begin(), grid.m_values.end(), cell.m) ==
            grid.m_values.end())
        {
            grid.m_values.push_back(cell.m);
        }
    }
    std::sort(grid.m_values.begin(), grid.m_values.end());
    return grid;
}

NormScan read_norm_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) ||
        strip_cr(line) != "N,trials,mean_norm,stderr")
    {
        throw ArgumentError("norm CSV: missing or unexpected header");
    }
    NormScan scan;
    while (std::getline(is, line))
    {
        line = strip_cr(line);
        if (line.empty())
        {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 4)
        {
            throw ArgumentError("norm CSV: malformed row '" + line + "'");
        }
        NormEstimate e;
        e.n         = std::stol(f[0]);
        scan.trials = std::stoi(f[1]);
        e.mean      = std::stod(f[2]);
        e.std_error = std::stod(f[3]);
        scan.n_values.push_back(e.n);
        scan.estimates.push_back(e);
    }
    return scan;
}

} // namespace hankel
