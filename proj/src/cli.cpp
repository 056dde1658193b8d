#include <hankel/cli.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include <hankel/harness.hpp>
#include <hankel/measurement.hpp>
#include <hankel/modal.hpp>
#include <hankel/random.hpp>
#include <hankel/solver.hpp>

namespace hankel::cli
{

namespace
{

using nlohmann::json;

/// Values gathered from the config file and then from flags; flags win.
struct Settings
{
    std::optional<std::string> n;
    std::optional<std::string> r;
    std::optional<std::string> m;
    std::optional<double> delta;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<double> threshold;
    std::optional<double> rho;
    std::optional<int> max_iters;
    std::optional<double> tol;
    std::optional<std::string> out;
    std::optional<std::string> input;
    std::optional<std::string> family;
    bool full   = false;
    bool pencil = false;
};

std::string json_scalar_text(const json& v)
{
    if (v.is_string())
    {
        return v.get<std::string>();
    }
    if (v.is_array())
    {
        std::string joined;
        for (const auto& e : v)
        {
            if (!joined.empty())
            {
                joined += ',';
            }
            joined += std::to_string(e.get<long long>());
        }
        return joined;
    }
    if (v.is_number_integer())
    {
        return std::to_string(v.get<long long>());
    }
    throw ArgumentError("config: expected integer, list or string");
}

Settings load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ArgumentError("cannot read config file " + path);
    }
    json cfg;
    try
    {
        in >> cfg;
    }
    catch (const json::exception& e)
    {
        throw ArgumentError("config " + path + ": " + e.what());
    }
    if (!cfg.is_object())
    {
        throw ArgumentError("config " + path + ": top level must be an object");
    }

    Settings s;
    try
    {
        for (const auto& [key, value] : cfg.items())
        {
            if (key == "n") s.n = json_scalar_text(value);
            else if (key == "r") s.r = json_scalar_text(value);
            else if (key == "m") s.m = json_scalar_text(value);
            else if (key == "delta") s.delta = value.get<double>();
            else if (key == "seed") s.seed = value.get<std::uint64_t>();
            else if (key == "trials") s.trials = value.get<int>();
            else if (key == "threshold") s.threshold = value.get<double>();
            else if (key == "rho") s.rho = value.get<double>();
            else if (key == "max-iters" || key == "max_iters")
                s.max_iters = value.get<int>();
            else if (key == "tol") s.tol = value.get<double>();
            else if (key == "out") s.out = value.get<std::string>();
            else if (key == "input") s.input = value.get<std::string>();
            else if (key == "family") s.family = value.get<std::string>();
            else if (key == "full") s.full = value.get<bool>();
            else if (key == "pencil") s.pencil = value.get<bool>();
            else throw ArgumentError("config: unknown key '" + key + "'");
        }
    }
    catch (const json::exception& e)
    {
        throw ArgumentError("config " + path + ": " + e.what());
    }
    return s;
}

/// Raw flag storage for one subcommand.
struct Flags
{
    std::string n, r, m, out, config, input, family;
    double delta = 0, threshold = 0, rho = 0, tol = 0;
    std::uint64_t seed = 0;
    int trials = 0, max_iters = 0;
    bool full = false, pencil = false;
};

Settings merge(const CLI::App& app, const Flags& f)
{
    Settings s;
    if (app.count("--config") > 0)
    {
        s = load_config(f.config);
    }
    auto given = [&](const char* name) {
        return app.get_option_no_throw(name) != nullptr && app.count(name) > 0;
    };
    if (given("--n")) s.n = f.n;
    if (given("--r")) s.r = f.r;
    if (given("--m")) s.m = f.m;
    if (given("--delta")) s.delta = f.delta;
    if (given("--seed")) s.seed = f.seed;
    if (given("--trials")) s.trials = f.trials;
    if (given("--threshold")) s.threshold = f.threshold;
    if (given("--rho")) s.rho = f.rho;
    if (given("--max-iters")) s.max_iters = f.max_iters;
    if (given("--tol")) s.tol = f.tol;
    if (given("--out")) s.out = f.out;
    if (given("--input")) s.input = f.input;
    if (given("--family")) s.family = f.family;
    if (given("--full")) s.full = f.full;
    if (given("--pencil")) s.pencil = f.pencil;
    return s;
}

Index single_index(const std::optional<std::string>& text, Index fallback,
                   const char* name)
{
    if (!text)
    {
        return fallback;
    }
    const auto values = parse_index_list(*text);
    if (values.size() != 1)
    {
        throw ArgumentError(std::string("--") + name +
                            " expects a single integer");
    }
    return values.front();
}

ModeFamily parse_family(const std::optional<std::string>& text)
{
    if (!text || *text == "sinusoid")
    {
        return ModeFamily::sinusoid;
    }
    if (*text == "damped")
    {
        return ModeFamily::damped;
    }
    throw ArgumentError("--family must be 'sinusoid' or 'damped'");
}

SolverConfig solver_config(const Settings& s)
{
    SolverConfig cfg;
    if (s.rho) cfg.rho = *s.rho;
    if (s.max_iters) cfg.max_iters = *s.max_iters;
    if (s.tol)
    {
        cfg.tol_primal = *s.tol;
        cfg.tol_dual   = *s.tol;
    }
    if (s.delta) cfg.delta = *s.delta;
    cfg.validate();
    return cfg;
}

json complex_array(const ComplexVector& v)
{
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i)
    {
        arr.push_back({v[i].real(), v[i].imag()});
    }
    return arr;
}

Complex parse_complex(const json& v)
{
    if (v.is_number())
    {
        return {v.get<double>(), 0.0};
    }
    if (v.is_array() && v.size() == 2)
    {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ArgumentError("complex values must be numbers or [re, im] pairs");
}

struct LoadedSignal
{
    ComplexVector x;
    Index n = 0;
    std::optional<std::vector<Mode>> modes;
};

LoadedSignal load_signal(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ArgumentError("cannot read input signal " + path);
    }
    json doc;
    try
    {
        in >> doc;
        LoadedSignal sig;
        if (doc.contains("x"))
        {
            const auto& arr = doc.at("x");
            sig.x.resize(static_cast<Index>(arr.size()));
            for (std::size_t i = 0; i < arr.size(); ++i)
            {
                sig.x[static_cast<Index>(i)] = parse_complex(arr[i]);
            }
            if (sig.x.size() % 2 == 0 || sig.x.size() == 0)
            {
                throw ArgumentError("input signal must have odd length 2N-1");
            }
            sig.n = (sig.x.size() + 1) / 2;
            if (doc.contains("n") && doc.at("n").get<Index>() != sig.n)
            {
                throw ArgumentError("input 'n' disagrees with signal length");
            }
        }
        else if (doc.contains("modes"))
        {
            ModalSignal ms;
            ms.n = doc.at("n").get<Index>();
            for (const auto& mode : doc.at("modes"))
            {
                ms.modes.push_back(
                    {parse_complex(mode.at("z")), parse_complex(mode.at("c"))});
            }
            sig.x     = synthesize(ms);
            sig.n     = ms.n;
            sig.modes = ms.modes;
        }
        else
        {
            throw ArgumentError("input signal needs an 'x' or 'modes' field");
        }
        return sig;
    }
    catch (const json::exception& e)
    {
        throw ArgumentError("input " + path + ": " + e.what());
    }
}

json modes_json(const std::vector<Mode>& modes)
{
    json arr = json::array();
    for (const auto& mode : modes)
    {
        arr.push_back({{"z", {mode.z.real(), mode.z.imag()}},
                       {"c", {mode.c.real(), mode.c.imag()}}});
    }
    return arr;
}

void write_json(const json& doc, const std::string& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
    {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << std::setw(2) << doc << '\n';
    if (!out)
    {
        throw std::runtime_error("failed writing " + path);
    }
}

int run_recover(const Settings& s, std::ostream& out)
{
    const std::uint64_t seed = s.seed.value_or(0);
    const ModeFamily family  = parse_family(s.family);
    ComplexVector truth;
    Index n = single_index(s.n, 16, "n");
    Index r = single_index(s.r, 2, "r");
    std::optional<std::vector<Mode>> true_modes;

    if (s.input)
    {
        LoadedSignal loaded = load_signal(*s.input);
        if (s.n && n != loaded.n)
        {
            throw ArgumentError("--n " + std::to_string(n) +
                                " disagrees with input length (N=" +
                                std::to_string(loaded.n) + ")");
        }
        n     = loaded.n;
        truth = std::move(loaded.x);
        if (loaded.modes)
        {
            true_modes = loaded.modes;
            if (!s.r)
            {
                r = static_cast<Index>(loaded.modes->size());
            }
        }
    }
    else
    {
        const ModalSignal sig = random_instance(
            n, r, family, derive_seed(seed, {0x5167}));
        truth      = synthesize(sig);
        true_modes = sig.modes;
    }

    const Index m = single_index(s.m, 0, "m");
    if (m < 1 || m > ambient_length(n))
    {
        throw ArgumentError("--m must lie in [1, 2N-1] = [1, " +
                            std::to_string(ambient_length(n)) + "]");
    }
    const SolverConfig cfg = solver_config(s);
    const double threshold =
        s.threshold.value_or(default_success_threshold);
    if (!(threshold > 0.0))
    {
        throw ArgumentError("--threshold must be positive");
    }

    const MeasurementEnsemble ens =
        sample_ensemble(m, n, derive_seed(seed, {0xE45E}));
    const Observation obs = measure(ens, truth, cfg.delta,
                                    derive_seed(seed, {0x4015}));
    const RecoveryResult res = solve(ens, obs, ens.lift(), cfg);

    const double rel_err  = truth.norm() > 0.0
                                ? relative_error(res.x_hat, truth)
                                : res.x_hat.norm();
    const double weighted_err =
        ens.lift().weight_apply(res.x_hat - truth, false).norm();

    json doc = {
        {"n", n},
        {"m", m},
        {"r", r},
        {"seed", seed},
        {"delta", cfg.delta},
        {"rho", cfg.rho},
        {"max_iters", cfg.max_iters},
        {"tol_primal", cfg.tol_primal},
        {"tol_dual", cfg.tol_dual},
        {"threshold", threshold},
        {"converged", res.converged},
        {"iterations", res.iterations},
        {"primal_residual", res.primal_residual},
        {"dual_residual", res.dual_residual},
        {"objective", res.objective},
        {"relative_error", rel_err},
        {"weighted_error", weighted_err},
        {"success", rel_err <= threshold},
        {"x_hat", complex_array(res.x_hat)},
        {"x_true", complex_array(truth)},
    };
    if (true_modes)
    {
        doc["true_modes"] = modes_json(*true_modes);
    }
    if (s.pencil)
    {
        try
        {
            doc["modes"] = modes_json(matrix_pencil(res.x_hat, r));
        }
        catch (const std::exception& e)
        {
            doc["pencil_error"] = e.what();
        }
    }

    const std::string path = s.out.value_or("recover_result.json");
    write_json(doc, path);

    out << "N=" << n << " M=" << m << " R=" << r << " seed=" << seed
        << " delta=" << cfg.delta << '\n'
        << "converged=" << (res.converged ? "yes" : "no")
        << " iterations=" << res.iterations << '\n'
        << "relative_error=" << std::setprecision(6) << rel_err
        << " weighted_error=" << weighted_err
        << " success=" << (rel_err <= threshold ? "yes" : "no") << '\n'
        << "wrote " << path << '\n';
    return res.converged ? exit_ok : exit_not_converged;
}

int run_phase(const Settings& s, std::ostream& out)
{
    PhaseGridSpec spec;
    spec.n         = single_index(s.n, s.full ? 64 : 16, "n");
    spec.trials    = s.trials.value_or(s.full ? 100 : 20);
    spec.threshold = s.threshold.value_or(default_success_threshold);
    spec.base_seed = s.seed.value_or(0);
    spec.family    = parse_family(s.family);
    spec.solver    = solver_config(s);

    const Index len = ambient_length(spec.n);
    if (s.r)
    {
        spec.r_values = parse_index_list(*s.r);
    }
    else
    {
        spec.r_values = s.full ? parse_index_list("1:30") : parse_index_list("1:4");
    }
    if (s.m)
    {
        spec.m_values = parse_index_list(*s.m);
    }
    else if (s.full)
    {
        spec.m_values = parse_index_list("1:" + std::to_string(len));
    }
    else
    {
        for (Index m = 4; m < len; m += 4)
        {
            spec.m_values.push_back(m);
        }
        spec.m_values.push_back(len);
    }
    if (s.full && spec.r_values.back() >= len)
    {
        spec.r_values.erase(
            std::remove_if(spec.r_values.begin(), spec.r_values.end(),
                           [&](Index r) { return r >= len; }),
            spec.r_values.end());
    }

    const PhaseGrid grid   = run_phase_transition(spec);
    const std::string path = s.out.value_or("phase_transition.csv");
    emit_csv(grid, path);
    out << "phase transition N=" << grid.n << ": " << grid.cells.size()
        << " cells x " << grid.trials << " trials, wrote " << path << '\n';
    return exit_ok;
}

int run_norms(const Settings& s, std::ostream& out)
{
    const std::vector<Index> ns =
        parse_index_list(s.n.value_or("16,64,256"));
    const NormScan scan =
        run_norm_scan(ns, s.trials.value_or(200), s.seed.value_or(0));
    const std::string path = s.out.value_or("norm_scan.csv");
    emit_csv(scan, path);
    out << std::setprecision(6);
    for (const auto& e : scan.estimates)
    {
        out << "N=" << e.n << " mean=" << e.mean << " stderr=" << e.std_error
            << '\n';
    }
    out << "wrote " << path << '\n';
    return exit_ok;
}

} // namespace

std::vector<Index> parse_index_list(const std::string& text)
{
    std::vector<Index> values;
    std::stringstream items(text);
    std::string item;
    auto to_index = [&](const std::string& part) -> Index {
        std::size_t used = 0;
        long long v      = 0;
        try
        {
            v = std::stoll(part, &used);
        }
        catch (const std::exception&)
        {
            throw ArgumentError("not an integer: '" + part + "'");
        }
        if (used != part.size())
        {
            throw ArgumentError("not an integer: '" + part + "'");
        }
        return static_cast<Index>(v);
    };
    while (std::getline(items, item, ','))
    {
        if (item.empty())
        {
            throw ArgumentError("empty entry in list '" + text + "'");
        }
        std::vector<std::string> parts;
        std::stringstream ps(item);
        std::string part;
        while (std::getline(ps, part, ':'))
        {
            parts.push_back(part);
        }
        if (parts.size() == 1)
        {
            values.push_back(to_index(parts[0]));
            continue;
        }
        if (parts.size() > 3)
        {
            throw ArgumentError("range must be start:stop[:step], got '" +
                                item + "'");
        }
        const Index start = to_index(parts[0]);
        const Index stop  = to_index(parts[1]);
        const Index step  = parts.size() == 3 ? to_index(parts[2]) : 1;
        if (step < 1 || stop < start)
        {
            throw ArgumentError("invalid range '" + item + "'");
        }
        for (Index v = start; v <= stop; v += step)
        {
            values.push_back(v);
        }
    }
    if (values.empty())
    {
        throw ArgumentError("empty list");
    }
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err)
{
    CLI::App app{"Recovery of exponential signals from Gaussian projections "
                 "by Hankel nuclear-norm minimization",
                 "hankel_recover"};
    app.require_subcommand(1);

    Flags f;
    auto add_common = [&f](CLI::App* cmd) {
        cmd->add_option("--n", f.n, "Hankel order N (signal length 2N-1)");
        cmd->add_option("--seed", f.seed, "Base random seed");
        cmd->add_option("--out", f.out, "Output path");
        cmd->add_option("--config", f.config, "JSON config mirroring the flags");
    };
    auto add_solver = [&f](CLI::App* cmd) {
        cmd->add_option("--r", f.r, "Model order R");
        cmd->add_option("--m", f.m, "Number of measurements M");
        cmd->add_option("--delta", f.delta, "Noise level ||eta||_2");
        cmd->add_option("--threshold", f.threshold,
                        "Relative-error success threshold");
        cmd->add_option("--rho", f.rho, "ADMM penalty");
        cmd->add_option("--max-iters", f.max_iters, "ADMM iteration cap");
        cmd->add_option("--tol", f.tol, "Primal and dual tolerance");
        cmd->add_option("--family", f.family, "sinusoid | damped");
    };

    auto* recover = app.add_subcommand("recover", "Single end-to-end recovery");
    add_common(recover);
    add_solver(recover);
    recover->add_option("--input", f.input, "Signal JSON ('x' or 'modes')");
    recover->add_flag("--pencil", f.pencil,
                      "Extract modes from the recovered signal");

    auto* phase = app.add_subcommand("phase-transition",
                                     "Success-rate grid over (R, M)");
    add_common(phase);
    add_solver(phase);
    phase->add_option("--trials", f.trials, "Trials per cell");
    phase->add_flag("--full", f.full,
                    "Full protocol: N=64, 100 trials, M=1..127");

    auto* norms = app.add_subcommand("norm-scan",
                                     "Monte-Carlo E||lift(g)||_2 over N");
    add_common(norms);
    norms->add_option("--trials", f.trials, "Trials per N");

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*recover)
        {
            return run_recover(merge(*recover, f), out);
        }
        if (*phase)
        {
            return run_phase(merge(*phase, f), out);
        }
        return run_norms(merge(*norms, f), out);
    }
    catch (const ArgumentError& e)
    {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace hankel::cli
