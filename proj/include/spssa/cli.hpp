#pragma once
//
// Command-line front end: `simulate`, `decompose`, `estimate-rank` and
// `benchmark`. Needs CLI11 and nlohmann/json on the include path.
//
// Precedence for every setting: command-line flag, then --config JSON file,
// then built-in default. The seed additionally falls back to $SPSSA_SEED.
//

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spssa/benchmark.hpp"
#include "spssa/error.hpp"
#include "spssa/fit.hpp"
#include "spssa/io.hpp"
#include "spssa/rank.hpp"
#include "spssa/simulation.hpp"
#include "spssa/spatial_core.hpp"

namespace spssa::cli {

inline constexpr const char* kSeedEnv = "SPSSA_SEED";

enum class BenchKind { performance, rank, norms };

struct RunConfig {
    std::string command;

    std::string input;
    std::string output;
    std::string truth;
    std::string long_output;

    std::optional<GridSpec> partition;
    std::optional<std::string> partition_column;
    std::optional<Rect> bounds;

    MethodSpec method;
    int q = 3;
    int r = 10;
    int s = 10;
    std::optional<std::uint64_t> seed;
    int trials = 100;

    // simulate
    int setting = 4;
    int side_length = 20;

    // benchmark
    BenchKind kind = BenchKind::performance;
    std::vector<int> settings{1, 2, 3, 4};
    std::vector<int> side_lengths{20, 30};
    std::vector<GridSpec> partitions{{2, 2}, {3, 3}, {4, 4}};
    std::vector<BenchMethod> methods{Method::sir, Method::save, Method::cor, Method::comb, std::nullopt};
    double radius = 3.4;
};

inline GridSpec parse_grid(const std::string& text) {
    const auto x = text.find('x');
    try {
        if (x == std::string::npos)
            throw std::invalid_argument("no x");
        std::size_t used = 0;
        const int rows = std::stoi(text.substr(0, x), &used);
        if (used != x)
            throw std::invalid_argument("rows");
        const std::string rest = text.substr(x + 1);
        const int cols = std::stoi(rest, &used);
        if (used != rest.size() || rows < 1 || cols < 1)
            throw std::invalid_argument("cols");
        return {rows, cols};
    } catch (const std::logic_error&) {
        throw ConfigError("partition", "malformed grid '" + text + "' (expected KxL with K, L >= 1)");
    }
}

inline std::uint64_t parse_seed(const std::string& text, const std::string& key) {
    try {
        std::size_t used = 0;
        if (text.empty() || text.front() == '-')
            throw std::invalid_argument("negative");
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size())
            throw std::invalid_argument("trailing");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError(key, "seed must be a non-negative integer, got '" + text + "'");
    }
}

inline BenchKind parse_bench_kind(const std::string& s) {
    if (s == "performance") return BenchKind::performance;
    if (s == "rank") return BenchKind::rank;
    if (s == "norms") return BenchKind::norms;
    throw ConfigError("kind", "unknown benchmark kind '" + s + "' (expected performance, rank or norms)");
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty())
            out.push_back(tok);
    return out;
}

inline int parse_int(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size())
            throw std::invalid_argument("trailing");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError(key, "'" + s + "' is not an integer");
    }
}

/// String form of a JSON scalar, or of each element of an array.
inline std::vector<std::string> json_strings(const nlohmann::json& v, const std::string& key) {
    std::vector<std::string> out;
    const auto one = [&](const nlohmann::json& e) {
        if (e.is_string())
            out.push_back(e.get<std::string>());
        else if (e.is_number_integer() || e.is_number_unsigned())
            out.push_back(std::to_string(e.get<long long>()));
        else if (e.is_number_float())
            out.push_back(io::format_double(e.get<double>()));
        else if (e.is_boolean())
            out.push_back(e.get<bool>() ? "true" : "false");
        else
            throw ConfigError(key, "unsupported value type");
    };
    if (v.is_array())
        for (const auto& e : v)
            one(e);
    else
        one(v);
    return out;
}

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "input",  "output",  "truth",   "long_output", "partition",   "partition_column", "bounds", "method",
        "kernel", "scaled",  "q",       "r",           "s",           "seed",             "trials", "setting",
        "side_length", "kind", "settings", "side_lengths", "partitions", "methods",        "radius"};
    return keys;
}

}  // namespace detail

/// Raw, unvalidated settings gathered from flags and the config file, keyed by
/// config-file name. Lists keep every occurrence.
using RawSettings = std::map<std::string, std::vector<std::string>>;

inline RawSettings load_config_file(const std::string& path) {
    auto in = io::open_in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", "'" + path + "' is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object())
        throw ConfigError("config", "'" + path + "' must hold a JSON object");
    RawSettings raw;
    for (const auto& [key, value] : j.items()) {
        if (!detail::known_keys().count(key))
            throw ConfigError(key, "unknown configuration key '" + key + "'");
        raw[key] = detail::json_strings(value, key);
    }
    return raw;
}

/// Builds and validates a RunConfig from merged settings.
inline RunConfig build_config(const std::string& command, const RawSettings& raw) {
    RunConfig cfg;
    cfg.command = command;
    const auto get = [&](const std::string& key) -> const std::vector<std::string>* {
        const auto it = raw.find(key);
        return it == raw.end() || it->second.empty() ? nullptr : &it->second;
    };
    const auto single = [&](const std::string& key) -> std::optional<std::string> {
        const auto* v = get(key);
        if (!v)
            return std::nullopt;
        if (v->size() != 1)
            throw ConfigError(key, "expects a single value");
        return v->front();
    };
    const auto list = [&](const std::string& key) {
        std::vector<std::string> out;
        if (const auto* v = get(key))
            for (const auto& e : *v)
                for (auto& t : detail::split_list(e))
                    out.push_back(std::move(t));
        return out;
    };

    if (auto v = single("input")) cfg.input = *v;
    if (auto v = single("output")) cfg.output = *v;
    if (auto v = single("truth")) cfg.truth = *v;
    if (auto v = single("long_output")) cfg.long_output = *v;

    if (auto v = single("partition")) cfg.partition = parse_grid(*v);
    if (auto v = single("partition_column")) cfg.partition_column = *v;
    if (cfg.partition && cfg.partition_column)
        throw ConfigError("partition", "give either a grid partition or a partition column, not both");
    if (get("bounds")) {
        const auto b = list("bounds");
        if (b.size() != 4)
            throw ConfigError("bounds", "expected xmin,xmax,ymin,ymax");
        std::array<double, 4> v{};
        for (std::size_t i = 0; i < 4; ++i)
            v[i] = io::parse_double(b[i], "bounds");
        cfg.bounds = Rect{v[0], v[1], v[2], v[3]};
    }

    if (auto v = single("method")) cfg.method.method = parse_method(*v);
    if (const auto* ks = get("kernel"))
        for (const auto& k : *ks)
            cfg.method.kernels.push_back(parse_kernel(k));
    if (auto v = single("scaled")) {
        if (*v != "true" && *v != "false")
            throw ConfigError("scaled", "expected true or false");
        cfg.method.scaled = *v == "true";
    }
    if (auto v = single("q")) cfg.q = detail::parse_int(*v, "q");
    if (auto v = single("r")) cfg.r = detail::parse_int(*v, "r");
    if (auto v = single("s")) cfg.s = detail::parse_int(*v, "s");
    if (auto v = single("trials")) cfg.trials = detail::parse_int(*v, "trials");
    if (auto v = single("setting")) cfg.setting = detail::parse_int(*v, "setting");
    if (auto v = single("side_length")) cfg.side_length = detail::parse_int(*v, "side_length");
    if (auto v = single("kind")) cfg.kind = parse_bench_kind(*v);
    if (auto v = single("radius")) {
        cfg.radius = io::parse_double(*v, "radius");
        KernelSpec::ball(cfg.radius);
    }
    if (get("settings")) {
        cfg.settings.clear();
        for (const auto& t : list("settings"))
            cfg.settings.push_back(detail::parse_int(t, "settings"));
    }
    if (get("side_lengths")) {
        cfg.side_lengths.clear();
        for (const auto& t : list("side_lengths"))
            cfg.side_lengths.push_back(detail::parse_int(t, "side_lengths"));
    }
    if (get("partitions")) {
        cfg.partitions.clear();
        for (const auto& t : list("partitions"))
            cfg.partitions.push_back(parse_grid(t));
    }
    if (get("methods")) {
        cfg.methods.clear();
        for (const auto& t : list("methods"))
            cfg.methods.push_back(parse_bench_method(t));
    }
    // each benchmark kind has its own defaults for keys left unset
    if (command == "benchmark" && cfg.kind == BenchKind::rank) {
        if (!get("side_length")) cfg.side_length = 60;
        if (!get("partitions")) cfg.partitions = {{4, 4}};
        if (!get("methods")) cfg.methods = {Method::sir, Method::save, Method::cor, Method::comb};
    } else if (command == "benchmark" && cfg.kind == BenchKind::norms) {
        if (!get("side_length")) cfg.side_length = 50;
        if (!get("radius")) cfg.radius = 2.2;
    }

    if (auto v = single("seed"))
        cfg.seed = parse_seed(*v, "seed");
    else if (const char* env = std::getenv(kSeedEnv); env && *env)
        cfg.seed = parse_seed(env, "seed");

    // per-command requirements
    const auto need = [&](bool ok, const std::string& key, const std::string& what) {
        if (!ok)
            throw ConfigError(key, command + " needs " + what);
    };
    if (command == "simulate") {
        need(!cfg.output.empty(), "output", "--output");
        need(cfg.seed.has_value(), "seed", "--seed or $" + std::string(kSeedEnv));
        SettingConfig{cfg.setting, cfg.side_length}.validate();
    } else if (command == "decompose" || command == "estimate-rank") {
        need(!cfg.input.empty(), "input", "--input");
        need(!cfg.output.empty(), "output", "--output");
        need(cfg.partition || cfg.partition_column, "partition", "--partition KxL or --partition-column NAME");
        cfg.method.validate();
        if (command == "decompose") {
            if (cfg.q < 1)
                throw ConfigError("q", "q must be >= 1");
        } else {
            need(cfg.seed.has_value(), "seed", "--seed or $" + std::string(kSeedEnv));
            if (cfg.r < 1)
                throw ConfigError("r", "r must be >= 1");
            if (cfg.s < 1)
                throw ConfigError("s", "s must be >= 1");
        }
    } else if (command == "benchmark") {
        need(!cfg.output.empty(), "output", "--output");
        need(cfg.seed.has_value(), "seed", "--seed or $" + std::string(kSeedEnv));
        if (cfg.trials < 1)
            throw ConfigError("trials", "trials must be >= 1");
        if (cfg.partitions.empty())
            throw ConfigError("partitions", "at least one partition is required");
        for (int st : cfg.settings)
            SettingConfig{st, 20}.validate();
        for (int side : cfg.side_lengths)
            SettingConfig{1, side}.validate();
        if (cfg.kind == BenchKind::rank) {
            SettingConfig{cfg.setting, cfg.side_length}.validate();
            for (const auto& m : cfg.methods)
                if (!m)
                    throw ConfigError("methods", "the rank benchmark has no baseline method");
        }
    } else {
        throw ConfigError("command", "unknown command '" + command + "'");
    }
    return cfg;
}

/// Thrown for --help; carries the text to print and exit status 0.
struct HelpRequested {
    std::string text;
};

/// Parses argv (argv[0] is the program name).
inline RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Spatial stationary subspace analysis"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    struct Flags {
        std::string config;
        RawSettings raw;
    };
    Flags flags;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config, "JSON file with settings; flags take precedence");
        sub->add_option("--seed", flags.raw["seed"], "random seed (default $SPSSA_SEED)");
        sub->add_option("--output", flags.raw["output"], "output file (prefix for decompose)");
    };
    const auto add_fit = [&](CLI::App* sub) {
        sub->add_option("--input", flags.raw["input"], "dataset CSV with columns x,y,<variables>");
        sub->add_option("--partition", flags.raw["partition"], "grid partition KxL");
        sub->add_option("--partition-column", flags.raw["partition_column"], "CSV column holding region labels");
        sub->add_option("--bounds", flags.raw["bounds"], "grid bounds xmin,xmax,ymin,ymax (default bounding box)");
        sub->add_option("--method", flags.raw["method"], "sir, save, cor or comb");
        sub->add_option("--kernel", flags.raw["kernel"], "kernel ball:R, ring:R1,R2 or gauss:R (repeatable)")
            ->take_all();
        sub->add_option("--scaled", flags.raw["scaled"], "scaled local covariance (true/false)");
    };

    auto* simulate = app.add_subcommand("simulate", "simulate one dataset of a benchmark setting");
    add_common(simulate);
    simulate->add_option("--setting", flags.raw["setting"], "setting 1..4");
    simulate->add_option("--side-length", flags.raw["side_length"], "domain side length; n = side^2");
    simulate->add_option("--truth", flags.raw["truth"], "ground-truth JSON (default <output>.truth.json)");

    auto* decompose = app.add_subcommand("decompose", "fit spSSA with a known q");
    add_common(decompose);
    add_fit(decompose);
    decompose->add_option("--q", flags.raw["q"], "nonstationary dimension");
    decompose->add_option("--truth", flags.raw["truth"], "ground-truth JSON; prints the subspace errors");

    auto* rank = app.add_subcommand("estimate-rank", "estimate q with the ladle augmentation estimator");
    add_common(rank);
    add_fit(rank);
    rank->add_option("--r", flags.raw["r"], "number of augmented noise channels");
    rank->add_option("--s", flags.raw["s"], "number of augmentation repetitions");

    auto* bench = app.add_subcommand("benchmark", "Monte Carlo benchmarks");
    add_common(bench);
    bench->add_option("--kind", flags.raw["kind"], "performance, rank or norms");
    bench->add_option("--trials", flags.raw["trials"], "trials per configuration");
    bench->add_option("--settings", flags.raw["settings"], "comma-separated settings (performance)");
    bench->add_option("--side-lengths", flags.raw["side_lengths"], "comma-separated side lengths (performance)");
    bench->add_option("--setting", flags.raw["setting"], "setting (rank)");
    bench->add_option("--side-length", flags.raw["side_length"], "side length (rank, norms)");
    bench->add_option("--partitions", flags.raw["partitions"], "comma-separated KxL grids");
    bench->add_option("--methods", flags.raw["methods"], "comma-separated methods; baseline = random guess");
    bench->add_option("--radius", flags.raw["radius"], "ball kernel radius");
    bench->add_option("--scaled", flags.raw["scaled"], "scaled local covariance (true/false)");
    bench->add_option("--r", flags.raw["r"], "augmented channels (rank)");
    bench->add_option("--s", flags.raw["s"], "augmentation repetitions (rank)");
    bench->add_option("--long-output", flags.raw["long_output"], "per-trial CSV (performance)");

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw ConfigError("arguments", e.what());
    }

    std::string command;
    for (auto* sub : app.get_subcommands())
        command = sub->get_name();

    RawSettings merged;
    if (!flags.config.empty())
        merged = load_config_file(flags.config);
    for (auto& [key, values] : flags.raw)
        if (!values.empty())
            merged[key] = values;
    // a flag source for the partition replaces the file's other source
    if (flags.raw.count("partition") && !flags.raw["partition"].empty() && !flags.raw["partition_column"].size())
        merged.erase("partition_column");
    if (flags.raw.count("partition_column") && !flags.raw["partition_column"].empty() &&
        !flags.raw["partition"].size())
        merged.erase("partition");

    auto cfg = build_config(command, merged);
    if (command == "simulate" && cfg.truth.empty()) {
        std::string base = cfg.output;
        if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
            base.resize(base.size() - 4);
        cfg.truth = base + ".truth.json";
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Commands

inline Partition partition_for(const RunConfig& cfg, const io::CsvDataset& ds) {
    if (cfg.partition_column)
        return build_label_partition(ds.labels);
    return build_grid_partition(ds.data.locations, cfg.partition->rows, cfg.partition->cols, cfg.bounds);
}

inline int run_simulate(const RunConfig& cfg, std::ostream& out) {
    const auto sim = generate_setting({cfg.setting, cfg.side_length}, Rng(*cfg.seed));
    io::write_dataset_csv(cfg.output, sim.data);
    io::write_truth_json(cfg.truth, {cfg.setting, cfg.side_length, *cfg.seed, kSimQ, sim.truth.mixing,
                                     sim.truth.w_s, sim.truth.w_n});
    out << "wrote " << cfg.output << " (n=" << sim.data.n() << ", p=" << sim.data.p() << ") and " << cfg.truth
        << '\n';
    return 0;
}

inline int run_decompose(const RunConfig& cfg, std::ostream& out) {
    const auto ds = io::read_dataset_csv(cfg.input, cfg.partition_column);
    const auto part = partition_for(cfg, ds);
    const auto fit = fit_spssa(ds.data, part, cfg.method, cfg.q);
    const Index p = fit.p();

    const auto comps = extract_components(fit, ds.data);
    Eigen::MatrixXd all(ds.data.n(), p);
    all << comps.nonstationary, comps.stationary;
    SpatialDataset comp_data{ds.data.locations, all};
    std::vector<std::string> names;
    for (Index j = 0; j < p; ++j)
        names.push_back((j < fit.q ? "n" : "s") + std::to_string(j < fit.q ? j + 1 : j - fit.q + 1));
    io::write_dataset_csv(cfg.output + "_components.csv", comp_data, names);

    std::vector<std::string> pe_header{"matrix"}, rows;
    for (Index j = 0; j < p; ++j)
        pe_header.push_back("c" + std::to_string(j + 1));
    for (const auto& sm : fit.scatter)
        rows.push_back(sm.label());
    Eigen::MatrixXd table(fit.pseudo_eigenvalues.rows() + 1, p);
    table << fit.pseudo_eigenvalues, fit.scores.transpose();
    rows.push_back("score");
    io::write_matrix_csv(cfg.output + "_pseudo_eigenvalues.csv", table, pe_header, rows);

    std::vector<std::string> w_header{"row"}, w_rows;
    for (const auto& v : ds.variables)
        w_header.push_back(v);
    for (const auto& n : names)
        w_rows.push_back(n);
    io::write_matrix_csv(cfg.output + "_unmixing.csv", fit.unmixing(), w_header, w_rows);

    out << "method " << to_string(cfg.method.method) << ", q = " << fit.q << ", " << part.size() << " subdomains"
        << (fit.converged ? "" : " (joint diagonalization did not converge)") << '\n';
    if (!cfg.truth.empty()) {
        const auto truth = io::read_truth_json(cfg.truth);
        if (truth.w_n.cols() != p || truth.w_n.rows() != fit.q)
            throw DomainError("truth sidecar has q = " + std::to_string(truth.w_n.rows()) + ", p = " +
                              std::to_string(truth.w_n.cols()) + "; the fit has q = " + std::to_string(fit.q));
        const double n_perf = subspace_distance(projector_of(truth.w_n), projector_of(fit.w_n));
        const double s_perf = subspace_distance(projector_of(truth.w_s), projector_of(fit.w_s));
        out << "n_perf " << io::format_double(n_perf) << '\n' << "s_perf " << io::format_double(s_perf) << '\n';
    }
    return 0;
}

inline int run_estimate_rank(const RunConfig& cfg, std::ostream& out) {
    const auto ds = io::read_dataset_csv(cfg.input, cfg.partition_column);
    const auto part = partition_for(cfg, ds);
    const auto curve = ladle_curves(ds.data, part, cfg.method, cfg.r, cfg.s, Rng(*cfg.seed));
    io::write_ladle_csv(cfg.output, curve);
    out << "q_hat " << curve.q_hat << '\n' << "k,g\n";
    for (Index k = 0; k < curve.g.size(); ++k)
        out << k << ',' << io::format_double(curve.g(k)) << '\n';
    return 0;
}

inline int run_benchmark(const RunConfig& cfg, std::ostream& out) {
    switch (cfg.kind) {
    case BenchKind::performance: {
        PerformanceConfig pc;
        pc.settings = cfg.settings;
        pc.side_lengths = cfg.side_lengths;
        pc.partitions = cfg.partitions;
        pc.methods = cfg.methods;
        pc.trials = cfg.trials;
        pc.kernel_radius = cfg.radius;
        pc.scaled = cfg.method.scaled;
        pc.seed = *cfg.seed;
        const auto res = run_performance_benchmark(pc);
        io::write_performance_summary_csv(cfg.output, res.summary);
        if (!cfg.long_output.empty())
            io::write_trials_csv(cfg.long_output, res.records);
        int failures = 0;
        for (const auto& s : res.summary)
            failures += s.failures;
        out << "wrote " << res.summary.size() << " summary rows to " << cfg.output << "; " << failures
            << " failed fits\n";
        return 0;
    }
    case BenchKind::rank: {
        RankConfig rc;
        rc.setting = cfg.setting;
        rc.side_length = cfg.side_length;
        rc.partition = cfg.partitions.front();
        rc.methods.clear();
        for (const auto& m : cfg.methods)
            rc.methods.push_back(*m);
        rc.r = cfg.r;
        rc.s = cfg.s;
        rc.trials = cfg.trials;
        rc.kernel_radius = cfg.radius;
        rc.scaled = cfg.method.scaled;
        rc.seed = *cfg.seed;
        const auto res = run_rank_benchmark(rc);
        io::write_rank_csv(cfg.output, res);
        for (Method m : rc.methods)
            out << to_string(m) << ": modal q_hat " << res.mode(m) << '\n';
        return 0;
    }
    case BenchKind::norms: {
        NormConfig nc;
        nc.trials = cfg.trials;
        nc.side_length = cfg.side_length;
        nc.kernel_radius = cfg.radius;
        nc.partitions = cfg.partitions;
        nc.seed = *cfg.seed;
        const auto rows = run_norm_table(nc);
        io::write_norm_csv(cfg.output, rows);
        out << "wrote " << rows.size() << " rows to " << cfg.output << '\n';
        return 0;
    }
    }
    return 1;
}

inline int dispatch(const RunConfig& cfg, std::ostream& out) {
    if (cfg.command == "simulate")
        return run_simulate(cfg, out);
    if (cfg.command == "decompose")
        return run_decompose(cfg, out);
    if (cfg.command == "estimate-rank")
        return run_estimate_rank(cfg, out);
    if (cfg.command == "benchmark")
        return run_benchmark(cfg, out);
    throw ConfigError("command", "unknown command '" + cfg.command + "'");
}

inline int exit_code(const Error& e) {
    if (e.kind() == "config")
        return 2;
    if (e.kind() == "io")
        return 3;
    return 4;
}

/// One-line JSON error record.
inline std::string error_record(const std::exception& e) {
    nlohmann::ordered_json j;
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        j["error"] = err->kind();
        if (const auto* c = dynamic_cast<const ConfigError*>(&e))
            j["key"] = c->key();
    } else {
        j["error"] = "internal";
    }
    j["message"] = e.what();
    return j.dump();
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(parse_config(args), out);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const Error& e) {
        err << error_record(e) << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        err << error_record(e) << '\n';
        return 1;
    }
}

}  // namespace spssa::cli
