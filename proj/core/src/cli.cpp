#include "lcgf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lcgf/field.hpp"
#include "lcgf/partition.hpp"
#include "lcgf/report_io.hpp"
#include "lcgf/stats.hpp"
#include "lcgf/variational.hpp"
#include "lcgf/wick.hpp"
#include "lcgf/zakharov.hpp"

namespace lcgf::cli {

namespace {

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw CLI::ValidationError("empty integer list");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("empty list");
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

GaussLaw law_from_config(const RunConfig& cfg) {
    if (cfg.law == "log_correlated") return GaussLaw::log_correlated(cfg.complex_valued);
    if (cfg.law == "smooth_alpha") return GaussLaw::smooth(cfg.alpha, cfg.complex_valued);
    if (cfg.law == "white_noise") return GaussLaw::white_noise(cfg.complex_valued);
    throw CLI::ValidationError("unknown law: " + cfg.law);
}

int resolved_workers(const RunConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? int(hc) : 1;
}

void emit(const RunConfig& cfg, const std::vector<ScanRow>& rows) {
    std::string content = cfg.format == "json" ? render_json(rows, cfg.echo()) : render_csv(rows, cfg.echo());
    if (cfg.output.empty()) {
        std::cout << content;
    } else {
        atomic_write_file(cfg.output, content);
    }
}

void emit(const RunConfig& cfg, const std::vector<EstimateReport>& reports) {
    if (cfg.format == "json") {
        std::string content = render_json(reports, cfg.echo());
        if (cfg.output.empty())
            std::cout << content;
        else
            atomic_write_file(cfg.output, content);
        return;
    }
    std::vector<ScanRow> rows;
    for (const auto& r : reports) {
        ScanRow row;
        row.M = 0;
        row.N = r.N;
        auto it = r.params.find("K");
        row.K = it != r.params.end() ? it->second : 0.0;
        it = r.params.find("L");
        row.L = it != r.params.end() ? it->second : 0.0;
        row.samples = r.samples;
        row.mean = r.mean;
        row.stderr_ = r.stderr_;
        row.ci_low = r.ci_low;
        row.ci_high = r.ci_high;
        row.tag = r.quantity + ":" + r.potential;
        rows.push_back(std::move(row));
    }
    emit(cfg, rows);
}

int cmd_sample(const RunConfig& cfg) {
    if (cfg.output.empty()) throw CLI::ValidationError("sample: --output is required");
    if (cfg.N_values.size() != 1) throw CLI::ValidationError("sample: exactly one N required");
    GaussLaw law = law_from_config(cfg);
    LatticePtr lat = make_lattice(cfg.d, cfg.N_values[0]);
    RngKey key = derive_key(cfg.seed, 0x73616D70ULL);
    std::vector<SpectralField> fields(std::size_t(cfg.samples));
    parallel_for(std::size_t(cfg.samples), resolved_workers(cfg),
                 [&](std::size_t s) { fields[s] = sample(law, lat, key, std::uint32_t(s)); });
    EnsembleHeader h;
    h.d = cfg.d;
    h.N = lat->spec().N;
    h.G = lat->spec().G;
    h.complex_valued = law.complex_valued;
    h.count = fields.size();
    std::ostringstream os(std::ios::binary);
    write_ensemble(os, h, fields);
    atomic_write_file(cfg.output, os.str());
    return 0;
}

int cmd_scan_partition(const RunConfig& cfg, PotentialKind kind) {
    std::vector<EstimateReport> reports;
    const int workers = resolved_workers(cfg);
    for (int N : cfg.N_values) {
        EstimateConfig ec;
        ec.law = law_from_config(cfg);
        ec.spec = LatticeSpec::make(cfg.d, N);
        ec.potential.kind = kind;
        ec.potential.coupling = cfg.sigma;
        ec.potential.k = cfg.k;
        ec.potential.A = cfg.A;
        double gamma = cfg.gamma;
        if (kind == PotentialKind::SmoothTamed) {
            if (ec.law.kind != LawKind::SmoothAlpha)
                throw CLI::ValidationError("scan-smooth: smooth_alpha law required");
            if (gamma == 0.0) gamma = (4.0 * cfg.alpha - cfg.d) / (2.0 * cfg.alpha - cfg.d);
        }
        ec.potential.gamma = gamma;
        if (cfg.L > 0.0) ec.truncation = cfg.L;
        if (cfg.K > 0.0) ec.cutoff = CutoffSpec{CutoffMode::Absolute, cfg.K};
        ec.samples = cfg.samples;
        ec.seed = cfg.seed;
        ec.workers = workers;
        reports.push_back(estimate_exp_potential(ec));
    }
    emit(cfg, reports);
    return 0;
}

int cmd_scan_divergence(const RunConfig& cfg) {
    DivergenceScanConfig sc;
    sc.d = cfg.d;
    sc.M_values = cfg.M_values;
    sc.K_values = cfg.K_values;
    sc.coupling = cfg.sigma;
    sc.samples = cfg.samples;
    sc.seed = cfg.seed;
    sc.workers = resolved_workers(cfg);
    sc.L_factor = cfg.L_factor;
    if (cfg.L > 0.0) sc.L_fixed = cfg.L;
    emit(cfg, divergence_scan(sc));
    return 0;
}

int cmd_zakharov(const RunConfig& cfg) {
    ZakScanConfig zc;
    zc.N_values = cfg.N_values;
    zc.K = cfg.K;
    zc.thresholds = cfg.thresholds;
    zc.samples = cfg.samples;
    zc.seed = cfg.seed;
    zc.workers = resolved_workers(cfg);
    if (cfg.L_factor > 0.0) zc.L_factor = cfg.L_factor;
    emit(cfg, zakharov_scan(zc));
    return 0;
}

int cmd_verify_lemmas(const RunConfig& cfg) {
    LemmaCheckConfig lc;
    lc.d = cfg.d;
    lc.seed = cfg.seed;
    lc.samples = cfg.samples;
    lc.workers = resolved_workers(cfg);
    std::vector<LemmaCheck> checks = run_lemma_checks(lc);
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass;
        std::printf("%-*s  %-14.8g  %-44s  %s\n", int(width), c.name.c_str(), c.observed,
                    c.criterion.c_str(), c.pass ? "pass" : "FAIL");
    }
    std::printf("%zu/%zu checks passed\n", std::size_t(std::count_if(checks.begin(), checks.end(),
                                                                     [](const LemmaCheck& c) { return c.pass; })),
                checks.size());
    return all ? 0 : 1;
}

}  // namespace

std::map<std::string, std::string> RunConfig::echo() const {
    std::map<std::string, std::string> m;
    m["command"] = command;
    m["d"] = std::to_string(d);
    m["N"] = join_ints(N_values);
    m["M"] = join_ints(M_values);
    m["K"] = format_double(K);
    m["K_list"] = join_doubles(K_values);
    m["L"] = format_double(L);
    m["L_factor"] = format_double(L_factor);
    m["A"] = format_double(A);
    m["gamma"] = format_double(gamma);
    m["alpha"] = format_double(alpha);
    m["sigma"] = format_double(sigma);
    m["k"] = std::to_string(k);
    m["law"] = law;
    m["complex"] = complex_valued ? "1" : "0";
    m["thresholds"] = join_doubles(thresholds);
    m["samples"] = std::to_string(samples);
    m["seed"] = std::to_string(seed);
    m["time_steps"] = std::to_string(time_steps);
    m["format"] = format;
    return m;
}

RunConfig RunConfig::from_echo(const std::map<std::string, std::string>& e) {
    RunConfig c;
    auto get = [&](const char* k) -> const std::string& {
        auto it = e.find(k);
        if (it == e.end()) throw std::invalid_argument(std::string("config echo missing key ") + k);
        return it->second;
    };
    c.command = get("command");
    c.d = std::stoi(get("d"));
    c.N_values = parse_int_list(get("N"));
    c.M_values = parse_int_list(get("M"));
    c.K = std::stod(get("K"));
    c.K_values = parse_double_list(get("K_list"));
    c.L = std::stod(get("L"));
    c.L_factor = std::stod(get("L_factor"));
    c.A = std::stod(get("A"));
    c.gamma = std::stod(get("gamma"));
    c.alpha = std::stod(get("alpha"));
    c.sigma = std::stod(get("sigma"));
    c.k = std::stoi(get("k"));
    c.law = get("law");
    c.complex_valued = get("complex") == "1";
    c.thresholds = parse_double_list(get("thresholds"));
    c.samples = std::stoll(get("samples"));
    c.seed = std::stoull(get("seed"));
    c.time_steps = std::stoi(get("time_steps"));
    c.format = get("format");
    auto out = e.find("output");
    c.output = out != e.end() ? out->second : "";
    return c;
}

int run(const std::vector<std::string>& args) {
    RunConfig cfg;
    cfg.N_values = {16, 32, 64, 128};
    cfg.M_values = {8, 16, 32, 64};

    CLI::App app{"Spectral Monte Carlo for log-correlated Gibbs measures"};
    app.require_subcommand(1);
    // Later occurrences win, so config-file defaults can sit in front of argv.
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string N_list = "16,32,64,128", M_list = "8,16,32,64", thresh_list = "10,20,30";
    std::string K_list = "1";
    std::string config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value defaults file");
        sub->add_option("--d", cfg.d, "torus dimension (1, 2 or 3)");
        sub->add_option("--seed", cfg.seed, "master seed")->envname("LCG_SEED");
        sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
        sub->add_option("--workers", cfg.workers, "worker threads (0 = hardware)");
        sub->add_option("--output,-o", cfg.output, "output path (default stdout)");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--J,--time-steps", cfg.time_steps, "path simulation steps");
    };

    CLI::App* s_sample = app.add_subcommand("sample", "write a field ensemble");
    add_common(s_sample);
    s_sample->add_option("--N", N_list, "frequency cutoff");
    s_sample->add_option("--law", cfg.law, "log_correlated | smooth_alpha | white_noise")
        ->check(CLI::IsMember({"log_correlated", "smooth_alpha", "white_noise"}));
    s_sample->add_flag("--complex", cfg.complex_valued, "complex-valued field");
    s_sample->add_option("--alpha", cfg.alpha, "smooth law regularity");

    CLI::App* s_verify = app.add_subcommand("verify-lemmas", "run the property suites");
    add_common(s_verify);

    CLI::App* s_part = app.add_subcommand("scan-partition", "exp-potential estimates over N");
    add_common(s_part);
    s_part->add_option("--N", N_list, "comma-separated cutoffs");
    s_part->add_option("--k", cfg.k, "interaction power (3 or 4)");
    s_part->add_option("--sigma", cfg.sigma, "coupling");
    s_part->add_option("--K", cfg.K, "Wick-mass cutoff (0 = none)");
    s_part->add_option("--L", cfg.L, "potential truncation (0 = none)");
    s_part->add_option("--law", cfg.law, "base law")
        ->check(CLI::IsMember({"log_correlated", "smooth_alpha", "white_noise"}));
    s_part->add_flag("--complex", cfg.complex_valued, "complex-valued field");
    s_part->add_option("--alpha", cfg.alpha, "smooth law regularity");

    CLI::App* s_div = app.add_subcommand("scan-divergence", "variational divergence scan over M");
    add_common(s_div);
    s_div->add_option("--M", M_list, "comma-separated scales (N = 2M)");
    s_div->add_option("--K", K_list, "Wick-mass cutoff(s), comma-separated");
    s_div->add_option("--sigma", cfg.sigma, "focusing coupling (> 0)");
    s_div->add_option("--L", cfg.L, "fixed truncation (0 = schedule)");
    s_div->add_option("--L-factor", cfg.L_factor, "truncation schedule multiplier");

    CLI::App* s_cubic = app.add_subcommand("scan-cubic", "tamed cubic boundedness scan over N");
    add_common(s_cubic);
    s_cubic->add_option("--N", N_list, "comma-separated cutoffs");
    s_cubic->add_option("--sigma", cfg.sigma, "coupling");
    s_cubic->add_option("--A", cfg.A, "taming strength (> 0)");

    CLI::App* s_smooth = app.add_subcommand("scan-smooth", "smooth-law tamed quartic scan over N");
    add_common(s_smooth);
    s_smooth->add_option("--N", N_list, "comma-separated cutoffs");
    s_smooth->add_option("--sigma", cfg.sigma, "coupling");
    s_smooth->add_option("--A", cfg.A, "taming strength (> 0)");
    s_smooth->add_option("--gamma", cfg.gamma, "taming exponent (0 = derive from alpha)");
    s_smooth->add_option("--alpha", cfg.alpha, "smooth law regularity");

    CLI::App* s_zak = app.add_subcommand("zakharov", "Zakharov Gibbs scans");
    add_common(s_zak);
    s_zak->add_option("--N", N_list, "comma-separated cutoffs");
    s_zak->add_option("--K", cfg.K, "Wick-mass cutoff");
    s_zak->add_option("--thresholds", thresh_list, "off-diagonal mass thresholds");
    s_zak->add_option("--L-factor", cfg.L_factor, "truncation schedule multiplier");

    // Two-phase parse: a config file supplies defaults, argv overrides.
    std::vector<std::string> cli_args = args;
    for (int phase = 0; phase < 2; ++phase) {
        std::vector<std::string> reversed(cli_args.rbegin(), cli_args.rend());
        try {
            app.clear();
            app.parse(reversed);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
        if (phase == 0 && !config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) {
                std::cerr << "config error: cannot read " << config_path << "\n";
                return 2;
            }
            std::vector<std::string> merged;
            merged.push_back(cli_args[0]);  // subcommand first
            std::string line;
            std::vector<std::string> file_args;
            while (std::getline(is, line)) {
                if (line.empty() || line[0] == '#') continue;
                auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                file_args.push_back("--" + line.substr(0, eq));
                file_args.push_back(line.substr(eq + 1));
            }
            merged.insert(merged.end(), file_args.begin(), file_args.end());
            merged.insert(merged.end(), cli_args.begin() + 1, cli_args.end());
            cli_args = std::move(merged);
            continue;  // reparse with file defaults in front
        }
        break;
    }

    try {
        cfg.N_values = parse_int_list(N_list);
        cfg.M_values = parse_int_list(M_list);
        cfg.thresholds = parse_double_list(thresh_list);
        cfg.K_values = parse_double_list(K_list);
        if (cfg.K_values.size() == 1) cfg.K = cfg.K_values[0];
        for (auto* sub : app.get_subcommands()) {
            cfg.command = sub->get_name();
            if (cfg.command == "sample") return cmd_sample(cfg);
            if (cfg.command == "verify-lemmas") return cmd_verify_lemmas(cfg);
            if (cfg.command == "scan-partition")
                return cmd_scan_partition(cfg, PotentialKind::WickPower);
            if (cfg.command == "scan-divergence") return cmd_scan_divergence(cfg);
            if (cfg.command == "scan-cubic") {
                if (!(cfg.A > 0.0)) throw CLI::ValidationError("scan-cubic: --A > 0 required");
                return cmd_scan_partition(cfg, PotentialKind::CubicTamed);
            }
            if (cfg.command == "scan-smooth") {
                if (!(cfg.A > 0.0)) throw CLI::ValidationError("scan-smooth: --A > 0 required");
                if (cfg.law == "log_correlated") cfg.law = "smooth_alpha";
                return cmd_scan_partition(cfg, PotentialKind::SmoothTamed);
            }
            if (cfg.command == "zakharov") {
                cfg.d = 2;
                return cmd_zakharov(cfg);
            }
        }
        std::cerr << "config error: no subcommand\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace lcgf::cli
