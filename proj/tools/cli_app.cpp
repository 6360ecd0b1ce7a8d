#include "cli_app.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <set>
#include <sstream>

#include "reltrace/billiard.hpp"
#include "reltrace/errors.hpp"
#include "reltrace/numeric.hpp"
#include "reltrace/spectra.hpp"
#include "reltrace/special_functions.hpp"
#include "reltrace/trace_engine.hpp"

namespace reltrace::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kIntegerKeys = {"kmax", "nmax"};
const std::set<std::string> kStringKeys = {"grid", "out"};

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ContractError("config: '" + key + "' expects a number, got '" + text + "'");
    }
}

int parse_int(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ContractError("config: '" + key + "' expects an integer, got '" + text + "'");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    std::string csv() const {
        std::string s;
        auto line = [&s](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) s += ',';
                s += cells[i];
            }
            s += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return s;
    }
};

struct RunResult {
    Table table;
    json results = json::object();
    std::vector<std::string> diagnostics;
    bool numerical_issue = false;
};

billiard::BoxGeometry geometry_of(const RunConfig& cfg) { return {cfg.a1, cfg.a2, cfg.a3, cfg.L}; }

std::vector<double> grid_of(const RunConfig& cfg) {
    const GridSpec g = GridSpec::parse(cfg.grid);
    return linspace(g.lo, g.hi, static_cast<std::size_t>(g.count));
}

RunResult billiard_exact(const RunConfig& cfg) {
    RunResult r;
    const auto levels = billiard::exact_levels(geometry_of(cfg), cfg.params, cfg.eps_max);
    r.table.header = {"n1", "n2", "n3", "degeneracy", "eps", "E"};
    long total = 0;
    for (const Level& lv : levels) {
        r.table.add({std::to_string(lv.n[0]), std::to_string(lv.n[1]), std::to_string(lv.n[2]),
                     std::to_string(lv.degeneracy), format_double(lv.eps), format_double(lv.E)});
        total += lv.degeneracy;
    }
    r.results["levels"] = levels.size();
    r.results["states"] = total;
    return r;
}

RunResult billiard_trace(const RunConfig& cfg) {
    RunResult r;
    const auto geom = geometry_of(cfg);
    const auto grid = grid_of(cfg);
    const DensityGrid osc = billiard::osc_density_closed(geom, cfg.params, grid, cfg.kmax, cfg.sigma);
    r.table.header = {"eps", "g_thomas_fermi", "g_osc", "g_trace"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double smooth = billiard::tf_volume_term(geom, cfg.params, grid[i]);
        r.table.add({format_double(grid[i]), format_double(smooth), format_double(osc.g[i]),
                     format_double(smooth + osc.g[i])});
    }
    r.diagnostics = osc.meta.diagnostics;
    return r;
}

RunResult billiard_exact_resummed(const RunConfig& cfg) {
    RunResult r;
    const auto grid = grid_of(cfg);
    const auto parts = billiard::exact_resummed_parts(geometry_of(cfg), cfg.params, grid, cfg.kmax, cfg.sigma);
    r.table.header = {"eps", "g_volume", "g_faces", "g_edges", "g_total"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.table.add({format_double(grid[i]), format_double(parts.volume[i]), format_double(parts.faces[i]),
                     format_double(parts.edges[i]), format_double(parts.total.g[i])});
    }
    r.results["face_weight"] = billiard::kFaceWeight;
    r.results["edge_weight"] = billiard::kEdgeWeight;
    return r;
}

RunResult billiard_compare(const RunConfig& cfg) {
    if (!(cfg.sigma > 0.0)) throw ContractError("billiard compare needs sigma > 0");
    RunResult r;
    const auto geom = geometry_of(cfg);
    const auto grid = grid_of(cfg);
    const auto levels = billiard::exact_levels(geom, cfg.params, grid.back() + 40.0 * cfg.sigma);
    const DensityGrid exact = broadened_density(levels, grid, cfg.sigma);
    const DensityGrid semi = billiard::exact_resummed_density(geom, cfg.params, grid, cfg.kmax, cfg.sigma);
    const Comparison cmp = compare(exact, semi, grid.front(), grid.back());
    r.table.header = {"eps", "g_exact_broadened", "g_semiclassical"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.table.add({format_double(grid[i]), format_double(exact.g[i]), format_double(semi.g[i])});
    }
    r.results["rel_L2"] = cmp.rel_L2;
    r.results["max_abs"] = cmp.max_abs;
    r.results["levels_used"] = levels.size();
    return r;
}

RunResult coulomb_spectrum(const RunConfig& cfg) {
    RunResult r;
    const coulomb::CoulombParams cp{cfg.alpha, cfg.params};
    const auto levels = coulomb::coulomb_spectrum(cfg.nmax, cp);
    r.table.header = {"n", "l", "E_over_mc2"};
    const double mc2 = cfg.params.rest_energy();
    for (const auto& lv : levels) {
        r.table.add({std::to_string(lv.n), std::to_string(lv.l), format_double(lv.E / mc2)});
    }
    r.results["levels"] = levels.size();
    return r;
}

RunResult engine_billiard_trace(const RunConfig& cfg) {
    RunResult r;
    const auto geom = geometry_of(cfg);
    const auto grid = grid_of(cfg);
    const auto model = billiard::billiard_model(geom, cfg.params);
    const DensityGrid engine = oscillating_density(*model, grid, cfg.kmax, cfg.params, cfg.sigma);

    // Closed form over the same positive-orthant orbits: 2^3 sign copies per k.
    DensityGrid closed = engine;
    closed.meta.system = "billiard-closed-positive-orthant";
    parallel_for(grid.size(), [&](std::size_t i) {
        CompensatedSum acc;
        const double tau_per_R = std::sqrt(2.0 * cfg.params.m / grid[i]);
        for (int k1 = 1; k1 <= cfg.kmax; ++k1) {
            for (int k2 = 1; k2 <= cfg.kmax; ++k2) {
                for (int k3 = 1; k3 <= cfg.kmax; ++k3) {
                    const std::array<int, 3> k{k1, k2, k3};
                    const double R = std::hypot(k1 * cfg.a1, k2 * cfg.a2, k3 * cfg.a3);
                    const double x = tau_per_R * R * cfg.sigma / cfg.params.hbar;
                    acc.add(8.0 * billiard::volume_summand(k, grid[i], geom, cfg.params) * std::exp(-0.5 * x * x));
                }
            }
        }
        closed.g[i] = acc.value();
    });

    r.table.header = {"eps", "g_osc_engine", "g_osc_closed"};
    double max_dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.table.add({format_double(grid[i]), format_double(engine.g[i]), format_double(closed.g[i])});
        max_dev = std::max(max_dev, std::fabs(engine.g[i] - closed.g[i]));
    }
    r.results["max_abs"] = max_dev;
    r.results["orbits"] = engine.meta.parameters.at("orbits");
    r.results["skipped_orbits"] = engine.meta.diagnostics.size();
    r.diagnostics = engine.meta.diagnostics;
    r.numerical_issue = !engine.meta.diagnostics.empty();
    return r;
}

json config_json(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& [key, value] : cfg.to_map()) {
        if (kStringKeys.count(key)) {
            j[key] = value;
        } else if (kIntegerKeys.count(key)) {
            j[key] = std::stol(value);
        } else {
            j[key] = std::stod(value);
        }
    }
    return j;
}

std::string default_output(const std::string& command) {
    std::string name = command;
    for (char& ch : name) {
        if (ch == ' ') ch = '_';
    }
    return name + ".csv";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ContractError("cannot open '" + path.string() + "' for writing");
    f << content;
    if (!f) throw ContractError("failed writing '" + path.string() + "'");
}

// Pulls "--config <file>" / "--config=<file>" out of the argument list.
std::string extract_config(std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    return path;
}

bool has_subcommand(const std::vector<std::string>& args) {
    for (const auto& a : args) {
        if (a == "billiard" || a == "coulomb" || a == "engine") return true;
    }
    return false;
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
    if (second == std::string::npos) throw ContractError("grid must look like min:max:count, got '" + text + "'");
    GridSpec g;
    g.lo = parse_double("grid", text.substr(0, first));
    g.hi = parse_double("grid", text.substr(first + 1, second - first - 1));
    g.count = parse_int("grid", text.substr(second + 1));
    if (!(g.lo < g.hi)) throw ContractError("grid: min must be below max");
    if (g.count < 2) throw ContractError("grid: need at least two points");
    return g;
}

std::string GridSpec::to_string() const { return format_double(lo) + ":" + format_double(hi) + ":" + std::to_string(count); }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "a1") a1 = parse_double(key, value);
    else if (key == "a2") a2 = parse_double(key, value);
    else if (key == "a3") a3 = parse_double(key, value);
    else if (key == "L") L = parse_double(key, value);
    else if (key == "m") params.m = parse_double(key, value);
    else if (key == "c") params.c = parse_double(key, value);
    else if (key == "hbar") params.hbar = parse_double(key, value);
    else if (key == "eps-max") eps_max = parse_double(key, value);
    else if (key == "grid") grid = value;
    else if (key == "kmax") kmax = parse_int(key, value);
    else if (key == "sigma") sigma = parse_double(key, value);
    else if (key == "alpha") alpha = parse_double(key, value);
    else if (key == "nmax") nmax = parse_int(key, value);
    else if (key == "out") out = value;
    else throw ContractError("config: unknown key '" + key + "'");
}

std::map<std::string, std::string> RunConfig::to_map() const {
    return {{"a1", format_double(a1)},
            {"a2", format_double(a2)},
            {"a3", format_double(a3)},
            {"L", format_double(L)},
            {"m", format_double(params.m)},
            {"c", format_double(params.c)},
            {"hbar", format_double(params.hbar)},
            {"eps-max", format_double(eps_max)},
            {"grid", grid},
            {"kmax", std::to_string(kmax)},
            {"sigma", format_double(sigma)},
            {"alpha", format_double(alpha)},
            {"nmax", std::to_string(nmax)},
            {"out", out}};
}

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const DomainError& e) {
        throw ContractError(e.what());
    }
    if (!(a1 > 0.0) || !(a2 > 0.0) || !(a3 > 0.0)) throw ContractError("box sides must be positive");
    if (L < 0.0) throw ContractError("reference length must be non-negative");
    if (!(eps_max > 0.0)) throw ContractError("eps-max must be positive");
    GridSpec::parse(grid);
    if (kmax < 0) throw ContractError("kmax must be non-negative");
    if (sigma < 0.0) throw ContractError("sigma must be non-negative");
    if (!(alpha > 0.0) || !(alpha < 0.5)) throw ContractError("alpha must lie in (0, 1/2)");
    if (nmax < 1) throw ContractError("nmax must be at least 1");
}

std::string load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ContractError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ContractError(std::string("config: invalid JSON: ") + e.what());
        }
        const json& body = j.contains("config") ? j.at("config") : j;
        for (const auto& [key, value] : body.items()) {
            if (value.is_string()) cfg.set(key, value.get<std::string>());
            else if (value.is_number_integer()) cfg.set(key, std::to_string(value.get<long>()));
            else if (value.is_number()) cfg.set(key, format_double(value.get<double>()));
            else throw ContractError("config: unsupported value for '" + key + "'");
        }
        return j.value("command", std::string{});
    }

    std::string command;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ContractError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "command") {
            command = value;
        } else {
            cfg.set(key, value);
        }
    }
    return command;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());

    try {
        const std::string config_path = extract_config(args);
        if (!config_path.empty()) {
            const std::string stored = load_config_file(config_path, cfg);
            if (!has_subcommand(args) && !stored.empty()) {
                std::istringstream words(stored);
                std::vector<std::string> prefix;
                for (std::string w; words >> w;) prefix.push_back(w);
                args.insert(args.begin(), prefix.begin(), prefix.end());
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidArguments;
    }

    CLI::App app{"Relativistic semiclassical densities of states"};
    app.name("reltrace");
    app.set_version_flag("--version", std::string(RELTRACE_VERSION));
    app.require_subcommand(1);

    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--m", cfg.params.m, "mass");
        sub->add_option("--c", cfg.params.c, "speed of light");
        sub->add_option("--hbar", cfg.params.hbar, "quantum of action");
        sub->add_option("--out", cfg.out, "CSV output path (JSON sidecar next to it)");
    };
    auto add_box = [&](CLI::App* sub) {
        sub->add_option("--a1", cfg.a1, "box side 1");
        sub->add_option("--a2", cfg.a2, "box side 2");
        sub->add_option("--a3", cfg.a3, "box side 3");
        sub->add_option("--L", cfg.L, "reference length (default: geometric mean)");
        add_params(sub);
    };
    auto add_density = [&](CLI::App* sub) {
        add_box(sub);
        sub->add_option("--grid", cfg.grid, "pseudoenergy grid min:max:count");
        sub->add_option("--kmax", cfg.kmax, "orbit enumeration bound");
        sub->add_option("--sigma", cfg.sigma, "Gaussian broadening width");
    };

    using Handler = RunResult (*)(const RunConfig&);
    Handler handler = nullptr;
    std::string command;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, Handler h) {
        CLI::App* sub = parent->add_subcommand(name, desc);
        sub->callback([&, h, parent, name] {
            handler = h;
            command = parent->get_name() + " " + name;
        });
        return sub;
    };

    CLI::App* bil = app.add_subcommand("billiard", "3D rectangular box")->require_subcommand(1);
    CLI::App* exact = leaf(bil, "exact", "exact level list", billiard_exact);
    add_box(exact);
    exact->add_option("--eps-max", cfg.eps_max, "largest pseudoenergy");
    add_density(leaf(bil, "trace", "Thomas-Fermi + periodic-orbit sum", billiard_trace));
    add_density(leaf(bil, "exact-resummed", "resummed exact level density", billiard_exact_resummed));
    add_density(leaf(bil, "compare", "broadened exact levels vs. resummed density", billiard_compare));

    CLI::App* cou = app.add_subcommand("coulomb", "relativistic Coulomb levels")->require_subcommand(1);
    CLI::App* spec = leaf(cou, "spectrum", "closed-form bound energies", coulomb_spectrum);
    add_params(spec);
    spec->add_option("--alpha", cfg.alpha, "coupling constant");
    spec->add_option("--nmax", cfg.nmax, "largest principal quantum number");

    CLI::App* eng = app.add_subcommand("engine", "generic trace-formula engine")->require_subcommand(1);
    add_density(leaf(eng, "billiard-trace", "engine run on the billiard model with closed-form cross-check",
                     engine_billiard_trace));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << RELTRACE_VERSION << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidArguments;
    }

    cfg.command = command;
    if (cfg.out.empty()) cfg.out = default_output(command);

    RunResult result;
    try {
        cfg.validate();
        result = handler(cfg);
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const DegenerateTorusError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidArguments;
    }

    const std::filesystem::path csv_path(cfg.out);
    std::filesystem::path json_path = csv_path;
    json_path.replace_extension(".json");

    json meta;
    meta["library"] = {{"name", "reltrace"}, {"version", RELTRACE_VERSION}};
    meta["command"] = cfg.command;
    meta["config"] = config_json(cfg);
    meta["columns"] = result.table.header;
    meta["rows"] = result.table.rows.size();
    meta["results"] = result.results;
    meta["diagnostics"] = result.diagnostics;

    try {
        write_file(csv_path, result.table.csv());
        write_file(json_path, meta.dump(2) + "\n");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidArguments;
    }

    out << cfg.command << ": " << result.table.rows.size() << " rows -> " << csv_path.string();
    if (result.results.contains("rel_L2")) out << " (rel_L2 = " << result.results["rel_L2"].get<double>() << ")";
    out << '\n';

    if (result.numerical_issue) {
        for (const auto& d : result.diagnostics) err << "diagnostic: " << d << '\n';
        return kNumericalFailure;
    }
    return kOk;
}

}  // namespace reltrace::cli
