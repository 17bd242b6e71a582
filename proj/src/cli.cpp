#include "wmbo/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "wmbo/error.hpp"
#include "wmbo/flow.hpp"
#include "wmbo/format.hpp"
#include "wmbo/io.hpp"
#include "wmbo/kernel.hpp"
#include "wmbo/validation.hpp"

namespace wmbo {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Config = std::map<std::string, std::string>;

struct Command {
    std::string name;
    std::string help;
    std::vector<std::pair<std::string, std::string>> options;  // key, default
};

const std::vector<Command>& commands()
{
    const std::string a = fmt(default_scale());
    static const std::vector<Command> list = {
        {"evolve", "run the thresholding iteration from a shape",
         {{"shape", "circle:0.25"}, {"L", "1"}, {"n", "256"}, {"h", "1e-5"}, {"a", a}, {"lambda", "0"},
          {"level", "0.5"}, {"steps", "10"}, {"snapshot-every", "0"}}},
        {"converge-circle", "first-order convergence study on the self-similar circle",
         {{"L", "1"}, {"n", "4096"}, {"r0", "0.15"}, {"t-final", "6.4e-5"},
          {"h", "1.6e-5,8e-6,4e-6,2e-6"}, {"emit-svg", "false"}}},
        {"kernel-table", "tabulate phi_N and Psi", {{"dim", "1"}, {"rmax", "10"}, {"step", "0.05"}}},
        {"kernel-verify", "check kernel constants and identities", {}},
        {"moments", "closed-form moments against the FFT oracle", {{"oracle-L", "128"}, {"oracle-n", "1024"}}},
        {"expansion", "fit the t^(1/4) interface coefficient on a circle",
         {{"r0", "0.2"}, {"L", "1"}, {"n", "2048"}, {"lambda", "0"}, {"t", ""}}},
        {"velocity", "one-step normal velocity against -gradE",
         {{"shape", "circle:0.15"}, {"L", "1"}, {"n", "2048"}, {"h", ""}, {"a", a}, {"lambda", "0"}}},
        {"shape-preview", "rasterize a shape and draw its interface",
         {{"shape", "cassini:0.6825,0.678"}, {"L", "5"}, {"n", "1024"}}},
    };
    return list;
}

Config read_config_file(const fs::path& path)
{
    const std::string text = read_text(path);
    Config cfg;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw UsageError("bad JSON config " + path.string() + ": " + e.what());
        }
        const json& src = j.contains("config") ? j["config"] : j;
        for (auto& [k, v] : src.items()) cfg[k] = v.is_string() ? v.get<std::string>() : v.dump();
        return cfg;
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
        cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

struct Ctx {
    std::string command;
    Config cfg;
    fs::path out;
    json manifest;

    double num(const std::string& k) const { return parse_double(cfg.at(k)); }
    int integer(const std::string& k) const
    {
        const double v = num(k);
        if (v != std::floor(v)) throw UsageError("--" + k + " must be an integer");
        return static_cast<int>(v);
    }
    std::vector<double> list(const std::string& k) const
    {
        std::vector<double> v;
        if (cfg.at(k).empty()) return v;
        for (auto& s : split(cfg.at(k), ',')) v.push_back(parse_double(s));
        return v;
    }
    GridSpec grid() const
    {
        GridSpec g{num("L"), integer("n")};
        validate(g);
        return g;
    }
    void output(const std::string& name) { manifest["outputs"].push_back(name); }
    fs::path file(const std::string& name)
    {
        output(name);
        return out / name;
    }
};

json to_json(const GridSpec& g) { return {{"L", g.side_length}, {"n", g.n}}; }
json to_json(const ThresholdParams& p)
{
    return {{"a", p.a}, {"h", p.h}, {"lambda", p.lambda}, {"level", p.level}};
}

ThresholdParams params_from(const Ctx& c)
{
    ThresholdParams p;
    p.a = c.num("a");
    if (c.cfg.count("h") && !c.cfg.at("h").empty()) p.h = c.num("h");
    p.lambda = c.num("lambda");
    if (c.cfg.count("level")) p.level = c.num("level");
    return p;
}

int cmd_evolve(Ctx& c)
{
    const auto grid = c.grid();
    const auto shape = parse_shape(c.cfg.at("shape"));
    FlowConfig fc;
    fc.params = params_from(c);
    fc.steps = c.integer("steps");
    fc.snapshot_every = c.integer("snapshot-every");
    const auto raster = rasterize(shape, grid);
    for (auto& w : raster.warnings) std::cerr << "warning: " << w << "\n";
    const auto tr = evolve(raster.field, fc);
    write_trajectory_csv(c.file("trajectory.csv"), tr);
    for (auto& s : tr.snapshots) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%05d", s.k);
        write_pgm(c.file(std::string(name) + ".pgm"), s.field);
        write_svg_overlay(c.file(std::string(name) + ".svg"), s.field, s.contours);
    }
    json statuses = json::array();
    for (auto& r : tr.records) statuses.push_back(to_string(r.status));
    c.manifest["grid"] = to_json(grid);
    c.manifest["params"] = to_json(fc.params);
    c.manifest["steps"] = static_cast<int>(tr.records.size()) - 1;
    c.manifest["statuses"] = statuses;
    c.manifest["stop_reason"] = tr.stop_reason;
    c.manifest["warnings"] = raster.warnings;
    c.manifest["log"] = tr.log;
    for (auto& l : tr.log) std::cerr << l << "\n";
    std::cout << "evolve: " << tr.records.size() - 1 << " steps, final area " << fmt(tr.records.back().area)
              << (tr.stop_reason.empty() ? "" : ", stopped: " + tr.stop_reason) << "\n";
    return 0;
}

int cmd_converge(Ctx& c)
{
    const auto grid = c.grid();
    const auto hs = c.list("h");
    const auto rep = circle_convergence_study(c.num("r0"), grid, hs, c.num("t-final"), omp_get_max_threads());
    const bool monotone = monotone_with_one_inversion(rep.errors, 0.10);
    const bool pass = rep.fitted_slope >= 0.7 && rep.fitted_slope <= 1.3 && monotone;
    json j = {{"r0", rep.r0},
              {"t_final", rep.t_final},
              {"grid", to_json(grid)},
              {"h_values", rep.h_values},
              {"errors", rep.errors},
              {"valid", rep.valid},
              {"fitted_slope", rep.fitted_slope},
              {"r_squared", rep.r_squared},
              {"monotone", monotone},
              {"assumption", rep.assumption},
              {"pass", pass}};
    write_text(c.file("convergence.json"), j.dump(2) + "\n");
    std::ostringstream csv;
    csv << "h,error,valid\r\n";
    for (std::size_t i = 0; i < hs.size(); ++i)
        csv << fmt(hs[i]) << "," << fmt(rep.errors[i]) << "," << rep.valid[i] << "\r\n";
    write_text(c.file("convergence.csv"), csv.str());
    if (c.cfg.at("emit-svg") == "true")
        write_loglog_svg(c.file("error_vs_h.svg"), rep.h_values, rep.errors, "h", "area error");
    c.manifest["pass"] = pass;
    std::cout << "fitted_slope " << fmt(rep.fitted_slope) << " r2 " << fmt(rep.r_squared) << "\n";
    return pass ? 0 : 1;
}

int cmd_kernel_table(Ctx& c)
{
    const int dim = c.integer("dim");
    const double rmax = c.num("rmax"), dr = c.num("step");
    if (!(dr > 0) || rmax < 0) throw UsageError("need step > 0 and rmax >= 0");
    std::ostringstream csv;
    csv << "r,phi,psi\r\n";
    const long count = std::lround(std::floor(rmax / dr + 1e-9));
    for (long i = 0; i <= count; ++i) {
        const double r = i * dr;
        csv << fmt(r) << "," << fmt(phi(dim, r)) << "," << fmt(psi(r)) << "\r\n";
    }
    write_text(c.file("kernel_table.csv"), csv.str());
    std::cout << csv.str();
    return 0;
}

int cmd_kernel_verify(Ctx& c)
{
    const auto checks = verify_kernel();
    json arr = json::array();
    bool all = true;
    for (auto& k : checks) {
        arr.push_back({{"name", k.name}, {"pass", k.pass}, {"value", k.value}, {"limit", k.limit},
                       {"detail", k.detail}});
        all = all && k.pass;
    }
    json j = {{"checks", arr}, {"pass", all}};
    write_text(c.file("kernel_verify.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    c.manifest["pass"] = all;
    return all ? 0 : 1;
}

int cmd_moments(Ctx& c)
{
    const GridSpec g{c.num("oracle-L"), c.integer("oracle-n")};
    struct Row {
        int dim;
        std::vector<int> beta;
        int ell, m;
    };
    std::vector<Row> rows = {{2, {}, 0, 0},  {2, {2}, 0, 0}, {2, {4}, 0, 0}, {2, {6}, 1, 0},
                             {2, {2}, 0, 1}, {3, {}, 0, 0},  {3, {2}, 0, 0}, {3, {0, 4}, 0, 0},
                             {3, {2, 2}, 0, 0}, {3, {6}, 1, 0}, {3, {4, 2}, 1, 0}, {3, {2}, 0, 1},
                             {2, {3}, 0, 0}, {3, {1, 2}, 0, 0}, {3, {3, 2}, 1, 0}};
    json arr = json::array();
    bool all = true;
    for (auto& r : rows) {
        MomentPattern p{r.beta, r.ell, r.m, r.dim};
        const double oracle = moment_oracle(p, g);
        const double closed = moment_closed_form(p);
        const double err = closed != 0.0 ? std::abs(oracle / closed - 1) : std::abs(oracle);
        const bool ok = closed != 0.0 ? err < 1e-5 : err < 1e-7;
        all = all && ok;
        arr.push_back({{"dim", r.dim}, {"beta", r.beta}, {"ell", r.ell}, {"m", r.m}, {"closed_form", closed},
                       {"oracle", oracle}, {"error", err}, {"pass", ok}});
    }
    json j = {{"moments", arr}, {"pass", all}};
    write_text(c.file("moments.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    c.manifest["pass"] = all;
    return all ? 0 : 1;
}

std::vector<double> default_probe_times(double r0, const GridSpec& g)
{
    std::vector<double> t;
    const double q0 = 8 * g.cell(), q1 = 0.07 * r0;
    for (int i = 0; i < 8; ++i) t.push_back(std::pow(q0 * std::pow(q1 / q0, i / 7.0), 4));
    return t;
}

json to_json(const ExpansionFit& f)
{
    return {{"combination", to_string(f.combination)}, {"t_values", f.t_values},
            {"u_minus_half", f.u_minus_half},          {"fitted_c14", f.fitted_c14},
            {"fitted_c34", f.fitted_c34},              {"residual", f.residual},
            {"expected_c14", f.expected_c14},          {"probe_radius", f.probe_radius}};
}

int cmd_expansion(Ctx& c)
{
    const auto grid = c.grid();
    const double r0 = c.num("r0");
    auto ts = c.list("t");
    if (ts.empty()) ts = default_probe_times(r0, grid);
    const auto single = expansion_probe(r0, grid, ts, c.num("lambda"), Combination::single_scale);
    const auto three = expansion_probe(r0, grid, ts, c.num("lambda"), Combination::three_scale);
    const double ratio = std::abs(three.fitted_c14 / single.fitted_c14);
    const double match = std::abs(single.fitted_c14 / single.expected_c14 - 1);
    const bool pass = ratio < 0.05 && match < 0.10;
    json j = {{"single_scale", to_json(single)}, {"three_scale", to_json(three)},
              {"cancellation_ratio", ratio},     {"single_scale_relative_error", match},
              {"pass", pass}};
    write_text(c.file("expansion.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    c.manifest["pass"] = pass;
    return pass ? 0 : 1;
}

int cmd_velocity(Ctx& c)
{
    const auto grid = c.grid();
    const auto shape = parse_shape(c.cfg.at("shape"));
    auto p = params_from(c);
    if (c.cfg.at("h").empty()) {
        auto* circ = std::get_if<Circle>(&shape);
        if (!circ) throw UsageError("--h is required for non-circle shapes");
        p.h = circle_step_for_cells(circ->radius, grid, 3.0);
        c.cfg["h"] = fmt(p.h);
    }
    const auto rep = velocity_gradient_residual(shape, grid, p);
    const bool pass = std::abs(rep.mean_velocity - rep.mean_expected) <= 0.2 * std::abs(rep.mean_expected);
    json j = {{"h", rep.h},
              {"mean_velocity", rep.mean_velocity},
              {"mean_expected", rep.mean_expected},
              {"sup_residual", rep.sup_residual},
              {"sup_gradient", rep.sup_gradient},
              {"vertices", rep.vertices},
              {"missing", rep.missing},
              {"pass", pass}};
    write_text(c.file("velocity.json"), j.dump(2) + "\n");
    auto ref = boundary_curve(shape, grid, 8192);
    ref = resample_uniform(ref, resample_count(ref, grid));
    const auto geom = curve_geometry(ref);
    write_curve_csv(c.file("reference_curve.csv"), geom, l2_gradient(geom, p.lambda));
    c.manifest["params"] = to_json(p);
    c.manifest["pass"] = pass;
    std::cout << j.dump(2) << "\n";
    return pass ? 0 : 1;
}

int cmd_shape_preview(Ctx& c)
{
    const auto grid = c.grid();
    const auto shape = parse_shape(c.cfg.at("shape"));
    const auto raster = rasterize(shape, grid);
    for (auto& w : raster.warnings) std::cerr << "warning: " << w << "\n";
    const auto curves = interface_contours(raster.field);
    write_pgm(c.file("shape.pgm"), raster.field);
    write_svg_overlay(c.file("shape.svg"), raster.field, curves);
    c.manifest["grid"] = to_json(grid);
    c.manifest["warnings"] = raster.warnings;
    c.manifest["area"] = raster.field.area();
    c.manifest["components"] = component_count(raster.field);
    std::cout << "area " << fmt(raster.field.area()) << ", " << curves.size() << " contour(s)\n";
    return 0;
}

int dispatch(Ctx& c)
{
    if (c.command == "evolve") return cmd_evolve(c);
    if (c.command == "converge-circle") return cmd_converge(c);
    if (c.command == "kernel-table") return cmd_kernel_table(c);
    if (c.command == "kernel-verify") return cmd_kernel_verify(c);
    if (c.command == "moments") return cmd_moments(c);
    if (c.command == "expansion") return cmd_expansion(c);
    if (c.command == "velocity") return cmd_velocity(c);
    if (c.command == "shape-preview") return cmd_shape_preview(c);
    throw UsageError("unknown command " + c.command);
}

}  // namespace

int run_cli(int argc, char** argv)
{
    CLI::App app{"Threshold dynamics for Willmore-type flows of planar regions"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::string config_path, out_dir;
    int jobs = 0;
    std::map<std::string, CLI::App*> subs;
    for (auto& cmd : commands()) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        subs[cmd.name] = sub;
        for (auto& [key, def] : cmd.options) {
            if (key == "emit-svg")
                sub->add_flag_function("--emit-svg", [&raw, name = cmd.name](std::int64_t) {
                    raw[name]["emit-svg"] = "true";
                });
            else
                sub->add_option("--" + key, raw[cmd.name][key], "default: " + (def.empty() ? "auto" : def));
        }
        sub->add_option("--config", config_path, "flat key=value file or a run manifest");
        sub->add_option("--out", out_dir, "output directory (default $WMBO_OUT or ./wmbo_out)");
        sub->add_option("--jobs", jobs, "worker threads (default: available parallelism)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Ctx c;
        const Command* cmd = nullptr;
        for (auto& k : commands())
            if (subs[k.name]->parsed()) cmd = &k;
        c.command = cmd->name;
        for (auto& [key, def] : cmd->options) c.cfg[key] = def;
        Config file;
        if (!config_path.empty()) file = read_config_file(config_path);
        for (auto& [k, v] : file) {
            if (k == "out") {
                if (out_dir.empty()) out_dir = v;
                continue;
            }
            if (!c.cfg.count(k)) throw UsageError("unknown config key '" + k + "' for " + c.command);
            c.cfg[k] = v;
        }
        for (auto& [key, def] : cmd->options) {
            const bool given = key == "emit-svg" ? raw[cmd->name].count(key) > 0
                                                 : subs[cmd->name]->count("--" + key) > 0;
            if (given) c.cfg[key] = raw[cmd->name][key];
        }
        if (out_dir.empty()) {
            const char* env = std::getenv("WMBO_OUT");
            out_dir = env && *env ? env : "wmbo_out";
        }
        if (jobs > 0) omp_set_num_threads(jobs);
        c.out = out_dir;
        std::error_code ec;
        fs::create_directories(c.out, ec);
        if (ec || !fs::is_directory(c.out)) throw UsageError("cannot create output directory " + out_dir);

        c.manifest = json::object();
        c.manifest["command"] = c.command;
        c.manifest["outputs"] = json::array();
        const int code = dispatch(c);
        Config echoed = c.cfg;
        echoed["out"] = out_dir;
        c.manifest["config"] = echoed;
        write_text(c.out / "manifest.json", c.manifest.dump(2) + "\n");
        return code;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const RangeError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args)
{
    std::vector<std::string> store;
    store.push_back("wmbo");
    store.insert(store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : store) argv.push_back(s.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace wmbo
