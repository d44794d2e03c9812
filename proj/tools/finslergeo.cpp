#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "finsler/report.hpp"
#include "finsler/version.hpp"

using namespace finsler;

namespace {

// --tol-KEY VALUE pairs are dynamic; strip them before CLI11 sees the argv
std::map<std::string, double> extract_tolerances(std::vector<std::string>& args) {
    std::map<std::string, double> tol;
    std::vector<std::string> rest;
    for (size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--tol-", 0) == 0) {
            std::string key = a.substr(6);
            std::string val;
            auto eq = key.find('=');
            if (eq != std::string::npos) {
                val = key.substr(eq + 1);
                key = key.substr(0, eq);
            } else {
                if (i + 1 >= args.size()) throw ConfigError("missing value for " + a);
                val = args[++i];
            }
            try {
                tol[key] = std::stod(val);
            } catch (const std::exception&) {
                throw ConfigError("bad tolerance value '" + val + "' for " + a);
            }
            continue;
        }
        rest.push_back(a);
    }
    args = rest;
    return tol;
}

std::vector<BundlePoint> load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open points file '" + path + "'");
    ojson j;
    in >> j;
    std::vector<BundlePoint> pts;
    for (const auto& jp : j) {
        BundlePoint p;
        p.x = jp.at("x").get<Vec>();
        p.y = jp.at("y").get<Vec>();
        pts.push_back(std::move(p));
    }
    return pts;
}

ConformalFactor load_factor(const std::string& path, int dim) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open conformal factor file '" + path + "'");
    ojson j;
    in >> j;
    return ConformalFactor::from_json(j, dim);
}

void write_output(const GeometryReport& rep, const std::string& out, const std::string& format) {
    std::string body = format == "csv" ? report_to_csv(rep.doc) : report_to_string(rep.doc);
    if (out.empty() || out == "-") {
        std::cout << body;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file '" + out + "'");
        f << body;
    }
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    RunConfig rc;
    try {
        rc.tol = extract_tolerances(args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"Finsler curvature engine: tensors, Einstein residuals, conformal checks"};
    app.require_subcommand(1);

    std::string metric_path, conformal_path, points_path, out_path, format = "json", case_name;
    int points = 5, jet_order = 4;
    unsigned long long seed = 1;
    double fd_step = 1e-4;
    std::string fd_scheme = "central_4_richardson";
    bool sweep = false;
    std::vector<double> case_params;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--metric", metric_path, "metric spec JSON file")->required();
        cmd->add_option("--points", points, "number of sampled points");
        cmd->add_option("--seed", seed, "sampling seed");
        cmd->add_option("--points-file", points_path, "explicit points JSON file");
        cmd->add_option("--jet-order", jet_order, "truncation order of the jet arithmetic");
        cmd->add_option("--fd-step", fd_step, "outer finite-difference step");
        cmd->add_option("--fd-scheme", fd_scheme, "central_2 | central_4_richardson");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* tensors = app.add_subcommand("tensors", "fundamental tensor through hh-curvature");
    add_common(tensors);
    CLI::App* einstein = app.add_subcommand("check-einstein", "R-Einstein residual and Schur statistic");
    add_common(einstein);
    CLI::App* conformal = app.add_subcommand("conformal", "conformal residuals and classification");
    add_common(conformal);
    conformal->add_option("--conformal", conformal_path, "conformal factor JSON file");
    conformal->add_flag("--sweep", sweep, "sweep builtin candidate factors instead of a file");
    CLI::App* warp = app.add_subcommand("warp", "warped-product block and theorem checks");
    add_common(warp);
    warp->add_option("--case", case_name, "factor family: linear | cosh | cos");
    warp->add_option("--case-params", case_params, "factor family parameters");

    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        rc.metric = parse_metric_file(metric_path);
        rc.sample.count = points;
        rc.sample.seed = seed;
        rc.diff.jet_order = jet_order;
        rc.diff.fd_step = fd_step;
        if (fd_scheme == "central_2")
            rc.diff.fd_scheme = FdScheme::central_2;
        else if (fd_scheme == "central_4_richardson")
            rc.diff.fd_scheme = FdScheme::central_4_richardson;
        else
            throw ConfigError("unknown fd scheme '" + fd_scheme + "'");
        rc.diff.validate();
        if (!points_path.empty()) rc.explicit_points = load_points(points_path);
        if (!conformal_path.empty()) rc.conformal = load_factor(conformal_path, rc.metric.dim);
        rc.sweep_builtin_factors = sweep;
        if (!case_name.empty()) {
            if (case_name == "linear") rc.theorem_case = OdeCase::linear;
            else if (case_name == "cosh") rc.theorem_case = OdeCase::cosh_profile;
            else if (case_name == "cos") rc.theorem_case = OdeCase::cos_profile;
            else throw ConfigError("unknown theorem case '" + case_name + "'");
            rc.case_params = case_params;
        }

        GeometryReport rep;
        if (tensors->parsed()) rep = cmd_tensors(rc);
        else if (einstein->parsed()) rep = cmd_check_einstein(rc);
        else if (conformal->parsed()) rep = cmd_conformal(rc);
        else rep = cmd_warp(rc);

        write_output(rep, out_path, format);
        return rep.all_pass ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FinslerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
