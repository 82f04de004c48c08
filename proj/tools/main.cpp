#include "ahspec/runconfig.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

using namespace ahspec;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open " + path.string() + " for writing");
    out << text;
}

using CheckFn = IdentityReport (*)(std::uint64_t, bool, const LadderSetup&);
const std::map<std::string, CheckFn>& check_table() {
    static const std::map<std::string, CheckFn> table = {
        {"div_lring", check_div_lring},
        {"commutator_div", check_commutator_div},
        {"commutator_killing", check_commutator_killing},
        {"weitzenbock", check_weitzenbock},
        {"norm_identity", check_norm_identity},
        {"tt_characterization", check_tt_characterization},
        {"energy_inequalities", check_energy_inequalities},
    };
    return table;
}

int cmd_verify(const RunConfig& c) {
    const LadderSetup setup = ladder_setup(c);
    std::vector<IdentityReport> reports;
    if (c.only.empty()) {
        reports = run_identity_suite(c.seed, setup);
    } else {
        const auto it = check_table().find(c.only);
        if (it == check_table().end()) {
            std::string known;
            for (const auto& [name, fn] : check_table()) known += " " + name;
            throw ConfigError("unknown check '" + c.only + "'; available:" + known);
        }
        reports.push_back(it->second(c.seed, false, setup));
    }
    const fs::path out(c.out);
    write_identity_reports_json((out / "identities.json").string(), reports);
    write_identity_reports_csv((out / "identities.csv").string(), reports);
    bool all = true;
    for (const auto& r : reports) {
        std::printf("%-6s %-22s order %.2f  value %.3e  (%s)\n",
                    r.pass ? "pass" : "FAIL", r.name.c_str(), r.order, r.value,
                    r.detail.c_str());
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

int cmd_quasimode(const RunConfig& c) {
    const SurfaceModel m = build_scan_chart(c.lambdas, c.radii, c.t_min, 8);
    const QuasimodeScan scan = quasimode_scan(c.lambdas, c.radii, m);
    const fs::path out(c.out);
    write_scan_csv((out / "scan.csv").string(), scan);
    write_text(out / "scan.json", scan.summary_json() + "\n");
    char buf[64];
    bool all = true;
    for (const auto& f : scan.fits) {
        std::snprintf(buf, sizeof buf, "scan_lambda%g.dat", f.lambda);
        write_scan_plot((out / buf).string(), scan, f.lambda);
        std::printf("%-6s lambda %-6g ratio slope %8.3f  |h|^2 slope %8.3f\n",
                    f.pass ? "pass" : "FAIL", f.lambda, f.ratio_slope, f.norm2_slope);
        all = all && f.pass;
    }
    return all ? 0 : 1;
}

int cmd_spectrum(const RunConfig& c) {
    const SurfaceModel m = build_model(c);
    const SpectrumReport rep = spectral_picture(m, spectral_config(c));
    const fs::path out(c.out);
    write_text(out / "spectrum.json", rep.report_json() + "\n");
    write_spectrum_csv((out / "eigenvalues.csv").string(), rep);
    write_spectrum_histogram((out / "histogram.dat").string(), rep);
    write_text(out / "model.json", m.snapshot_json() + "\n");
    for (const auto& v : rep.verdicts)
        std::printf("%-18s %-18s %s\n", v.name.c_str(), v.status.c_str(),
                    v.detail.c_str());
    return rep.all_pass() ? 0 : 1;
}

int cmd_report(const RunConfig& c) {
    const int v = cmd_verify(c);
    const int q = cmd_quasimode(c);
    const int s = cmd_spectrum(c);
    nlohmann::json j;
    j["version"] = 1;
    j["verify"] = v == 0;
    j["quasimode"] = q == 0;
    j["spectrum"] = s == 0;
    write_text(fs::path(c.out) / "report.json", j.dump(2) + "\n");
    return (v == 0 && q == 0 && s == 0) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical workbench for the Lichnerowicz spectrum on "
                 "asymptotically hyperbolic surfaces"};
    app.require_subcommand(1);

    std::string config_path, out_flag, seed_flag, only_flag, ladder_flag;
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--out", out_flag, "output directory");
    app.add_option("--seed", seed_flag, "base random seed");
    app.add_option("--only", only_flag, "run a single named check (verify)");
    app.add_option("--grid-ladder", ladder_flag, "comma-separated ladder grid sizes");

    auto* sub_verify = app.add_subcommand("verify", "run the identity suite");
    auto* sub_quasi = app.add_subcommand("quasimode", "run the quasimode scan");
    auto* sub_spec = app.add_subcommand("spectrum", "assemble the spectral picture");
    auto* sub_report = app.add_subcommand("report", "run everything and summarize");
    for (auto* sub : {sub_verify, sub_quasi, sub_spec, sub_report}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig c;
        if (!config_path.empty()) c = load_run_config(config_path);
        if (!out_flag.empty()) set_config_key(c, "out", out_flag);
        if (!seed_flag.empty()) set_config_key(c, "seed", seed_flag);
        if (!only_flag.empty()) set_config_key(c, "only", only_flag);
        if (!ladder_flag.empty()) set_config_key(c, "grid_ladder", ladder_flag);
        validate_run_config(c);

        fs::create_directories(c.out);
        write_text(fs::path(c.out) / "config.txt", config_snapshot(c));

        if (sub_verify->parsed()) return cmd_verify(c);
        if (sub_quasi->parsed()) return cmd_quasimode(c);
        if (sub_spec->parsed()) return cmd_spectrum(c);
        if (sub_report->parsed()) return cmd_report(c);
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
