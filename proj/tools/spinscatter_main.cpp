#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinscatter/models.hpp"
#include "spinscatter/sweep.hpp"

namespace {

void print_peaks(const std::vector<spinscatter::sweep::PeakRecord>& peaks) {
    for (const auto& p : peaks) {
        std::printf("peak %-10s K_i = %.10g meV  value = %.10g%s\n", p.quantity.c_str(),
                    p.k_at_max, p.value, p.boundary ? "  [boundary]" : "");
    }
}

spinscatter::sweep::SweepTable peaks_table(
    const std::vector<spinscatter::sweep::PeakRecord>& peaks) {
    spinscatter::sweep::SweepTable t;
    t.columns = {"K_at_max", "value", "rel_tol", "boundary"};
    for (const auto& p : peaks) {
        t.labels.push_back(p.quantity);
        t.rows.push_back({p.k_at_max, p.value, p.rel_tol_achieved, p.boundary ? 1.0 : 0.0});
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inelastic single-electron scattering through interacting spin chains: "
                 "kinetic-energy sweeps, peak refinement, and entanglement metrics"};
    app.require_subcommand(1);

    std::string config_path, out_override, format_override;
    int threads = 0;

    CLI::App* run = app.add_subcommand("run", "sweep the kinetic-energy grid of a config");
    run->add_option("config", config_path, "JSON sweep config")->required();
    run->add_option("--out", out_override, "override the output path");
    run->add_option("--format", format_override, "override the output format (csv|json)");
    run->add_option("--threads", threads, "worker count (default: SPINSCATTER_THREADS or all cores)");

    CLI::App* scan = app.add_subcommand("scan", "peak scan over presets / splitting lists");
    scan->add_option("config", config_path, "JSON scan config")->required();
    scan->add_option("--out", out_override, "override the output path");
    scan->add_option("--format", format_override, "override the output format (csv|json)");
    scan->add_option("--threads", threads, "worker count");

    CLI::App* presets = app.add_subcommand("presets", "list the named molecular presets");

    CLI11_PARSE(app, argc, argv);

    try {
        using namespace spinscatter;
        if (presets->parsed()) {
            std::printf("%-12s %6s %10s %10s %14s %10s\n", "name", "s", "D/meV", "J12/meV",
                        "deltaE/meV", "|deltaE|");
            for (const auto& [name, p] : molecular_presets()) {
                const MolecularParams mp = preset_params(name, -0.5);
                const double dE = molecular_delta_e(mp);
                std::printf("%-12s %6g %10g %10g %14g %10g\n", name.c_str(), p.s, p.D, p.J12,
                            dE, std::abs(dE));
            }
            return 0;
        }

        const int workers = sweep::resolve_threads(threads);
        if (run->parsed()) {
            sweep::SweepConfig cfg = sweep::load_sweep_config(config_path);
            if (!out_override.empty()) cfg.out = out_override;
            if (!format_override.empty()) cfg.format = format_override;
            const sweep::SweepTable table = sweep::run_sweep(cfg, workers);
            sweep::emit(table, cfg.out, cfg.format);
            sweep::write_config_echo(cfg.raw, cfg.out);
            std::printf("wrote %zu rows to %s\n", table.rows.size(), cfg.out.c_str());
            if (cfg.refine_peaks) {
                const auto peaks = sweep::refine_sweep_peaks(cfg, table);
                print_peaks(peaks);
                sweep::emit(peaks_table(peaks), cfg.out + ".peaks." + cfg.format, cfg.format);
            }
        } else if (scan->parsed()) {
            sweep::ScanConfig cfg = sweep::load_scan_config(config_path);
            if (!out_override.empty()) cfg.out = out_override;
            if (!format_override.empty()) cfg.format = format_override;
            const sweep::SweepTable table = sweep::peak_scan(cfg, workers);
            sweep::emit(table, cfg.out, cfg.format);
            sweep::write_config_echo(cfg.raw, cfg.out);
            std::printf("wrote %zu rows to %s\n", table.rows.size(), cfg.out.c_str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
