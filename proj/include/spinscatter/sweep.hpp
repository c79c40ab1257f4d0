#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinscatter/models.hpp"
#include "spinscatter/scattering_engine.hpp"

namespace spinscatter {
namespace sweep {

/// Kinetic-energy grid. min/max are in units of t when unit_t is set,
/// otherwise in meV. min must be positive and count >= 2.
struct GridSpec {
    enum class Scale { Log, Linear };
    Scale scale = Scale::Log;
    double min = 1e-6;
    double max = 1e-1;
    int count = 400;
    bool unit_t = true;

    std::vector<double> points(double t) const;
};

/// Inline model description from a config file.
struct ModelSpec {
    std::string type;  // kondo_spread | kondo_combined | molecular | preset |
                       // zeeman | anderson | schrieffer_wolff
    double s = 0.5;
    double J = -0.5;
    MolecularParams molecular;
    std::string preset;
    double Delta = 0.0;
    AndersonParams anderson;
};

/// A built model plus the channel conventions the sweep needs.
struct ResolvedModel {
    ScatteringModel model;
    int incoming = 0;
    std::optional<int> flip_partner;  // spin-flip outgoing channel, where meaningful
    std::string description;
};

ResolvedModel resolve_model(const ModelSpec& spec, int N, double t);

struct SweepConfig {
    int schema_version = 1;
    ModelSpec model;
    int N = 2;
    double t = 100.0;
    GridSpec grid;
    std::vector<std::string> outputs{"T_i", "T_plus", "T_minus", "p2_bar"};
    std::vector<double> theta_tilde;  // p2(theta_tilde) sample points
    bool refine_peaks = false;
    std::string out = "sweep.csv";
    std::string format = "csv";
    nlohmann::json raw;  // config as read, echoed next to the output
};

SweepConfig load_sweep_config(const std::string& path);
SweepConfig parse_sweep_config(const nlohmann::json& j);

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::string> labels;  // optional row labels; empty or one per row
    std::vector<std::vector<double>> rows;
};

/// One row per grid point, in grid order regardless of thread count. A grid
/// point where the incoming channel is closed is flagged (open = 0) with all
/// quantities zero; it is not an error.
SweepTable run_sweep(const SweepConfig& cfg, int threads);

struct PeakRecord {
    std::string quantity;
    double k_at_max = 0.0;   // meV
    double value = 0.0;
    double rel_tol_achieved = 0.0;
    bool boundary = false;   // grid maximum sat at a bracket edge; not refined
};

/// Golden-section maximization of f over [lo, hi] to relative tolerance
/// rel_tol in the abscissa. The bracket endpoints and `seed` count as
/// candidates, so the returned value is never below the best seed.
PeakRecord refine_peak(const std::string& quantity, const std::function<double(double)>& f,
                       double lo, double seed, double hi, double rel_tol = 1e-6);

/// Refines every refinable requested column of a finished sweep (phi_plus
/// and the p2(theta_tilde) samples are excluded). Brackets are constrained
/// to the contiguous open-channel region around each grid maximum.
std::vector<PeakRecord> refine_sweep_peaks(const SweepConfig& cfg, const SweepTable& table);

struct ScanEntry {
    std::optional<std::string> preset;
    double s = 0.5;
    std::vector<double> delta_e;  // molecular rows via D = -dE/(2s-1)
    std::vector<double> D;        // or explicit D values
};

struct ScanConfig {
    int schema_version = 1;
    std::vector<ScanEntry> entries;
    double J = -0.5;
    double J12 = 1.0;  // J12x = J12z for delta_e-driven rows
    int N = 2;
    double t = 100.0;
    GridSpec grid;
    std::string out = "peaks.csv";
    std::string format = "csv";
    nlohmann::json raw;
};

ScanConfig load_scan_config(const std::string& path);
ScanConfig parse_scan_config(const nlohmann::json& j);

/// One row per (entry, splitting): label, s, delta_e, refined max T_plus and
/// max p2_bar with the kinetic energies where they occur. s = 1/2 entries
/// use the spread contact model (only delta_e = 0 exists there); presets and
/// s >= 1 rows use the molecular block.
SweepTable peak_scan(const ScanConfig& cfg, int threads);

/// Writes the table as CSV (header row, 17-significant-digit floats, LF line
/// endings) or as a JSON array of per-row objects.
void emit(const SweepTable& table, const std::string& path, const std::string& format);

/// Writes the config that produced an output next to it, at <path>.config.json.
void write_config_echo(const nlohmann::json& raw, const std::string& out_path);

/// Worker count: explicit request if > 0, else SPINSCATTER_THREADS, else
/// hardware concurrency.
int resolve_threads(int requested);

}  // namespace sweep
}  // namespace spinscatter
