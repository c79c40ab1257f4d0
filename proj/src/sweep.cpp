#include "spinscatter/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "spinscatter/entanglement.hpp"

namespace spinscatter {
namespace sweep {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double guarded_p2(double T_i, double T_plus, double theta_tilde) {
    const double c = std::cos(0.5 * theta_tilde), s = std::sin(0.5 * theta_tilde);
    const double denom = T_plus * c * c + T_i * s * s;
    return denom == 0.0 ? 0.0 : T_i * T_plus / denom;
}

using Extractor = std::function<double(const ScatterOutcome&)>;

struct ColumnSet {
    std::vector<std::string> names;
    std::vector<Extractor> fns;
};

ColumnSet build_columns(const SweepConfig& cfg, const ResolvedModel& rm) {
    const int d = rm.model.dim();
    const int inc = rm.incoming;
    const bool three_channel = d == 3 && inc == 0;
    ColumnSet cols;
    auto add = [&](const std::string& name, Extractor fn) {
        cols.names.push_back(name);
        cols.fns.push_back(std::move(fn));
    };
    for (const std::string& q : cfg.outputs) {
        if (q == "T_i") add(q, [inc](const ScatterOutcome& o) { return o.T(inc); });
        else if (q == "R_i") add(q, [inc](const ScatterOutcome& o) { return o.R(inc); });
        else if (q == "T_plus" || q == "T_minus" || q == "R_plus" || q == "R_minus" ||
                 q == "p2_bar" || q == "phi_plus" || q == "p2") {
            if (!three_channel)
                throw std::invalid_argument("output '" + q +
                                            "' needs the 3-channel basis with incoming |i>");
            if (q == "T_plus") add(q, [](const ScatterOutcome& o) { return o.T(1); });
            else if (q == "T_minus") add(q, [](const ScatterOutcome& o) { return o.T(2); });
            else if (q == "R_plus") add(q, [](const ScatterOutcome& o) { return o.R(1); });
            else if (q == "R_minus") add(q, [](const ScatterOutcome& o) { return o.R(2); });
            else if (q == "p2_bar")
                add(q, [](const ScatterOutcome& o) { return p2_bar(o.T(0), o.T(1)); });
            else if (q == "phi_plus")
                add(q, [](const ScatterOutcome& o) { return o.phi_plus().value_or(0.0); });
            else {  // p2: one column per theta_tilde sample
                if (cfg.theta_tilde.empty())
                    throw std::invalid_argument("output 'p2' requires a theta_tilde list");
                for (size_t k = 0; k < cfg.theta_tilde.size(); ++k) {
                    const double tt = cfg.theta_tilde[k];
                    add("p2_tt" + std::to_string(k), [tt](const ScatterOutcome& o) {
                        return guarded_p2(o.T(0), o.T(1), tt);
                    });
                }
            }
        } else if (q == "T_f" || q == "R_f" || q == "T_nf" || q == "R_nf") {
            if (!rm.flip_partner)
                throw std::invalid_argument("output '" + q +
                                            "' needs a model with a spin-flip channel");
            const int f = *rm.flip_partner;
            if (q == "T_f") add(q, [f](const ScatterOutcome& o) { return o.T(f); });
            else if (q == "R_f") add(q, [f](const ScatterOutcome& o) { return o.R(f); });
            else if (q == "T_nf") add(q, [inc](const ScatterOutcome& o) { return o.T(inc); });
            else add(q, [inc](const ScatterOutcome& o) { return o.R(inc); });
        } else {
            throw std::invalid_argument("unrecognized output quantity '" + q + "'");
        }
    }
    return cols;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return json::parse(in);
}

GridSpec parse_grid(const json& j) {
    GridSpec g;
    if (!j.is_object()) return g;
    if (j.contains("scale")) {
        const std::string s = j.at("scale").get<std::string>();
        if (s == "log") g.scale = GridSpec::Scale::Log;
        else if (s == "linear") g.scale = GridSpec::Scale::Linear;
        else throw std::invalid_argument("grid.scale must be 'log' or 'linear'");
    }
    g.min = j.value("min", g.min);
    g.max = j.value("max", g.max);
    g.count = j.value("count", g.count);
    if (j.contains("unit")) {
        const std::string u = j.at("unit").get<std::string>();
        if (u == "t") g.unit_t = true;
        else if (u == "meV") g.unit_t = false;
        else throw std::invalid_argument("grid.unit must be 't' or 'meV'");
    }
    if (!(g.min > 0.0)) throw std::invalid_argument("grid.min must be positive");
    if (!(g.max > g.min)) throw std::invalid_argument("grid.max must exceed grid.min");
    if (g.count < 2) throw std::invalid_argument("grid.count must be >= 2");
    return g;
}

ModelSpec parse_model(const json& j) {
    ModelSpec m;
    m.type = j.at("type").get<std::string>();
    m.s = j.value("s", m.s);
    m.J = j.value("J", m.J);
    if (m.type == "molecular") {
        m.molecular.s = m.s;
        m.molecular.J = m.J;
        if (j.contains("D")) m.molecular.D1 = m.molecular.D2 = j.at("D").get<double>();
        m.molecular.D1 = j.value("D1", m.molecular.D1);
        m.molecular.D2 = j.value("D2", m.molecular.D2);
        if (j.contains("J12")) m.molecular.J12x = m.molecular.J12z = j.at("J12").get<double>();
        m.molecular.J12x = j.value("J12x", m.molecular.J12x);
        m.molecular.J12z = j.value("J12z", m.molecular.J12z);
    } else if (m.type == "preset") {
        m.preset = j.at("name").get<std::string>();
    } else if (m.type == "zeeman") {
        m.Delta = j.value("Delta", 0.0);
    } else if (m.type == "anderson" || m.type == "schrieffer_wolff") {
        m.anderson.t_h = j.value("t_h", 1.0);
        m.anderson.U1 = j.value("U1", 0.0);
        m.anderson.U2 = j.value("U2", 0.0);
        m.anderson.eps = j.value("eps", 0.0);
    } else if (m.type != "kondo_spread" && m.type != "kondo_combined") {
        throw std::invalid_argument("unknown model type '" + m.type + "'");
    }
    return m;
}

double grid_value(const SweepTable& table, int row, int col) { return table.rows[row][col]; }

int column_index(const SweepTable& table, const std::string& name) {
    for (size_t c = 0; c < table.columns.size(); ++c)
        if (table.columns[c] == name) return static_cast<int>(c);
    return -1;
}

}  // namespace

std::vector<double> GridSpec::points(double t) const {
    const double lo = unit_t ? min * t : min;
    const double hi = unit_t ? max * t : max;
    std::vector<double> pts(count);
    if (scale == Scale::Log) {
        const double llo = std::log(lo), lhi = std::log(hi);
        for (int i = 0; i < count; ++i)
            pts[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
    } else {
        for (int i = 0; i < count; ++i) pts[i] = lo + (hi - lo) * i / (count - 1);
    }
    return pts;
}

ResolvedModel resolve_model(const ModelSpec& spec, int N, double t) {
    ResolvedModel rm;
    if (spec.type == "kondo_spread") {
        rm.model = kondo_contact_spread(spec.s, spec.J, N, t);
        rm.description = "spread contact exchange, s=" + std::to_string(spec.s);
    } else if (spec.type == "kondo_combined") {
        rm.model = kondo_contact_combined(spec.s, spec.J, N, t);
        rm.description = "combined contact exchange, s=" + std::to_string(spec.s);
    } else if (spec.type == "molecular") {
        rm.model = molecular_block(spec.molecular, N, t);
        rm.description = "molecular block, s=" + std::to_string(spec.molecular.s);
    } else if (spec.type == "preset") {
        rm.model = molecular_block(preset_params(spec.preset, spec.J), N, t);
        rm.description = "preset " + spec.preset;
    } else if (spec.type == "zeeman") {
        rm.model = zeeman_impurity(spec.J, spec.Delta, t);
        rm.incoming = 1;
        rm.flip_partner = 2;
        rm.description = "spin-1/2 impurity with Zeeman splitting";
    } else if (spec.type == "anderson") {
        rm.model = anderson_payload(spec.anderson, t);
        rm.incoming = 1;
        rm.flip_partner = 2;
        rm.description = "exact Anderson payload";
    } else if (spec.type == "schrieffer_wolff") {
        rm.model = schrieffer_wolff_payload(spec.anderson, t);
        rm.incoming = 0;
        rm.flip_partner = 1;
        rm.description = "Schrieffer-Wolff payload";
    } else {
        throw std::invalid_argument("unknown model type '" + spec.type + "'");
    }
    return rm;
}

SweepConfig parse_sweep_config(const json& j) {
    SweepConfig cfg;
    cfg.raw = j;
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1)
        throw std::invalid_argument("unsupported schema_version");
    cfg.model = parse_model(j.at("model"));
    cfg.N = j.value("N", cfg.N);
    cfg.t = j.value("t", cfg.t);
    if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
    if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (j.contains("theta_tilde"))
        cfg.theta_tilde = j.at("theta_tilde").get<std::vector<double>>();
    cfg.refine_peaks = j.value("refine_peaks", false);
    cfg.out = j.value("out", cfg.out);
    cfg.format = j.value("format", cfg.format);
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("format must be 'csv' or 'json'");
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    return parse_sweep_config(load_json_file(path));
}

SweepTable run_sweep(const SweepConfig& cfg, int threads) {
    const ResolvedModel rm0 = resolve_model(cfg.model, cfg.N, cfg.t);
    ResolvedModel rm = rm0;
    rm.model = shifted_to_incoming(rm0.model, rm0.incoming);
    const ColumnSet cols = build_columns(cfg, rm);
    const std::vector<double> grid = cfg.grid.points(cfg.t);
    const LeadSpec lead = rm.model.lead();

    SweepTable table;
    table.columns = {"K_i", "open"};
    table.columns.insert(table.columns.end(), cols.names.begin(), cols.names.end());
    table.rows.assign(grid.size(), {});

    parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
        const double K = grid[i];
        std::vector<double> row;
        row.reserve(table.columns.size());
        row.push_back(K);
        if (!channel_table(K, lead)[rm.incoming].open) {
            row.push_back(0.0);
            row.insert(row.end(), cols.fns.size(), 0.0);
        } else {
            const ScatterOutcome o = solve_scattering(rm.model, K, rm.incoming);
            row.push_back(1.0);
            for (const auto& fn : cols.fns) row.push_back(fn(o));
        }
        table.rows[i] = std::move(row);
    });
    return table;
}

PeakRecord refine_peak(const std::string& quantity, const std::function<double(double)>& f,
                       double lo, double seed, double hi, double rel_tol) {
    if (!(lo < hi)) throw std::invalid_argument("refine_peak: empty bracket");
    PeakRecord rec;
    rec.quantity = quantity;
    rec.k_at_max = seed;
    rec.value = f(seed);
    auto consider = [&rec](double x, double v) {
        if (v > rec.value) { rec.value = v; rec.k_at_max = x; }
    };
    consider(lo, f(lo));
    consider(hi, f(hi));

    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    consider(x1, f1);
    consider(x2, f2);
    while ((b - a) > rel_tol * std::max(std::abs(a), std::abs(b))) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
            consider(x2, f2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
            consider(x1, f1);
        }
    }
    rec.rel_tol_achieved = (b - a) / std::max(std::abs(a), std::abs(b));
    return rec;
}

std::vector<PeakRecord> refine_sweep_peaks(const SweepConfig& cfg, const SweepTable& table) {
    const ResolvedModel rm0 = resolve_model(cfg.model, cfg.N, cfg.t);
    ResolvedModel rm = rm0;
    rm.model = shifted_to_incoming(rm0.model, rm0.incoming);
    const ColumnSet cols = build_columns(cfg, rm);
    const int open_col = column_index(table, "open");

    std::vector<PeakRecord> peaks;
    for (size_t c = 0; c < cols.names.size(); ++c) {
        const std::string& name = cols.names[c];
        if (name == "phi_plus" || name.rfind("p2_tt", 0) == 0) continue;
        const int col = column_index(table, name);
        int best = -1;
        for (size_t r = 0; r < table.rows.size(); ++r) {
            if (grid_value(table, r, open_col) != 1.0) continue;
            if (best < 0 || table.rows[r][col] > table.rows[best][col]) best = static_cast<int>(r);
        }
        if (best < 0) continue;  // incoming closed everywhere

        const bool lo_open = best > 0 && grid_value(table, best - 1, open_col) == 1.0;
        const bool hi_open = best + 1 < static_cast<int>(table.rows.size()) &&
                             grid_value(table, best + 1, open_col) == 1.0;
        const double k_best = table.rows[best][0];
        if (!lo_open || !hi_open) {
            PeakRecord rec;
            rec.quantity = name;
            rec.k_at_max = k_best;
            rec.value = table.rows[best][col];
            rec.boundary = true;
            peaks.push_back(rec);
            continue;
        }
        const auto& fn = cols.fns[c];
        const auto evaluate = [&](double K) {
            return fn(solve_scattering(rm.model, K, rm.incoming));
        };
        peaks.push_back(refine_peak(name, evaluate, table.rows[best - 1][0], k_best,
                                    table.rows[best + 1][0]));
    }
    return peaks;
}

ScanConfig parse_scan_config(const json& j) {
    ScanConfig cfg;
    cfg.raw = j;
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1)
        throw std::invalid_argument("unsupported schema_version");
    cfg.J = j.value("J", cfg.J);
    cfg.J12 = j.value("J12", cfg.J12);
    cfg.N = j.value("N", cfg.N);
    cfg.t = j.value("t", cfg.t);
    if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
    cfg.out = j.value("out", cfg.out);
    cfg.format = j.value("format", cfg.format);
    for (const json& e : j.at("scan")) {
        ScanEntry entry;
        if (e.contains("preset")) entry.preset = e.at("preset").get<std::string>();
        entry.s = e.value("s", 0.5);
        if (e.contains("delta_e")) entry.delta_e = e.at("delta_e").get<std::vector<double>>();
        if (e.contains("D")) entry.D = e.at("D").get<std::vector<double>>();
        cfg.entries.push_back(std::move(entry));
    }
    return cfg;
}

ScanConfig load_scan_config(const std::string& path) {
    return parse_scan_config(load_json_file(path));
}

SweepTable peak_scan(const ScanConfig& cfg, int threads) {
    SweepTable table;
    table.columns = {"s", "delta_e", "max_T_plus", "K_at_max_T_plus",
                     "max_p2_bar", "K_at_max_p2_bar"};

    struct Row {
        std::string label;
        MolecularParams params;  // unused for the spread baseline
        double s;
        bool spread;
    };
    std::vector<Row> jobs;
    for (const ScanEntry& entry : cfg.entries) {
        if (entry.preset) {
            Row r{*entry.preset, preset_params(*entry.preset, cfg.J), 0.0, false};
            r.s = r.params.s;
            jobs.push_back(std::move(r));
            continue;
        }
        if (entry.s == 0.5) {
            jobs.push_back({"s=1/2", {}, 0.5, true});
            continue;
        }
        std::vector<double> Ds = entry.D;
        for (double dE : entry.delta_e) Ds.push_back(-dE / (2.0 * entry.s - 1.0));
        for (double D : Ds) {
            MolecularParams p;
            p.s = entry.s;
            p.D1 = p.D2 = D;
            p.J12x = p.J12z = cfg.J12;
            p.J = cfg.J;
            char label[32];
            std::snprintf(label, sizeof(label), "s=%g", entry.s);
            jobs.push_back({label, p, entry.s, false});
        }
    }

    for (const Row& job : jobs) {
        SweepConfig sub;
        sub.N = cfg.N;
        sub.t = cfg.t;
        sub.grid = cfg.grid;
        sub.outputs = {"T_plus", "p2_bar"};
        if (job.spread) {
            sub.model.type = "kondo_spread";
            sub.model.s = job.s;
            sub.model.J = cfg.J;
        } else {
            sub.model.type = "molecular";
            sub.model.molecular = job.params;
        }
        const SweepTable swept = run_sweep(sub, threads);
        const std::vector<PeakRecord> peaks = refine_sweep_peaks(sub, swept);
        double maxTp = 0.0, kTp = 0.0, maxP2 = 0.0, kP2 = 0.0;
        for (const PeakRecord& p : peaks) {
            if (p.quantity == "T_plus") { maxTp = p.value; kTp = p.k_at_max; }
            if (p.quantity == "p2_bar") { maxP2 = p.value; kP2 = p.k_at_max; }
        }
        const double dE = job.spread ? 0.0 : molecular_delta_e(job.params);
        table.labels.push_back(job.label);
        table.rows.push_back({job.s, dE, maxTp, kTp, maxP2, kP2});
    }
    return table;
}

void emit(const SweepTable& table, const std::string& path, const std::string& format) {
    const bool labeled = !table.labels.empty();
    if (labeled && table.labels.size() != table.rows.size())
        throw std::invalid_argument("emit: label/row count mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open output path " + path);
    if (format == "csv") {
        std::string header;
        if (labeled) header += "label,";
        for (size_t c = 0; c < table.columns.size(); ++c) {
            if (c) header += ',';
            header += table.columns[c];
        }
        out << header << '\n';
        for (size_t r = 0; r < table.rows.size(); ++r) {
            std::string line;
            if (labeled) line += table.labels[r] + ",";
            for (size_t c = 0; c < table.rows[r].size(); ++c) {
                if (c) line += ',';
                line += fmt17(table.rows[r][c]);
            }
            out << line << '\n';
        }
    } else if (format == "json") {
        json arr = json::array();
        for (size_t r = 0; r < table.rows.size(); ++r) {
            json obj = json::object();
            if (labeled) obj["label"] = table.labels[r];
            for (size_t c = 0; c < table.columns.size(); ++c)
                obj[table.columns[c]] = table.rows[r][c];
            arr.push_back(std::move(obj));
        }
        out << arr.dump(2) << '\n';
    } else {
        throw std::invalid_argument("emit: format must be 'csv' or 'json'");
    }
    if (!out) throw std::runtime_error("emit: write failed for " + path);
}

void write_config_echo(const json& raw, const std::string& out_path) {
    const std::string path = out_path + ".config.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write config echo " + path);
    out << raw.dump(2) << '\n';
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPINSCATTER_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace sweep
}  // namespace spinscatter
