// ccosim - behavioral simulator for a differential current-controlled ring
// oscillator used as a neural-network neuron: I-F sweeps, jitter statistics,
// time-to-digital conversion, lock-state analysis, Monte-Carlo mismatch,
// activation extraction, desk-scale NN benchmarks, spiking mode and the
// FOM/energy report.
//
// Exit codes: 0 ok, 1 invariant violation, 2 configuration error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccosim/config.hpp"
#include "ccosim/jitter_model.hpp"
#include "ccosim/neuron.hpp"
#include "ccosim/nn/bench.hpp"
#include "ccosim/power_model.hpp"
#include "ccosim/rng.hpp"

namespace fs = std::filesystem;
using namespace ccosim;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "csv";
    uint64_t seed = 0;
    bool seed_set = false;
};

config::RunConfig load_config(const GlobalOpts& g) {
    config::RunConfig cfg = g.config_path.empty()
                                ? config::RunConfig{}
                                : config::RunConfig::from_json_file(g.config_path);
    if (g.seed_set) cfg.seed = g.seed;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const GlobalOpts& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    std::ofstream os(fs::path(g.out_dir) / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + name);
    return os;
}

void write_resolved_config(const GlobalOpts& g, const config::RunConfig& cfg) {
    auto os = open_out(g, "resolved_config.json");
    os << cfg.to_json_text() << "\n";
}

std::vector<double> sweep_currents(const config::SweepSection& s) {
    std::vector<double> out;
    out.reserve(s.points);
    for (int k = 0; k < s.points; ++k)
        out.push_back(s.i_min + (s.i_max - s.i_min) * k / (s.points - 1));
    return out;
}

// Tabular output in the selected format: <name>.csv with one header line, or
// <name>.json as an array of objects. Cells are preformatted strings so both
// formats stay byte-stable.
class Table {
public:
    Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    Table& row(std::initializer_list<std::string> cells) {
        rows_.emplace_back(cells);
        return *this;
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.8e", v);
        return buf;
    }
    static std::string integer(long v) { return std::to_string(v); }

    void write(const GlobalOpts& g, const std::string& name) const {
        if (g.format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : rows_) {
                nlohmann::json obj;
                for (size_t c = 0; c < columns_.size(); ++c) obj[columns_[c]] = r[c];
                arr.push_back(std::move(obj));
            }
            auto os = open_out(g, name + ".json");
            os << arr.dump(2) << "\n";
            return;
        }
        auto os = open_out(g, name + ".csv");
        for (size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << columns_[c];
        os << "\n";
        for (const auto& r : rows_) {
            for (size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
            os << "\n";
        }
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

int cmd_sweep_if(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    const auto currents = sweep_currents(cfg.sweep);
    ring::RingConfig conv = cfg.ring;
    conv.topo = stage::StageTopology::Conventional8T;
    ring::RingConfig prop = cfg.ring;
    prop.topo = stage::StageTopology::ProposedBothStartup;
    const auto prop_curve = ring::if_curve(prop, currents);
    const auto conv_curve = ring::if_curve(conv, currents);
    Table table({"current_a", "freq_prop_hz", "freq_conv_hz"});
    for (size_t k = 0; k < currents.size(); ++k) {
        if (!(prop_curve[k].second > conv_curve[k].second))
            throw std::runtime_error("invariant: proposed curve not above conventional");
        table.row({Table::num(currents[k]), Table::num(prop_curve[k].second),
                   Table::num(conv_curve[k].second)});
    }
    table.write(g, "if_curve");
    std::printf("sweep-if: %zu points -> %s\n", currents.size(), g.out_dir.c_str());
    return 0;
}

int cmd_jitter(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    double gn = cfg.jitter.gamma_n, gp = cfg.jitter.gamma_p;
    if (cfg.jitter.measured_calibration) gn = gp = jitter::measured_calibration_gamma();
    const auto p = jitter::make_jitter_params(cfg.ring, cfg.jitter.vdd, gn, gp);
    const auto stats =
        jitter::window_count_jitter(cfg.ring, p, cfg.jitter.window, cfg.jitter.trials, cfg.seed);
    Table table({"trial", "count", "window_s"});
    for (size_t k = 0; k < stats.counts.size(); ++k)
        table.row({Table::integer(static_cast<long>(k)), Table::integer(stats.counts[k]),
                   Table::num(cfg.jitter.window)});
    table.write(g, "jitter_counts");
    std::printf("jitter: mean count %.2f, spread %.4f%%\n", stats.mean, stats.percent);
    return 0;
}

int cmd_tdc_sim(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    const double f = ring::frequency(cfg.ring);
    const auto edges = ring::EdgeStream::uniform(f, cfg.tdc_window, cfg.ring.n_stages);
    {
        auto os = open_out(g, "edges.csv");
        edges.to_csv(os);
    }
    const auto frame = tdc::convert(edges, cfg.tdc_window, cfg.tdc);
    if (frame.saturated) std::fprintf(stderr, "tdc-sim: warning: coarse counter saturated\n");
    const std::vector<tdc::TdcFrame> frames{frame};
    {
        auto os = open_out(g, "tdc_frames.bin");
        tdc::write_frames_binary(os, frames);
    }
    char gc_hex[8];
    std::snprintf(gc_hex, sizeof(gc_hex), "%03x", frame.gc);
    Table table({"window_s", "gc_hex", "pc", "f_hz"});
    table.row({Table::num(cfg.tdc_window), gc_hex, Table::integer(frame.pc),
               Table::num(tdc::decode_frequency(frame, cfg.tdc_window))});
    table.write(g, "tdc_frames");
    std::printf("tdc-sim: f=%.6g Hz, decoded %.6g Hz (gc=%03x pc=%d)\n", f,
                tdc::decode_frequency(frame, cfg.tdc_window), frame.gc, int(frame.pc));
    return 0;
}

int cmd_lockstate(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    Table table({"topology", "non_oscillating_fixed_points"});
    using T = stage::StageTopology;
    bool proposed4t_has_lock = false;
    for (T t : {T::Conventional8T, T::Proposed4T, T::ProposedPmosStartup, T::ProposedNmosStartup,
                T::ProposedBothStartup}) {
        const auto locks = ring::lock_state_analysis(t, cfg.ring.n_stages);
        if (t == T::Proposed4T) proposed4t_has_lock = !locks.empty();
        table.row({std::string(stage::topology_name(t)),
                   Table::integer(static_cast<long>(locks.size()))});
        std::printf("lockstate %-24s %zu\n", std::string(stage::topology_name(t)).c_str(),
                    locks.size());
    }
    table.write(g, "lockstate");
    if (!proposed4t_has_lock)
        throw std::runtime_error("invariant: bare 4T cell lost its deadlock state");
    return 0;
}

int cmd_mc(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    const auto currents = sweep_currents(cfg.sweep);
    const auto curves = variation::mc_if_curves(cfg.ring, cfg.mismatch, cfg.mc_runs, currents,
                                                cfg.seed);
    if (g.format == "json") {
        Table table({"run_id", "current_a", "freq_hz"});
        for (size_t run = 0; run < curves.size(); ++run)
            for (const auto& [i, f] : curves[run])
                table.row({Table::integer(static_cast<long>(run)), Table::num(i), Table::num(f)});
        table.write(g, "mc_curves");
    } else {
        auto os = open_out(g, "mc_curves.csv");
        variation::mc_curves_to_csv(os, curves);
    }
    // reference-current statistics
    ring::RingConfig at_ref = cfg.ring;
    at_ref.i_tail = cfg.mismatch.i_ref;
    const double f_ref = ring::frequency(at_ref);
    double mean = 0.0;
    RngStream root(cfg.seed, "variation.mc");
    std::vector<double> fs(curves.size());
    for (size_t k = 0; k < curves.size(); ++k) {
        RngStream rng = root.fork("run", k);
        const auto s = variation::sample_slope_scale(cfg.mismatch, rng);
        fs[k] = f_ref * (cfg.mismatch.i_ref < cfg.mismatch.knee ? s.m1 : s.m2);
        mean += fs[k];
    }
    mean /= fs.size();
    double ss = 0.0;
    for (double f : fs) ss += (f - mean) * (f - mean);
    const double sd = std::sqrt(ss / fs.size());
    std::printf("mc: %d runs, f(i_ref): mean %.4g MHz std %.4g MHz (cv %.3f%%)\n", cfg.mc_runs,
                mean / 1e6, sd / 1e6, 100.0 * sd / mean);
    return 0;
}

int cmd_extract_activation(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    const auto currents = sweep_currents(cfg.sweep);
    const auto curves = variation::mc_if_curves(cfg.ring, cfg.mismatch, cfg.mc_runs, currents,
                                                cfg.seed);
    const auto model = neuron::extract_activation(curves, cfg.activation.jitter_sigma);
    auto os = open_out(g, "activation_model.json");
    os << model.to_json() << "\n";
    std::printf("extract-activation: boundary %.4f, mu1 %.4f mu2 %.4f (sigma %.4f/%.4f)\n",
                model.boundary, model.mu1, model.mu2, model.sigma1, model.sigma2);
    return 0;
}

int cmd_nn_train(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    nn::Dataset data;
    std::string dataset_name = cfg.nn.dataset;
    if (cfg.nn.dataset == "idx") {
        const char* dir = std::getenv("CCOSIM_DATA_DIR");
        if (dir == nullptr) throw config::ConfigError("nn-train: CCOSIM_DATA_DIR not set");
        auto loaded = nn::Dataset::load_idx(dir);
        if (!loaded) throw config::ConfigError("nn-train: IDX files not found in CCOSIM_DATA_DIR");
        data = std::move(*loaded);
    } else if (cfg.nn.dataset == "bundled") {
        data = nn::Dataset::bundled_digits(cfg.nn.bundled_per_class);
    } else {
        throw config::ConfigError("nn-train: unknown dataset " + cfg.nn.dataset);
    }
    const auto mode = nn::mode_from_name(cfg.nn.mode);
    const auto res = nn::train_and_eval(data, cfg.nn.tcfg, cfg.activation, mode, cfg.seed);
    Table table({"dataset", "mode", "trial", "accuracy"});
    for (size_t k = 0; k < res.trials.size(); ++k) {
        if (res.trials[k].diverged) {
            std::fprintf(stderr, "nn-train: trial %zu diverged (excluded)\n", k);
            continue;
        }
        char acc[32];
        std::snprintf(acc, sizeof(acc), "%.6f", res.trials[k].accuracy);
        table.row({dataset_name, cfg.nn.mode, Table::integer(static_cast<long>(k)), acc});
    }
    table.write(g, "nn_results");
    std::printf("nn-train: %s mean accuracy %.4f (std %.4f, %d diverged)\n", cfg.nn.mode.c_str(),
                res.mean_accuracy, res.std_accuracy, res.diverged_count);
    return 0;
}

int cmd_spike_sim(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    const auto& sp = cfg.spiking;
    const std::vector<neuron::CurrentSegment> wave = {
        {0.0, 0.0}, {sp.step_start, sp.step_i}, {sp.step_stop, 0.0}};
    const auto spikes = neuron::spiking_response(wave, sp.duration, sp.scfg, cfg.ring);
    Table table({"spike_time_s"});
    for (double t : spikes) table.row({Table::num(t)});
    table.write(g, "spikes");
    std::printf("spike-sim: %zu spikes for a %.3g A step over [%g, %g] s\n", spikes.size(),
                sp.step_i, sp.step_start, sp.step_stop);
    return 0;
}

int cmd_fom(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    power::FomInputs in;
    in.power = cfg.fom.power;
    in.bandwidth = cfg.fom.bandwidth;
    in.enob = cfg.fom.enob >= 0.0
                  ? cfg.fom.enob
                  : power::fom_enob(cfg.fom.power, cfg.fom.target_fom, cfg.fom.bandwidth);
    const double f = power::fom(in);
    const auto pm = power::PowerModel::calibrated(cfg.ring);
    const auto currents = sweep_currents(cfg.sweep);
    const auto rows = power::energy_per_cycle_report(cfg.ring, currents, pm);
    if (g.format == "json") {
        Table table({"i_tail_a", "freq_hz", "power_w", "energy_per_cycle_j"});
        for (const auto& r : rows)
            table.row({Table::num(r.i_tail), Table::num(r.freq), Table::num(r.power),
                       Table::num(r.energy_per_cycle)});
        table.write(g, "energy_report");
    } else {
        auto os = open_out(g, "energy_report.csv");
        power::energy_report_to_csv(os, rows);
    }
    double emin = rows.front().energy_per_cycle, emax = emin;
    for (const auto& r : rows) {
        emin = std::min(emin, r.energy_per_cycle);
        emax = std::max(emax, r.energy_per_cycle);
    }
    std::printf("fom: ENOB %.4f -> %.4g fJ/conv; energy/cycle band [%.3f, %.3f] pJ\n", in.enob,
                f * 1e15, emin * 1e12, emax * 1e12);
    return 0;
}

int cmd_vi_map(const GlobalOpts& g) {
    const auto cfg = load_config(g);
    write_resolved_config(g, cfg);
    const double i = power::vi_map(cfg.vi_vdac, cfg.vi_isel_high);
    std::printf("vi-map: VDAC %.4g V, R_tot %.3g ohm -> %.6g A\n", cfg.vi_vdac,
                power::isel_resistance(cfg.vi_isel_high), i);
    Table table({"vdac_v", "r_tot_ohm", "i_a"});
    table.row({Table::num(cfg.vi_vdac), Table::num(power::isel_resistance(cfg.vi_isel_high)),
               Table::num(i)});
    table.write(g, "vi_map");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ccosim: differential CCO neuron simulator"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "run configuration JSON")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", g.seed, "root random seed");

    int (*handler)(const GlobalOpts&) = nullptr;
    const std::pair<const char*, std::pair<const char*, int (*)(const GlobalOpts&)>> cmds[] = {
        {"sweep-if", {"I-F transfer curves", cmd_sweep_if}},
        {"jitter", {"windowed-count jitter statistics", cmd_jitter}},
        {"tdc-sim", {"edge stream to TDC frame", cmd_tdc_sim}},
        {"lockstate", {"exhaustive Boolean lock-state analysis", cmd_lockstate}},
        {"mc", {"Monte-Carlo mismatch curves", cmd_mc}},
        {"extract-activation", {"fit the two-region activation model", cmd_extract_activation}},
        {"nn-train", {"train and evaluate the digit benchmark", cmd_nn_train}},
        {"spike-sim", {"spiking-mode step response", cmd_spike_sim}},
        {"fom", {"figure of merit and energy/cycle report", cmd_fom}},
        {"vi-map", {"V-I converter mapping", cmd_vi_map}},
    };
    for (const auto& [name, desc_fn] : cmds) {
        auto* sub = app.add_subcommand(name, desc_fn.first);
        sub->fallthrough();
        auto fn = desc_fn.second;
        sub->callback([&handler, fn] { handler = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    g.seed_set = seed_opt->count() > 0;

    try {
        return handler(g);
    } catch (const config::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
