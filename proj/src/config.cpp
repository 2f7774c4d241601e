#include "ccosim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ccosim::config {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& path) {
    if (!j.is_object()) throw ConfigError("config: expected object at " + path);
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key))
            throw ConfigError("config: unknown key '" + path + "/" + key + "'");
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_ring(const json& j, ring::RingConfig& r, const std::string& path) {
    reject_unknown(j,
                   {"n_stages", "topology", "cgd", "cgs", "vmax", "vmin", "vcm", "dv", "i_tail",
                    "v_swing", "beta_per_tail", "ode_beta_scale", "device"},
                   path);
    get_if(j, "n_stages", r.n_stages);
    if (j.contains("topology")) r.topo = stage::topology_from_name(j.at("topology").get<std::string>());
    get_if(j, "cgd", r.caps.cgd);
    get_if(j, "cgs", r.caps.cgs);
    get_if(j, "vmax", r.rails.vmax);
    get_if(j, "vmin", r.rails.vmin);
    get_if(j, "vcm", r.rails.vcm);
    if (j.contains("dv")) {
        const auto dv = j.at("dv").get<std::vector<double>>();
        if (dv.size() != 4) throw ConfigError("config: " + path + "/dv needs 4 entries");
        std::copy(dv.begin(), dv.end(), r.rails.dv.begin());
    }
    get_if(j, "i_tail", r.i_tail);
    get_if(j, "v_swing", r.v_swing);
    get_if(j, "beta_per_tail", r.beta_per_tail);
    get_if(j, "ode_beta_scale", r.ode_beta_scale);
    if (j.contains("device")) {
        const json& d = j.at("device");
        reject_unknown(d, {"beta", "vt", "alpha", "gamma"}, path + "/device");
        get_if(d, "beta", r.device.beta);
        get_if(d, "vt", r.device.vt);
        get_if(d, "alpha", r.device.alpha);
        get_if(d, "gamma", r.device.gamma);
    }
}

void parse_activation(const json& j, neuron::ActivationModel& a, const std::string& path) {
    reject_unknown(j,
                   {"mean_slope", "boundary", "mu1", "sigma1", "mu2", "sigma2", "jitter_sigma",
                    "clamp_negative"},
                   path);
    get_if(j, "mean_slope", a.mean_slope);
    get_if(j, "boundary", a.boundary);
    get_if(j, "mu1", a.mu1);
    get_if(j, "sigma1", a.sigma1);
    get_if(j, "mu2", a.mu2);
    get_if(j, "sigma2", a.sigma2);
    get_if(j, "jitter_sigma", a.jitter_sigma);
    get_if(j, "clamp_negative", a.clamp_negative);
}

}  // namespace

void RunConfig::validate() const {
    ring.validate();
    mismatch.validate();
    supply.validate();
    activation.validate();
    nn.tcfg.validate();
    spiking.scfg.validate();
    if (tdc.gc_bits < 1 || tdc.gc_bits > 31) throw ConfigError("config: tdc/gc_bits out of range");
    if (!(tdc_window > 0.0)) throw ConfigError("config: tdc/window must be > 0");
    if (mc_runs < 1) throw ConfigError("config: mc/runs must be >= 1");
    if (!(sweep.i_min > 0.0) || !(sweep.i_max > sweep.i_min) || sweep.points < 2)
        throw ConfigError("config: bad sweep section");
    if (jitter.trials < 2) throw ConfigError("config: jitter/trials must be >= 2");
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    reject_unknown(j,
                   {"schema_version", "seed", "ring", "jitter", "tdc", "mismatch", "supply",
                    "activation", "nn", "spiking", "sweep", "mc", "fom", "vi"},
                   "");
    RunConfig cfg;
    if (j.contains("schema_version")) {
        const int v = j.at("schema_version").get<int>();
        if (v != kSchemaVersion)
            throw ConfigError("config: unsupported schema_version " + std::to_string(v));
    }
    get_if(j, "seed", cfg.seed);
    if (j.contains("ring")) parse_ring(j.at("ring"), cfg.ring, "ring");
    if (j.contains("jitter")) {
        const json& s = j.at("jitter");
        reject_unknown(
            s, {"vdd", "gamma_n", "gamma_p", "window", "trials", "measured_calibration"},
            "jitter");
        get_if(s, "vdd", cfg.jitter.vdd);
        get_if(s, "gamma_n", cfg.jitter.gamma_n);
        get_if(s, "gamma_p", cfg.jitter.gamma_p);
        get_if(s, "window", cfg.jitter.window);
        get_if(s, "trials", cfg.jitter.trials);
        get_if(s, "measured_calibration", cfg.jitter.measured_calibration);
    }
    if (j.contains("tdc")) {
        const json& s = j.at("tdc");
        reject_unknown(s, {"gc_bits", "window"}, "tdc");
        get_if(s, "gc_bits", cfg.tdc.gc_bits);
        get_if(s, "window", cfg.tdc_window);
    }
    if (j.contains("mismatch")) {
        const json& s = j.at("mismatch");
        reject_unknown(s,
                       {"mean_f_ref", "sigma_f_ref", "cv", "i_ref", "knee", "mu1_rel",
                        "sigma1_rel", "mu2_rel", "sigma2_rel"},
                       "mismatch");
        get_if(s, "mean_f_ref", cfg.mismatch.mean_f_ref);
        get_if(s, "sigma_f_ref", cfg.mismatch.sigma_f_ref);
        cfg.mismatch.cv = cfg.mismatch.sigma_f_ref / cfg.mismatch.mean_f_ref;
        get_if(s, "cv", cfg.mismatch.cv);
        get_if(s, "i_ref", cfg.mismatch.i_ref);
        get_if(s, "knee", cfg.mismatch.knee);
        get_if(s, "mu1_rel", cfg.mismatch.mu1_rel);
        get_if(s, "sigma1_rel", cfg.mismatch.sigma1_rel);
        get_if(s, "mu2_rel", cfg.mismatch.mu2_rel);
        get_if(s, "sigma2_rel", cfg.mismatch.sigma2_rel);
    }
    if (j.contains("supply")) {
        const json& s = j.at("supply");
        reject_unknown(s, {"mean_pct", "std_pct", "vdd_min", "vdd_max", "temp_mean_pct", "temp_std_pct"}, "supply");
        get_if(s, "mean_pct", cfg.supply.mean_pct);
        get_if(s, "std_pct", cfg.supply.std_pct);
        get_if(s, "vdd_min", cfg.supply.vdd_min);
        get_if(s, "vdd_max", cfg.supply.vdd_max);
        get_if(s, "temp_mean_pct", cfg.supply.temp_mean_pct);
        get_if(s, "temp_std_pct", cfg.supply.temp_std_pct);
    }
    if (j.contains("activation")) parse_activation(j.at("activation"), cfg.activation, "activation");
    if (j.contains("nn")) {
        const json& s = j.at("nn");
        reject_unknown(s,
                       {"hidden", "epochs", "batch_size", "lr", "trials", "mode", "dataset",
                        "bundled_per_class"},
                       "nn");
        if (s.contains("hidden")) cfg.nn.tcfg.hidden = s.at("hidden").get<std::vector<int>>();
        get_if(s, "epochs", cfg.nn.tcfg.epochs);
        get_if(s, "batch_size", cfg.nn.tcfg.batch_size);
        get_if(s, "lr", cfg.nn.tcfg.lr);
        get_if(s, "trials", cfg.nn.tcfg.trials);
        get_if(s, "mode", cfg.nn.mode);
        get_if(s, "dataset", cfg.nn.dataset);
        get_if(s, "bundled_per_class", cfg.nn.bundled_per_class);
    }
    if (j.contains("spiking")) {
        const json& s = j.at("spiking");
        reject_unknown(s,
                       {"i_leak", "c_mirror", "pulse_charge", "spike_phase", "step_i",
                        "step_start", "step_stop", "duration"},
                       "spiking");
        get_if(s, "i_leak", cfg.spiking.scfg.i_leak);
        get_if(s, "c_mirror", cfg.spiking.scfg.c_mirror);
        get_if(s, "pulse_charge", cfg.spiking.scfg.pulse_charge);
        get_if(s, "spike_phase", cfg.spiking.scfg.spike_phase);
        get_if(s, "step_i", cfg.spiking.step_i);
        get_if(s, "step_start", cfg.spiking.step_start);
        get_if(s, "step_stop", cfg.spiking.step_stop);
        get_if(s, "duration", cfg.spiking.duration);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown(s, {"i_min", "i_max", "points"}, "sweep");
        get_if(s, "i_min", cfg.sweep.i_min);
        get_if(s, "i_max", cfg.sweep.i_max);
        get_if(s, "points", cfg.sweep.points);
    }
    if (j.contains("mc")) {
        const json& s = j.at("mc");
        reject_unknown(s, {"runs"}, "mc");
        get_if(s, "runs", cfg.mc_runs);
    }
    if (j.contains("fom")) {
        const json& s = j.at("fom");
        reject_unknown(s, {"power", "bandwidth", "target_fom", "enob"}, "fom");
        get_if(s, "power", cfg.fom.power);
        get_if(s, "bandwidth", cfg.fom.bandwidth);
        get_if(s, "target_fom", cfg.fom.target_fom);
        get_if(s, "enob", cfg.fom.enob);
    }
    if (j.contains("vi")) {
        const json& s = j.at("vi");
        reject_unknown(s, {"vdac", "isel_high"}, "vi");
        get_if(s, "vdac", cfg.vi_vdac);
        get_if(s, "isel_high", cfg.vi_isel_high);
    }
    try {
        cfg.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = seed;
    j["ring"] = {
        {"n_stages", ring.n_stages},
        {"topology", std::string(stage::topology_name(ring.topo))},
        {"cgd", ring.caps.cgd},
        {"cgs", ring.caps.cgs},
        {"vmax", ring.rails.vmax},
        {"vmin", ring.rails.vmin},
        {"vcm", ring.rails.vcm},
        {"dv", ring.rails.dv},
        {"i_tail", ring.i_tail},
        {"v_swing", ring.v_swing},
        {"beta_per_tail", ring.beta_per_tail},
        {"ode_beta_scale", ring.ode_beta_scale},
        {"device",
         {{"beta", ring.device.beta},
          {"vt", ring.device.vt},
          {"alpha", ring.device.alpha},
          {"gamma", ring.device.gamma}}},
    };
    j["jitter"] = {{"vdd", jitter.vdd},       {"gamma_n", jitter.gamma_n},
                   {"gamma_p", jitter.gamma_p}, {"window", jitter.window},
                   {"trials", jitter.trials},   {"measured_calibration", jitter.measured_calibration}};
    j["tdc"] = {{"gc_bits", tdc.gc_bits}, {"window", tdc_window}};
    j["mismatch"] = {{"mean_f_ref", mismatch.mean_f_ref},
                     {"sigma_f_ref", mismatch.sigma_f_ref},
                     {"cv", mismatch.cv},
                     {"i_ref", mismatch.i_ref},
                     {"knee", mismatch.knee},
                     {"mu1_rel", mismatch.mu1_rel},
                     {"sigma1_rel", mismatch.sigma1_rel},
                     {"mu2_rel", mismatch.mu2_rel},
                     {"sigma2_rel", mismatch.sigma2_rel}};
    j["supply"] = {{"mean_pct", supply.mean_pct},
                   {"std_pct", supply.std_pct},
                   {"vdd_min", supply.vdd_min},
                   {"vdd_max", supply.vdd_max},
                   {"temp_mean_pct", supply.temp_mean_pct},
                   {"temp_std_pct", supply.temp_std_pct}};
    j["activation"] = {{"mean_slope", activation.mean_slope}, {"boundary", activation.boundary},
                       {"mu1", activation.mu1},               {"sigma1", activation.sigma1},
                       {"mu2", activation.mu2},               {"sigma2", activation.sigma2},
                       {"jitter_sigma", activation.jitter_sigma},
                       {"clamp_negative", activation.clamp_negative}};
    j["nn"] = {{"hidden", nn.tcfg.hidden},
               {"epochs", nn.tcfg.epochs},
               {"batch_size", nn.tcfg.batch_size},
               {"lr", nn.tcfg.lr},
               {"trials", nn.tcfg.trials},
               {"mode", nn.mode},
               {"dataset", nn.dataset},
               {"bundled_per_class", nn.bundled_per_class}};
    j["spiking"] = {{"i_leak", spiking.scfg.i_leak},
                    {"c_mirror", spiking.scfg.c_mirror},
                    {"pulse_charge", spiking.scfg.pulse_charge},
                    {"spike_phase", spiking.scfg.spike_phase},
                    {"step_i", spiking.step_i},
                    {"step_start", spiking.step_start},
                    {"step_stop", spiking.step_stop},
                    {"duration", spiking.duration}};
    j["sweep"] = {{"i_min", sweep.i_min}, {"i_max", sweep.i_max}, {"points", sweep.points}};
    j["mc"] = {{"runs", mc_runs}};
    j["fom"] = {{"power", fom.power},
                {"bandwidth", fom.bandwidth},
                {"target_fom", fom.target_fom},
                {"enob", fom.enob}};
    j["vi"] = {{"vdac", vi_vdac}, {"isel_high", vi_isel_high}};
    return j.dump(2);
}

}  // namespace ccosim::config
