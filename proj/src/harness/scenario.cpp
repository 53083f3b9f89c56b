#include "ooblab/harness/scenario.hpp"

#include "ooblab/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace ooblab::harness {

using nlohmann::json;

const char* to_string(ChannelKind k) { return k == ChannelKind::acoustic ? "acoustic" : "vibration"; }
const char* to_string(ObserverKind k) { return k == ObserverKind::actuation ? "actuation" : "ideal"; }
const char* to_string(AttackMode m) { return m == AttackMode::non_invasive ? "non_invasive" : "invasive"; }

AttackMode attack_mode_from_string(const std::string& s) {
    if (s == "non_invasive")
        return AttackMode::non_invasive;
    if (s == "invasive")
        return AttackMode::invasive;
    throw ConfigError("", "unknown mode '" + s + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Field reader that tracks consumed keys so leftovers can be reported by path.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object())
            throw ConfigError(path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void num(const std::string& key, double& out, bool null_is_inf = false) {
        if (const json* v = find(key)) {
            if (v->is_null() && null_is_inf)
                out = kInf;
            else if (v->is_number())
                out = v->get<double>();
            else
                throw ConfigError(at(key), "expected a number");
        }
    }
    void num(const std::string& key, std::optional<double>& out) {
        if (const json* v = find(key)) {
            if (v->is_null())
                out.reset();
            else if (v->is_number())
                out = v->get<double>();
            else
                throw ConfigError(at(key), "expected a number or null");
        }
    }
    void integer(const std::string& key, int& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer())
                throw ConfigError(at(key), "expected an integer");
            out = v->get<int>();
        }
    }
    void u64(const std::string& key, std::uint64_t& out) {
        if (const json* v = find(key)) {
            if (v->is_number_unsigned())
                out = v->get<std::uint64_t>();
            else if (v->is_number_integer() && v->get<std::int64_t>() >= 0)
                out = static_cast<std::uint64_t>(v->get<std::int64_t>());
            else
                throw ConfigError(at(key), "expected a nonnegative integer");
        }
    }
    void boolean(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean())
                throw ConfigError(at(key), "expected true or false");
            out = v->get<bool>();
        }
    }
    void str(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string())
                throw ConfigError(at(key), "expected a string");
            out = v->get<std::string>();
        }
    }
    void numbers(const std::string& key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array())
                throw ConfigError(at(key), "expected an array of numbers");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number())
                    throw ConfigError(at(key), "expected an array of numbers");
                out.push_back(e.get<double>());
            }
        }
    }
    template <class Enum, class Parse>
    void enumeration(const std::string& key, Enum& out, Parse parse) {
        std::string s;
        if (find(key) == nullptr)
            return;
        str(key, s);
        try {
            out = parse(s);
        } catch (const ConfigError& e) {
            throw ConfigError(at(key), e.what());
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(at(it.key()), "unknown field");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

json inf_or(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---- defense ----

victims::DefenseConfig parse_defense(const json& j, const std::string& path) {
    victims::DefenseConfig d;
    Fields f(j, path);
    f.num("analog_lpf_hz", d.analog_lpf_hz);
    f.num("digital_lpf_hz", d.digital_lpf_hz);
    f.enumeration("sampling", d.sampling, victims::sampling_strategy_from_string);
    f.num("max_jitter_s", d.max_jitter_s);
    f.num("assumed_frequency_hz", d.assumed_frequency_hz);
    f.numbers("rates_hz", d.rates_hz);
    f.num("dwell_s", d.dwell_s);
    f.u64("seed", d.seed);
    f.finish();
    victims::validate(d, path);
    return d;
}

json defense_json(const victims::DefenseConfig& d) {
    return {{"analog_lpf_hz", opt(d.analog_lpf_hz)},
            {"digital_lpf_hz", opt(d.digital_lpf_hz)},
            {"sampling", victims::to_string(d.sampling)},
            {"max_jitter_s", d.max_jitter_s},
            {"assumed_frequency_hz", d.assumed_frequency_hz},
            {"rates_hz", d.rates_hz},
            {"dwell_s", d.dwell_s},
            {"seed", d.seed}};
}

// ---- channel ----

core::DriftKind drift_kind_from_string(const std::string& s) {
    if (s == "none")
        return core::DriftKind::none;
    if (s == "linear")
        return core::DriftKind::linear;
    if (s == "random_walk")
        return core::DriftKind::random_walk;
    throw ConfigError("", "unknown drift model '" + s + "'");
}

ChannelConfig parse_channel(const json& j, const std::string& path) {
    ChannelConfig c;
    Fields f(j, path);
    f.enumeration("kind", c.kind, [](const std::string& s) {
        if (s == "acoustic")
            return ChannelKind::acoustic;
        if (s == "vibration")
            return ChannelKind::vibration;
        throw ConfigError("", "unknown channel kind '" + s + "'");
    });
    if (const json* s = f.find("source")) {
        Fields g(*s, f.at("source"));
        g.num("spl_ref_db", c.source.spl_ref_db);
        g.num("reference_distance_m", c.source.reference_distance_m);
        g.integer("n_sources", c.source.n_sources);
        if (const json* r = g.find("response")) {
            std::vector<std::pair<double, double>> pts;
            if (!r->is_array())
                throw ConfigError(g.at("response"), "expected [[frequency_hz, offset_db], ...]");
            for (const auto& p : *r) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                    throw ConfigError(g.at("response"), "expected [[frequency_hz, offset_db], ...]");
                pts.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
            try {
                c.source.response = channel::FrequencyResponse(std::move(pts));
            } catch (const std::exception& e) {
                throw ConfigError(g.at("response"), e.what());
            }
        }
        g.finish();
        if (!(c.source.reference_distance_m > 0.0))
            throw ConfigError(g.at("reference_distance_m"), "must be positive");
        if (c.source.n_sources < 1)
            throw ConfigError(g.at("n_sources"), "must be at least 1");
    }
    f.num("distance_m", c.distance_m);
    if (const json* fr = f.find("front"); fr && !fr->is_null()) {
        Fields g(*fr, f.at("front"));
        double lo = 0.0, hi = 0.0, f0 = 0.0, q = 0.0, ks = 1.0, ka = 1.0;
        g.num("f_lo", lo);
        g.num("f_hi", hi);
        g.num("f0", f0);
        g.num("q", q);
        g.num("sensitivity", ks);
        g.num("attenuation", ka);
        g.finish();
        if (!(hi > lo) || !(lo > 0.0))
            throw ConfigError(g.at("f_hi"), "band needs 0 < f_lo < f_hi");
        if (f0 == 0.0 && q == 0.0) {
            c.front = channel::ResonantFront::from_band(lo, hi, ks, ka);
        } else {
            c.front = {lo, hi, f0, q, ks, ka};
        }
        try {
            channel::validate(c.front);
        } catch (const std::exception& e) {
            throw ConfigError(g.at("f0"), e.what());
        }
    }
    if (const json* cal = f.find("calibration")) {
        if (!cal->is_null()) {
            Fields g(*cal, f.at("calibration"));
            ChannelCalibration k;
            g.num("frequency_hz", k.frequency_hz);
            g.num("peak_output", k.peak_output);
            g.finish();
            if (!(k.frequency_hz > 0.0) || !(k.peak_output > 0.0))
                throw ConfigError(f.at("calibration"), "needs positive frequency_hz and peak_output");
            c.calibration = k;
        }
    }
    if (const json* v = f.find("vibration")) {
        Fields g(*v, f.at("vibration"));
        g.num("coupling_gain", c.vibration.coupling_gain);
        g.integer("axis", c.vibration.axis);
        g.finish();
        if (!(c.vibration.coupling_gain >= 0.0))
            throw ConfigError(g.at("coupling_gain"), "must be nonnegative");
    }
    f.finish();
    if (!(c.distance_m > 0.0))
        throw ConfigError(f.at("distance_m"), "must be positive");
    if (c.kind == ChannelKind::acoustic && !(c.front.f_hi > c.front.f_lo))
        throw ConfigError(f.at("front"), "acoustic channel needs a resonant band");
    return c;
}

json channel_json(const ChannelConfig& c) {
    json resp = json::array();
    for (const auto& [fr, db] : c.source.response.points())
        resp.push_back({fr, db});
    json j = {{"kind", to_string(c.kind)},
              {"source",
               {{"spl_ref_db", c.source.spl_ref_db},
                {"reference_distance_m", c.source.reference_distance_m},
                {"n_sources", c.source.n_sources},
                {"response", resp}}},
              {"distance_m", c.distance_m},
              {"front", nullptr},
              {"calibration", nullptr},
              {"vibration", {{"coupling_gain", c.vibration.coupling_gain}, {"axis", c.vibration.axis}}}};
    if (c.front.f_hi > c.front.f_lo)
        j["front"] = {{"f_lo", c.front.f_lo},
                      {"f_hi", c.front.f_hi},
                      {"f0", c.front.f0},
                      {"q", c.front.q},
                      {"sensitivity", c.front.sensitivity},
                      {"attenuation", c.front.attenuation}};
    if (c.calibration)
        j["calibration"] = {{"frequency_hz", c.calibration->frequency_hz},
                            {"peak_output", c.calibration->peak_output}};
    return j;
}

// ---- rig ----

RigConfig parse_rig(const json& j, const std::string& path) {
    RigConfig r;
    Fields f(j, path);
    f.enumeration("kind", r.kind, victims::sensor_kind_from_string);
    f.integer("axis", r.axis);
    if (const json* s = f.find("sampler")) {
        Fields g(*s, f.at("sampler"));
        auto& sm = r.sampler;
        g.num("nominal_rate_hz", sm.nominal_rate_hz);
        g.integer("resolution_bits", sm.resolution_bits);
        g.num("full_scale", sm.full_scale);
        if (const json* d = g.find("drift")) {
            Fields h(*d, g.at("drift"));
            h.enumeration("kind", sm.drift.kind, drift_kind_from_string);
            h.num("rate_hz_per_s", sm.drift.rate_hz_per_s);
            h.num("ramp_s", sm.drift.ramp_s);
            h.num("step_stddev", sm.drift.step_stddev);
            h.u64("seed", sm.drift.seed);
            h.finish();
        }
        if (const json* d = g.find("defense")) {
            if (!d->is_null())
                sm.defense = parse_defense(*d, g.at("defense"));
        }
        g.finish();
        try {
            core::validate(sm);
        } catch (const DomainError& e) {
            throw ConfigError(f.at("sampler"), e.what());
        }
    }
    f.num("initial_phase", r.initial_phase);
    f.boolean("random_phase", r.random_phase);
    f.num("baseline", r.baseline);
    if (const json* b = f.find("benign")) {
        Fields g(*b, f.at("benign"));
        g.num("amplitude", r.benign_amplitude);
        g.num("frequency_hz", r.benign_frequency_hz);
        g.finish();
    }
    f.enumeration("integration", r.integration, [](const std::string& s) {
        if (s == "rectangular")
            return victims::IntegrationRule::rectangular;
        if (s == "trapezoidal")
            return victims::IntegrationRule::trapezoidal;
        throw ConfigError("", "unknown integration rule '" + s + "'");
    });
    f.finish();
    if (r.axis < 0 || r.axis > 2)
        throw ConfigError(f.at("axis"), "axis must be 0, 1 or 2");
    return r;
}

json rig_json(const RigConfig& r) {
    const auto& sm = r.sampler;
    json sampler = {{"nominal_rate_hz", sm.nominal_rate_hz},
                    {"resolution_bits", sm.resolution_bits},
                    {"full_scale", sm.full_scale},
                    {"drift",
                     {{"kind", core::to_string(sm.drift.kind)},
                      {"rate_hz_per_s", sm.drift.rate_hz_per_s},
                      {"ramp_s", sm.drift.ramp_s},
                      {"step_stddev", sm.drift.step_stddev},
                      {"seed", sm.drift.seed}}},
                    {"defense", sm.defense ? defense_json(*sm.defense) : json(nullptr)}};
    return {{"kind", victims::to_string(r.kind)},
            {"axis", r.axis},
            {"sampler", sampler},
            {"initial_phase", r.initial_phase},
            {"random_phase", r.random_phase},
            {"baseline", r.baseline},
            {"benign", {{"amplitude", r.benign_amplitude}, {"frequency_hz", r.benign_frequency_hz}}},
            {"integration", r.integration == victims::IntegrationRule::rectangular ? "rectangular" : "trapezoidal"}};
}

// ---- victim / observer ----

victims::VictimModel parse_victim(const json& j, const std::string& path) {
    victims::VictimModel m;
    Fields f(j, path);
    f.enumeration("kind", m.kind, victims::victim_kind_from_string);
    f.num("kp", m.kp);
    f.num("kd", m.kd);
    f.num("tilt_fault_rad", m.tilt_fault_rad, true);
    f.num("calibration_rate", m.calibration_rate);
    if (const json* a = f.find("calibrated_axes")) {
        if (!a->is_array() || a->size() != 3)
            throw ConfigError(f.at("calibrated_axes"), "expected three booleans");
        for (std::size_t i = 0; i < 3; ++i) {
            if (!(*a)[i].is_boolean())
                throw ConfigError(f.at("calibrated_axes"), "expected three booleans");
            m.calibrated_axes[i] = (*a)[i].get<bool>();
        }
    }
    f.num("actuation_gain", m.actuation_gain);
    f.num("fault_threshold", m.fault_threshold, true);
    f.num("window_s", m.window_s);
    f.num("reference", m.reference);
    f.finish();
    victims::validate(m, path);
    return m;
}

json victim_json(const victims::VictimModel& m) {
    return {{"kind", victims::to_string(m.kind)},
            {"kp", m.kp},
            {"kd", m.kd},
            {"tilt_fault_rad", inf_or(m.tilt_fault_rad)},
            {"calibration_rate", m.calibration_rate},
            {"calibrated_axes", {m.calibrated_axes[0], m.calibrated_axes[1], m.calibrated_axes[2]}},
            {"actuation_gain", m.actuation_gain},
            {"fault_threshold", inf_or(m.fault_threshold)},
            {"window_s", m.window_s},
            {"reference", m.reference}};
}

ObserverConfig parse_observer(const json& j, const std::string& path) {
    ObserverConfig o;
    Fields f(j, path);
    f.enumeration("kind", o.kind, [](const std::string& s) {
        if (s == "actuation")
            return ObserverKind::actuation;
        if (s == "ideal")
            return ObserverKind::ideal;
        throw ConfigError("", "unknown observer kind '" + s + "'");
    });
    f.numbers("bins", o.model.bins);
    f.num("polarity", o.model.polarity);
    f.num("latency_s", o.model.latency_s);
    f.num("level_bin", o.model.level_bin);
    f.finish();
    attack::validate(o.model, path);
    return o;
}

json observer_json(const ObserverConfig& o) {
    return {{"kind", to_string(o.kind)},
            {"bins", o.model.bins},
            {"polarity", o.model.polarity},
            {"latency_s", o.model.latency_s},
            {"level_bin", o.model.level_bin}};
}

// ---- attacker ----

AttackerConfig parse_attacker(const json& j, const std::string& path) {
    AttackerConfig a;
    auto& p = a.policy;
    Fields f(j, path);
    f.enumeration("policy", p.policy, attack::policy_kind_from_string);
    f.enumeration("target", p.target, attack::direction_from_string);
    f.num("high", p.high);
    f.num("low", p.low);
    f.num("step_hz", p.step_hz);
    f.num("frequency_hz", p.frequency_hz);
    f.num("f1_hz", p.f1_hz);
    f.num("f2_hz", p.f2_hz);
    f.enumeration("switch_rule", p.switch_rule, attack::switch_rule_from_string);
    f.integer("switch_threshold_class", p.switch_threshold_class);
    f.num("switch_threshold", p.switch_threshold);
    f.num("reaction_delay_s", p.reaction_delay_s);
    f.boolean("adaptive", p.adaptive);
    f.num("assumed_epsilon_hz", p.assumed_epsilon_hz);
    f.integer("desired_level_class", p.desired_level_class);
    f.num("start_s", a.start_s);
    f.num("stop_s", a.stop_s, true);
    if (const json* s = f.find("schedule")) {
        if (!s->is_array())
            throw ConfigError(f.at("schedule"), "expected an array");
        for (std::size_t i = 0; i < s->size(); ++i) {
            const std::string ep = f.at("schedule") + "[" + std::to_string(i) + "]";
            Fields g((*s)[i], ep);
            ScheduleEntry e;
            g.num("at_s", e.at_s);
            if (g.find("target")) {
                attack::Direction d{};
                g.enumeration("target", d, attack::direction_from_string);
                e.target = d;
            }
            if (g.find("desired_level_class")) {
                int v = 0;
                g.integer("desired_level_class", v);
                e.desired_level_class = v;
            }
            if (g.find("emit")) {
                bool v = true;
                g.boolean("emit", v);
                e.emit = v;
            }
            g.finish();
            if (!a.schedule.empty() && e.at_s < a.schedule.back().at_s)
                throw ConfigError(ep + ".at_s", "schedule must be in time order");
            a.schedule.push_back(e);
        }
    }
    if (const json* s = f.find("sync")) {
        Fields g(*s, f.at("sync"));
        auto& o = a.sync.options;
        g.boolean("enabled", a.sync.enabled);
        g.num("start_frequency_hz", a.sync.start_frequency_hz);
        g.num("budget_s", o.budget_s);
        g.num("coarse_step_hz", o.coarse_step_hz);
        g.num("fine_step_hz", o.fine_step_hz);
        g.num("window_s", o.window_s);
        g.num("max_window_s", o.max_window_s);
        g.integer("min_changes", o.min_changes);
        g.num("level", o.level);
        g.num("target_epsilon_hz", o.target_epsilon_hz);
        g.num("min_epsilon_hz", o.min_epsilon_hz);
        g.finish();
        if (a.sync.enabled && !(a.sync.start_frequency_hz > 0.0))
            throw ConfigError(g.at("start_frequency_hz"), "must be positive when sync is enabled");
    }
    if (const json* s = f.find("profile")) {
        Fields g(*s, f.at("profile"));
        auto& o = a.profile.options;
        g.boolean("enabled", a.profile.enabled);
        g.num("sweep_lo_hz", o.sweep_lo_hz);
        g.num("sweep_hi_hz", o.sweep_hi_hz);
        g.num("coarse_step_hz", o.coarse_step_hz);
        g.num("fine_step_hz", o.fine_step_hz);
        g.num("start_offset_hz", o.start_offset_hz);
        g.num("window_s", o.window_s);
        g.num("level", o.level);
        g.finish();
        if (a.profile.enabled && !(o.sweep_hi_hz > o.sweep_lo_hz && o.sweep_lo_hz > 0.0))
            throw ConfigError(g.at("sweep_hi_hz"), "profile sweep needs 0 < sweep_lo_hz < sweep_hi_hz");
    }
    f.finish();
    p.f2_hz = p.f2_hz == 0.0 && p.f1_hz > 0.0 ? p.f1_hz + p.step_hz : p.f2_hz;
    if (a.sync.enabled) {
        // The policy frequencies come out of synchronization.
        if (p.frequency_hz == 0.0)
            p.frequency_hz = a.sync.start_frequency_hz;
        if (p.f1_hz == 0.0) {
            p.f1_hz = a.sync.start_frequency_hz;
            p.f2_hz = p.f1_hz + p.step_hz;
        }
    }
    if ((p.policy == attack::PolicyKind::switching || p.policy == attack::PolicyKind::auto_switching) &&
        p.frequency_hz == 0.0)
        p.frequency_hz = p.f1_hz;
    attack::validate(p, path);
    if (!(a.stop_s > a.start_s) || !(a.start_s >= 0.0))
        throw ConfigError(f.at("stop_s"), "need 0 <= start_s < stop_s");
    a.sync.options.policy = p.policy;
    a.sync.options.step_hz = p.step_hz;
    return a;
}

json attacker_json(const AttackerConfig& a) {
    const auto& p = a.policy;
    json sched = json::array();
    for (const auto& e : a.schedule) {
        json je = {{"at_s", e.at_s}};
        if (e.target)
            je["target"] = attack::to_string(*e.target);
        if (e.desired_level_class)
            je["desired_level_class"] = *e.desired_level_class;
        if (e.emit)
            je["emit"] = *e.emit;
        sched.push_back(je);
    }
    const auto& so = a.sync.options;
    const auto& po = a.profile.options;
    return {{"policy", attack::to_string(p.policy)},
            {"target", attack::to_string(p.target)},
            {"high", p.high},
            {"low", p.low},
            {"step_hz", p.step_hz},
            {"frequency_hz", p.frequency_hz},
            {"f1_hz", p.f1_hz},
            {"f2_hz", p.f2_hz},
            {"switch_rule", attack::to_string(p.switch_rule)},
            {"switch_threshold_class", p.switch_threshold_class},
            {"switch_threshold", p.switch_threshold},
            {"reaction_delay_s", p.reaction_delay_s},
            {"adaptive", p.adaptive},
            {"assumed_epsilon_hz", p.assumed_epsilon_hz},
            {"desired_level_class", p.desired_level_class},
            {"start_s", a.start_s},
            {"stop_s", inf_or(a.stop_s)},
            {"schedule", sched},
            {"sync",
             {{"enabled", a.sync.enabled},
              {"start_frequency_hz", a.sync.start_frequency_hz},
              {"budget_s", so.budget_s},
              {"coarse_step_hz", so.coarse_step_hz},
              {"fine_step_hz", so.fine_step_hz},
              {"window_s", so.window_s},
              {"max_window_s", so.max_window_s},
              {"min_changes", so.min_changes},
              {"level", so.level},
              {"target_epsilon_hz", so.target_epsilon_hz},
              {"min_epsilon_hz", so.min_epsilon_hz}}},
            {"profile",
             {{"enabled", a.profile.enabled},
              {"sweep_lo_hz", po.sweep_lo_hz},
              {"sweep_hi_hz", po.sweep_hi_hz},
              {"coarse_step_hz", po.coarse_step_hz},
              {"fine_step_hz", po.fine_step_hz},
              {"start_offset_hz", po.start_offset_hz},
              {"window_s", po.window_s},
              {"level", po.level}}}};
}

} // namespace

void validate(const Scenario& s) {
    if (s.duration_s <= 0.0 || !std::isfinite(s.duration_s))
        throw ConfigError("duration_s", "must be positive and finite");
    if (!(s.tick_s > 0.0))
        throw ConfigError("tick_s", "must be positive");
    if (s.tick_s > 0.5 / s.rig.sampler.nominal_rate_hz + 1e-15)
        throw ConfigError("tick_s", "must not exceed half the nominal sample period");
    if (s.attacker.policy.policy == attack::PolicyKind::auto_switching && s.mode != AttackMode::invasive)
        throw ConfigError("attacker.policy", "auto_switching reads the sensor and needs mode 'invasive'");
    if (s.channel.kind == ChannelKind::acoustic && s.channel.calibration &&
        s.channel.front.gain(s.channel.calibration->frequency_hz) <= 0.0)
        throw ConfigError("channel.calibration.frequency_hz", "calibration frequency lies outside the resonant band");
    if (!(s.report.telemetry_interval_s > 0.0))
        throw ConfigError("report.telemetry_interval_s", "must be positive");
    for (std::size_t i = 0; i < s.checks.size(); ++i)
        if (!s.checks[i].rel_tol && !s.checks[i].abs_tol)
            throw ConfigError("checks[" + std::to_string(i) + "]", "needs rel_tol or abs_tol");
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    Fields f(j, "");
    std::string schema;
    f.str("schema", schema);
    if (schema != kSchema)
        throw ConfigError("schema", std::string("expected \"") + kSchema + "\"");
    f.str("name", s.name);
    f.str("description", s.description);
    f.u64("seed", s.seed);
    f.num("duration_s", s.duration_s);
    f.num("tick_s", s.tick_s);
    f.enumeration("mode", s.mode, attack_mode_from_string);
    if (const json* v = f.find("channel"))
        s.channel = parse_channel(*v, "channel");
    if (const json* v = f.find("rig"))
        s.rig = parse_rig(*v, "rig");
    if (const json* v = f.find("victim"))
        s.victim = parse_victim(*v, "victim");
    if (const json* v = f.find("observer"))
        s.observer = parse_observer(*v, "observer");
    if (const json* v = f.find("attacker"))
        s.attacker = parse_attacker(*v, "attacker");
    else
        throw ConfigError("attacker", "missing attacker block");
    if (const json* v = f.find("defense_matrix")) {
        if (!v->is_array())
            throw ConfigError("defense_matrix", "expected an array");
        for (std::size_t i = 0; i < v->size(); ++i) {
            const std::string p = "defense_matrix[" + std::to_string(i) + "]";
            Fields g((*v)[i], p);
            NamedDefense d;
            g.str("name", d.name);
            if (const json* dj = g.find("defense"))
                d.defense = parse_defense(*dj, p + ".defense");
            g.finish();
            if (d.name.empty())
                throw ConfigError(p + ".name", "defense rows need a name");
            s.defense_matrix.push_back(std::move(d));
        }
    }
    if (const json* v = f.find("fs_sweep")) {
        if (!v->is_null()) {
            Fields g(*v, "fs_sweep");
            FsSweep w;
            g.num("start_hz", w.start_hz);
            g.num("stop_hz", w.stop_hz);
            g.num("step_hz", w.step_hz);
            g.num("dwell_s", w.dwell_s);
            g.num("level", w.level);
            g.num("dc_threshold_hz", w.dc_threshold_hz);
            g.finish();
            if (!(w.stop_hz > w.start_hz) || !(w.start_hz > 0.0) || !(w.step_hz > 0.0) || !(w.dwell_s > 0.0))
                throw ConfigError("fs_sweep", "needs 0 < start_hz < stop_hz and positive step_hz, dwell_s");
            s.fs_sweep = w;
        }
    }
    if (const json* v = f.find("checks")) {
        if (!v->is_array())
            throw ConfigError("checks", "expected an array");
        for (std::size_t i = 0; i < v->size(); ++i) {
            Fields g((*v)[i], "checks[" + std::to_string(i) + "]");
            Check c;
            g.str("metric", c.metric);
            g.num("target", c.target);
            g.num("rel_tol", c.rel_tol);
            g.num("abs_tol", c.abs_tol);
            g.finish();
            s.checks.push_back(c);
        }
    }
    if (const json* v = f.find("report")) {
        Fields g(*v, "report");
        g.num("telemetry_interval_s", s.report.telemetry_interval_s);
        g.boolean("write_trace", s.report.write_trace);
        g.boolean("calibration_reproduction", s.report.calibration_reproduction);
        g.str("note", s.report.note);
        g.finish();
    }
    f.find("variants"); // handled by expand_variants
    f.finish();
    validate(s);
    return s;
}

json scenario_to_json(const Scenario& s) {
    json matrix = json::array();
    for (const auto& d : s.defense_matrix)
        matrix.push_back({{"name", d.name}, {"defense", defense_json(d.defense)}});
    json checks = json::array();
    for (const auto& c : s.checks) {
        json jc = {{"metric", c.metric}, {"target", c.target}};
        if (c.rel_tol)
            jc["rel_tol"] = *c.rel_tol;
        if (c.abs_tol)
            jc["abs_tol"] = *c.abs_tol;
        checks.push_back(jc);
    }
    json sweep = nullptr;
    if (s.fs_sweep)
        sweep = {{"start_hz", s.fs_sweep->start_hz},   {"stop_hz", s.fs_sweep->stop_hz},
                 {"step_hz", s.fs_sweep->step_hz},     {"dwell_s", s.fs_sweep->dwell_s},
                 {"level", s.fs_sweep->level},         {"dc_threshold_hz", s.fs_sweep->dc_threshold_hz}};
    return {{"schema", kSchema},
            {"name", s.name},
            {"description", s.description},
            {"seed", s.seed},
            {"duration_s", s.duration_s},
            {"tick_s", s.tick_s},
            {"mode", to_string(s.mode)},
            {"channel", channel_json(s.channel)},
            {"rig", rig_json(s.rig)},
            {"victim", victim_json(s.victim)},
            {"observer", observer_json(s.observer)},
            {"attacker", attacker_json(s.attacker)},
            {"defense_matrix", matrix},
            {"fs_sweep", sweep},
            {"checks", checks},
            {"report",
             {{"telemetry_interval_s", s.report.telemetry_interval_s},
              {"write_trace", s.report.write_trace},
              {"calibration_reproduction", s.report.calibration_reproduction},
              {"note", s.report.note}}}};
}

std::vector<std::pair<std::string, Scenario>> expand_variants(const json& doc) {
    std::vector<std::pair<std::string, Scenario>> out;
    json base = doc;
    json variants = json::object();
    if (base.is_object() && base.contains("variants")) {
        variants = base["variants"];
        base.erase("variants");
        if (!variants.is_object())
            throw ConfigError("variants", "expected an object of merge patches");
    }
    out.emplace_back("base", scenario_from_json(base));
    for (auto it = variants.begin(); it != variants.end(); ++it) {
        json patched = base;
        patched.merge_patch(it.value());
        try {
            out.emplace_back(it.key(), scenario_from_json(patched));
        } catch (const ConfigError& e) {
            throw ConfigError("variants." + it.key() + (e.path().empty() ? "" : "." + e.path()),
                              std::string(e.what()).substr(e.path().empty() ? 0 : e.path().size() + 2));
        }
    }
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "cannot open scenario file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, std::string("malformed JSON: ") + e.what());
    }
}

std::vector<std::pair<std::string, Scenario>> load_scenario_file(const std::string& path) {
    return expand_variants(read_json_file(path));
}

} // namespace ooblab::harness
