#include "ooblab/rt/session.hpp"

#include "ooblab/errors.hpp"

#include <cmath>
#include <fstream>

namespace ooblab::rt {

using nlohmann::json;

namespace {

double positive_number(const json& cmd, const char* key) {
    auto it = cmd.find(key);
    if (it == cmd.end() || !it->is_number())
        throw DomainError(std::string("'") + key + "' must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v) || !(v > 0.0))
        throw DomainError(std::string("'") + key + "' must be positive");
    return v;
}

} // namespace

SessionCore::SessionCore(harness::Scenario scenario, SessionOptions options)
    : sc_(std::move(scenario)), opt_(options) {
    if (!(opt_.bundle_s >= sc_.tick_s))
        throw ConfigError("bundle_s", "a bundle must span at least one tick");
    sc_.mode = opt_.mode;
    // The operator drives; a sensor-reading policy would fail validation outside invasive mode.
    if (sc_.attacker.policy.policy == attack::PolicyKind::auto_switching && sc_.mode != AttackMode::invasive)
        sc_.attacker.policy.policy = attack::PolicyKind::switching;
    sc_.report.write_trace = false;
    reset();
}

json SessionCore::error_frame(const std::string& message) { return {{"error", message}}; }

void SessionCore::reset() {
    sim_ = std::make_unique<harness::Simulation>(sc_);
    sim_->collect_observations(true);
    const auto& p = sc_.attacker.policy;
    drive_ = {};
    drive_.f1_hz = p.f1_hz > 0.0 ? p.f1_hz : p.frequency_hz;
    drive_.f2_hz = p.f2_hz > 0.0 ? p.f2_hz : drive_.f1_hz + p.step_hz;
    drive_.frequency_hz = p.frequency_hz > 0.0 ? p.frequency_hz : drive_.f1_hz;
    drive_.level = p.high;
    drive_.target = p.target;
    events_seen_ = 0;
    push_override();
}

void SessionCore::push_override() {
    sim_->set_override(attack::DriveCommand{drive_.frequency_hz, drive_.emitting ? drive_.level : 0.0});
}

std::optional<json> SessionCore::submit(const std::string& text) {
    json cmd;
    try {
        cmd = json::parse(text);
    } catch (const json::parse_error&) {
        return error_frame("malformed JSON");
    }
    if (!cmd.is_object() || !cmd.contains("cmd") || !cmd["cmd"].is_string())
        return error_frame("expected an object with a string 'cmd'");
    const std::string name = cmd["cmd"].get<std::string>();
    try {
        if (name == "set_frequency") {
            positive_number(cmd, "hz");
        } else if (name == "set_amplitude") {
            auto it = cmd.find("level");
            if (it == cmd.end() || !it->is_number() || !std::isfinite(it->get<double>()) || it->get<double>() < 0.0)
                throw DomainError("'level' must be a nonnegative number");
        } else if (name == "set_bracket") {
            const double f1 = positive_number(cmd, "f1");
            const double f2 = positive_number(cmd, "f2");
            if (!(f2 > f1))
                throw DomainError("bracket needs f1 < f2");
        } else if (name == "set_target") {
            auto it = cmd.find("dir");
            if (it == cmd.end() || !it->is_string())
                throw DomainError("'dir' must be \"pos\" or \"neg\"");
            const auto d = attack::direction_from_string(it->get<std::string>());
            if (d == attack::Direction::none)
                throw DomainError("'dir' must be \"pos\" or \"neg\"");
        } else if (name != "switch" && name != "start" && name != "stop" && name != "reset") {
            return error_frame("unknown command '" + name + "'");
        }
    } catch (const std::exception& e) {
        return error_frame(name + ": " + e.what());
    }
    queued_.push_back(std::move(cmd));
    return std::nullopt;
}

void SessionCore::apply(const json& cmd) {
    const std::string name = cmd["cmd"].get<std::string>();
    if (name == "set_frequency") {
        drive_.frequency_hz = cmd["hz"].get<double>();
    } else if (name == "set_amplitude") {
        drive_.level = cmd["level"].get<double>();
    } else if (name == "switch") {
        drive_.on_f2 = !drive_.on_f2;
        drive_.frequency_hz = drive_.on_f2 ? drive_.f2_hz : drive_.f1_hz;
        sim_->note("operator", "switch");
    } else if (name == "set_bracket") {
        drive_.f1_hz = cmd["f1"].get<double>();
        drive_.f2_hz = cmd["f2"].get<double>();
        drive_.on_f2 = false;
        drive_.frequency_hz = drive_.f1_hz;
    } else if (name == "set_target") {
        drive_.target = attack::direction_from_string(cmd["dir"].get<std::string>());
    } else if (name == "start") {
        drive_.emitting = true;
    } else if (name == "stop") {
        drive_.emitting = false;
    } else if (name == "reset") {
        reset();
        return;
    }
    push_override();
}

json SessionCore::advance() {
    for (auto& cmd : queued_) {
        apply(cmd);
        log_.push_back({bundle_, std::move(cmd)});
    }
    queued_.clear();

    const double end = sim_->time() + opt_.bundle_s;
    sim_->run_until(end);
    ++bundle_;

    const auto obs = sim_->take_observations();
    json o = {{"dir", "none"}, {"mag_class", 0}, {"level_class", 0}};
    if (!obs.empty()) {
        const auto& last = obs.back();
        o = {{"dir", attack::to_string(last.direction)},
             {"mag_class", last.magnitude_class},
             {"level_class", last.level_class}};
    }
    json events = json::array();
    const auto& ev = sim_->events();
    for (; events_seen_ < ev.size(); ++events_seen_)
        events.push_back({{"t", ev[events_seen_].time_s}, {"kind", ev[events_seen_].kind}});

    const auto& v = sim_->victim();
    json frame = {{"t", sim_->time()},
                  {"bundle", bundle_},
                  {"mode", harness::to_string(opt_.mode)},
                  {"obs", o},
                  {"pose", {{"theta", v.heading.theta}, {"actuation", sim_->last_actuation()}}},
                  {"drive",
                   {{"frequency_hz", drive_.frequency_hz},
                    {"f1_hz", drive_.f1_hz},
                    {"f2_hz", drive_.f2_hz},
                    {"level", drive_.level},
                    {"emitting", drive_.emitting}}},
                  {"target", attack::to_string(drive_.target)},
                  {"events", events}};
    if (opt_.mode == AttackMode::invasive)
        frame["sensor"] = {{"omega", v.heading.omega}};
    return frame;
}

std::unique_ptr<SessionCore> SessionCore::replay(const harness::Scenario& scenario, const SessionOptions& options,
                                                 const std::vector<LoggedCommand>& log, std::int64_t bundles) {
    auto core = std::make_unique<SessionCore>(scenario, options);
    std::size_t next = 0;
    for (std::int64_t b = 0; b < bundles; ++b) {
        while (next < log.size() && log[next].bundle == b)
            core->queued_.push_back(log[next++].command);
        core->advance();
    }
    return core;
}

void write_command_log(const std::string& path, const std::vector<LoggedCommand>& log) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write command log " + path);
    for (const auto& c : log)
        out << json{{"bundle", c.bundle}, {"command", c.command}}.dump() << '\n';
}

std::vector<LoggedCommand> read_command_log(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "cannot open command log");
    std::vector<LoggedCommand> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const json j = json::parse(line);
        out.push_back({j.at("bundle").get<std::int64_t>(), j.at("command")});
    }
    return out;
}

} // namespace ooblab::rt
