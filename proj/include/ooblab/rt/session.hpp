#pragma once

#include "ooblab/harness/scenario.hpp"
#include "ooblab/harness/simulation.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ooblab::rt {

using harness::AttackMode;

struct SessionOptions {
    AttackMode mode = AttackMode::non_invasive;
    double bundle_s = 0.05; // simulated time per telemetry frame
};

/// A command as applied: the tick boundary it took effect at plus the validated message.
struct LoggedCommand {
    std::int64_t bundle = 0;
    nlohmann::json command;
};

/// Operator-driven drive state: the console tunes these directly.
struct ManualDrive {
    double frequency_hz = 0.0;
    double f1_hz = 0.0;
    double f2_hz = 0.0;
    bool on_f2 = false;
    double level = 1.0;
    bool emitting = false;
    attack::Direction target = attack::Direction::positive;
};

/// The simulation side of a live session, free of networking.
/// Commands are validated on submit and applied at the next bundle boundary;
/// advance() runs one bundle and returns the telemetry frame.
class SessionCore {
public:
    SessionCore(harness::Scenario scenario, SessionOptions options);

    /// Parse and queue one client frame. Returns an error frame on malformed input;
    /// the session is unaffected in that case.
    std::optional<nlohmann::json> submit(const std::string& text);

    nlohmann::json advance();

    const std::vector<LoggedCommand>& command_log() const noexcept { return log_; }
    const harness::Simulation& simulation() const noexcept { return *sim_; }
    const ManualDrive& drive() const noexcept { return drive_; }
    std::int64_t bundle() const noexcept { return bundle_; }
    const SessionOptions& options() const noexcept { return opt_; }

    /// Re-run a recorded log for `bundles` bundles on a fresh session.
    static std::unique_ptr<SessionCore> replay(const harness::Scenario& scenario, const SessionOptions& options,
                                               const std::vector<LoggedCommand>& log, std::int64_t bundles);

    static nlohmann::json error_frame(const std::string& message);

private:
    void apply(const nlohmann::json& cmd);
    void reset();
    void push_override();

    harness::Scenario sc_;
    SessionOptions opt_;
    std::unique_ptr<harness::Simulation> sim_;
    ManualDrive drive_;
    std::vector<nlohmann::json> queued_;
    std::vector<LoggedCommand> log_;
    std::int64_t bundle_ = 0;
    std::size_t events_seen_ = 0;
};

/// JSON lines: {"bundle":N,"command":{...}}
void write_command_log(const std::string& path, const std::vector<LoggedCommand>& log);
std::vector<LoggedCommand> read_command_log(const std::string& path);

} // namespace ooblab::rt
