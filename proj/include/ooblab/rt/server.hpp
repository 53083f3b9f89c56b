#pragma once

#include "ooblab/rt/session.hpp"

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace ooblab::rt {

struct ServerOptions {
    std::string host = "127.0.0.1";
    unsigned short port = 8765; // 0 picks a free port
    double realtime_factor = 1.0;
    SessionOptions session;
    std::optional<std::filesystem::path> ui_dir;      // static assets served over plain HTTP
    std::optional<std::filesystem::path> command_log; // written on shutdown
    std::optional<double> max_wall_s;                 // stop on its own after this long
};

/// WebSocket front for a SessionCore. The first connected client controls the
/// session; later ones only receive frames. One thread runs the simulation, one
/// runs network I/O, and they talk through queues.
class Server {
public:
    Server(harness::Scenario scenario, ServerOptions options);
    ~Server();

    /// Bind and listen. Throws std::runtime_error when the port is taken.
    void bind();
    unsigned short port() const;

    /// Serve until stop() or max_wall_s. Calls bind() if needed.
    void run();
    void stop();

    /// Worst simulation + broadcast time for one bundle, in seconds of wall time.
    double worst_bundle_wall_s() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace ooblab::rt
