#include "ooblab/rt/server.hpp"

#include "ooblab/errors.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/executor_work_guard.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <algorithm>
#include <chrono>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace ooblab::rt {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

class WsSession;

// Shared between the I/O thread (sessions) and the simulation thread.
class Hub {
public:
    int join(const std::shared_ptr<WsSession>& s) {
        std::lock_guard lk(m_);
        const int id = next_id_++;
        clients_[id] = s;
        if (controller_ < 0)
            controller_ = id;
        return id;
    }
    void leave(int id) {
        std::lock_guard lk(m_);
        clients_.erase(id);
        if (controller_ == id)
            controller_ = clients_.empty() ? -1 : clients_.begin()->first;
    }
    bool is_controller(int id) {
        std::lock_guard lk(m_);
        return id == controller_;
    }
    void push(int id, std::string text) {
        std::lock_guard lk(m_);
        inbound_.emplace_back(id, std::move(text));
    }
    std::deque<std::pair<int, std::string>> drain() {
        std::lock_guard lk(m_);
        std::deque<std::pair<int, std::string>> out;
        out.swap(inbound_);
        return out;
    }
    std::vector<std::shared_ptr<WsSession>> sessions();
    std::shared_ptr<WsSession> session(int id);

private:
    std::mutex m_;
    std::map<int, std::weak_ptr<WsSession>> clients_;
    int controller_ = -1;
    int next_id_ = 0;
    std::deque<std::pair<int, std::string>> inbound_;
};

struct Greeting {
    std::string scenario;
    std::string victim;
    std::string mode;
    double bundle_s;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket&& socket, Hub& hub, const Greeting& hello) : ws_(std::move(socket)), hub_(hub), hello_(hello) {}

    void start(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
    }

    void send(std::shared_ptr<const std::string> msg) {
        net::post(ws_.get_executor(), [self = shared_from_this(), msg = std::move(msg)] {
            if (self->closed_ || self->outbox_.size() >= kMaxQueued)
                return; // a stalled viewer drops frames instead of stalling the session
            self->outbox_.push_back(msg);
            if (self->outbox_.size() == 1)
                self->do_write();
        });
    }

    void close() {
        net::post(ws_.get_executor(), [self = shared_from_this()] {
            if (self->closed_)
                return;
            self->closed_ = true;
            self->ws_.async_close(websocket::close_code::going_away, [self](beast::error_code) {});
        });
    }

private:
    static constexpr std::size_t kMaxQueued = 256;

    void on_accept(beast::error_code ec) {
        if (ec)
            return;
        id_ = hub_.join(shared_from_this());
        const json hi = {{"hello",
                          {{"role", hub_.is_controller(id_) ? "controller" : "viewer"},
                           {"scenario", hello_.scenario},
                           {"victim", hello_.victim},
                           {"mode", hello_.mode},
                           {"bundle_s", hello_.bundle_s}}}};
        send(std::make_shared<const std::string>(hi.dump()));
        do_read();
    }

    void do_read() { ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this())); }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            closed_ = true;
            hub_.leave(id_);
            return;
        }
        hub_.push(id_, beast::buffers_to_string(buffer_.data()));
        buffer_.consume(buffer_.size());
        do_read();
    }

    void do_write() {
        ws_.text(true);
        ws_.async_write(net::buffer(*outbox_.front()),
                        beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t) {
        if (ec) {
            closed_ = true;
            outbox_.clear();
            return;
        }
        outbox_.pop_front();
        if (!outbox_.empty())
            do_write();
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<std::shared_ptr<const std::string>> outbox_;
    Hub& hub_;
    const Greeting& hello_;
    int id_ = -1;
    bool closed_ = false;
};

std::vector<std::shared_ptr<WsSession>> Hub::sessions() {
    std::lock_guard lk(m_);
    std::vector<std::shared_ptr<WsSession>> out;
    for (auto& [id, w] : clients_)
        if (auto s = w.lock())
            out.push_back(std::move(s));
    return out;
}

std::shared_ptr<WsSession> Hub::session(int id) {
    std::lock_guard lk(m_);
    auto it = clients_.find(id);
    return it == clients_.end() ? nullptr : it->second.lock();
}

std::string mime_type(const std::filesystem::path& p) {
    const std::string ext = p.extension().string();
    if (ext == ".html" || ext == ".htm")
        return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs")
        return "text/javascript";
    if (ext == ".css")
        return "text/css";
    if (ext == ".json" || ext == ".map")
        return "application/json";
    if (ext == ".svg")
        return "image/svg+xml";
    if (ext == ".png")
        return "image/png";
    if (ext == ".ico")
        return "image/x-icon";
    if (ext == ".wasm")
        return "application/wasm";
    return "application/octet-stream";
}

// Resolves a request target inside the asset root; empty when it escapes or is missing.
std::optional<std::filesystem::path> resolve_asset(const std::filesystem::path& root, std::string target) {
    if (auto q = target.find_first_of("?#"); q != std::string::npos)
        target.erase(q);
    if (target.empty() || target.front() != '/' || target.find("..") != std::string::npos ||
        target.find('\0') != std::string::npos)
        return std::nullopt;
    if (target.back() == '/')
        target += "index.html";
    std::error_code ec;
    const auto base = std::filesystem::weakly_canonical(root, ec);
    if (ec)
        return std::nullopt;
    const auto full = std::filesystem::weakly_canonical(base / target.substr(1), ec);
    if (ec)
        return std::nullopt;
    const auto rel = full.lexically_relative(base);
    if (rel.empty() || *rel.begin() == "..")
        return std::nullopt;
    if (!std::filesystem::is_regular_file(full, ec))
        return std::nullopt;
    return full;
}

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, Hub& hub, const Greeting& hello, const std::optional<std::filesystem::path>& ui)
        : stream_(std::move(socket)), hub_(hub), hello_(hello), ui_(ui) {}

    void start() {
        net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
    }

private:
    void do_read() {
        req_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec)
            return;
        if (websocket::is_upgrade(req_)) {
            stream_.expires_never();
            std::make_shared<WsSession>(stream_.release_socket(), hub_, hello_)->start(std::move(req_));
            return;
        }
        auto res = std::make_shared<http::response<http::string_body>>();
        res->version(req_.version());
        res->keep_alive(false);
        res->set(http::field::server, "oob-lab");
        std::optional<std::filesystem::path> file;
        if (ui_ && (req_.method() == http::verb::get || req_.method() == http::verb::head))
            file = resolve_asset(*ui_, std::string(req_.target()));
        if (file) {
            std::ifstream in(*file, std::ios::binary);
            std::ostringstream body;
            body << in.rdbuf();
            res->result(http::status::ok);
            res->set(http::field::content_type, mime_type(*file));
            if (req_.method() == http::verb::get)
                res->body() = body.str();
        } else {
            res->result(http::status::not_found);
            res->set(http::field::content_type, "text/plain");
            res->body() = ui_ ? "not found\n" : "no UI bundle configured; connect with a WebSocket client\n";
        }
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
            beast::error_code ignored;
            self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        });
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
    Hub& hub_;
    const Greeting& hello_;
    const std::optional<std::filesystem::path>& ui_;
};

class Listener : public std::enable_shared_from_this<Listener> {
public:
    Listener(net::io_context& ioc, const tcp::endpoint& ep, Hub& hub, const Greeting& hello,
             const std::optional<std::filesystem::path>& ui)
        : ioc_(ioc), acceptor_(ioc), hub_(hub), hello_(hello), ui_(ui) {
        beast::error_code ec;
        acceptor_.open(ep.protocol(), ec);
        if (!ec)
            acceptor_.set_option(net::socket_base::reuse_address(true), ec);
        if (!ec)
            acceptor_.bind(ep, ec);
        if (!ec)
            acceptor_.listen(net::socket_base::max_listen_connections, ec);
        if (ec)
            throw std::runtime_error("cannot listen on " + ep.address().to_string() + ":" +
                                     std::to_string(ep.port()) + ": " + ec.message());
    }

    unsigned short port() const { return acceptor_.local_endpoint().port(); }

    void start() { do_accept(); }
    void close() {
        net::post(acceptor_.get_executor(), [self = shared_from_this()] {
            beast::error_code ec;
            self->acceptor_.close(ec);
        });
    }

private:
    void do_accept() {
        acceptor_.async_accept(net::make_strand(ioc_),
                               beast::bind_front_handler(&Listener::on_accept, shared_from_this()));
    }
    void on_accept(beast::error_code ec, tcp::socket socket) {
        if (ec == net::error::operation_aborted || !acceptor_.is_open())
            return;
        if (!ec)
            std::make_shared<HttpSession>(std::move(socket), hub_, hello_, ui_)->start();
        do_accept();
    }

    net::io_context& ioc_;
    tcp::acceptor acceptor_;
    Hub& hub_;
    const Greeting& hello_;
    const std::optional<std::filesystem::path>& ui_;
};

} // namespace

struct Server::Impl {
    harness::Scenario scenario;
    ServerOptions opt;
    Greeting hello;
    net::io_context ioc{1};
    Hub hub;
    std::shared_ptr<Listener> listener;
    std::atomic<bool> stopping{false};
    std::atomic<double> worst{0.0};
};

Server::Server(harness::Scenario scenario, ServerOptions options) : impl_(std::make_unique<Impl>()) {
    if (!(options.realtime_factor > 0.0))
        throw ConfigError("realtime_factor", "must be positive");
    impl_->hello = {scenario.name, victims::to_string(scenario.victim.kind), harness::to_string(options.session.mode),
                    options.session.bundle_s};
    impl_->scenario = std::move(scenario);
    impl_->opt = std::move(options);
}

Server::~Server() = default;

void Server::bind() {
    if (impl_->listener)
        return;
    const auto addr = net::ip::make_address(impl_->opt.host);
    impl_->listener = std::make_shared<Listener>(impl_->ioc, tcp::endpoint(addr, impl_->opt.port), impl_->hub,
                                                 impl_->hello, impl_->opt.ui_dir);
}

unsigned short Server::port() const { return impl_->listener ? impl_->listener->port() : 0; }

void Server::stop() { impl_->stopping = true; }

double Server::worst_bundle_wall_s() const { return impl_->worst.load(); }

void Server::run() {
    using clock = std::chrono::steady_clock;
    bind();
    auto& I = *impl_;
    SessionCore core(I.scenario, I.opt.session);

    net::signal_set signals(I.ioc, SIGINT, SIGTERM);
    signals.async_wait([this](beast::error_code ec, int) {
        if (!ec)
            impl_->stopping = true;
    });
    auto work = net::make_work_guard(I.ioc);
    I.listener->start();
    std::thread io([&I] { I.ioc.run(); });

    const auto period = std::chrono::duration_cast<clock::duration>(
        std::chrono::duration<double>(I.opt.session.bundle_s / I.opt.realtime_factor));
    const auto start = clock::now();
    auto next = start;
    const auto error_to = [&](int id, const json& frame) {
        if (auto s = I.hub.session(id))
            s->send(std::make_shared<const std::string>(frame.dump()));
    };

    while (!I.stopping) {
        const auto t0 = clock::now();
        for (auto& [id, text] : I.hub.drain()) {
            if (!I.hub.is_controller(id)) {
                error_to(id, SessionCore::error_frame("viewer clients cannot control the session"));
                continue;
            }
            if (auto err = core.submit(text))
                error_to(id, *err);
        }
        const auto frame = std::make_shared<const std::string>(core.advance().dump());
        for (auto& s : I.hub.sessions())
            s->send(frame);
        const double spent = std::chrono::duration<double>(clock::now() - t0).count();
        I.worst = std::max(I.worst.load(), spent);

        if (I.opt.max_wall_s && std::chrono::duration<double>(clock::now() - start).count() >= *I.opt.max_wall_s)
            break;
        next += period;
        const auto now = clock::now();
        if (next < now)
            next = now; // fell behind: do not try to catch up in a burst
        std::this_thread::sleep_until(next);
    }

    if (I.opt.command_log)
        write_command_log(I.opt.command_log->string(), core.command_log());
    I.listener->close();
    for (auto& s : I.hub.sessions())
        s->close();
    beast::error_code ignored;
    signals.cancel(ignored);
    work.reset();
    // Give close handshakes a moment before tearing the loop down.
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    I.ioc.stop();
    io.join();
}

} // namespace ooblab::rt
