#include "ws_server.hpp"

#include <chrono>
#include <csignal>
#include <deque>
#include <set>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace smartlet::tools {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {
constexpr auto kFrame = std::chrono::milliseconds(1000 / 30);
}

class Session;

struct WsServer::Impl : std::enable_shared_from_this<WsServer::Impl> {
    Impl(ControlService& s, unsigned short port, const std::string& address)
        : service(s), acceptor(ioc), timer(ioc) {
        const tcp::endpoint ep(asio::ip::make_address(address), port);
        acceptor.open(ep.protocol());
        acceptor.set_option(asio::socket_base::reuse_address(true));
        acceptor.bind(ep);
        acceptor.listen();
    }

    void accept();
    void tick();
    void broadcast(const std::vector<std::string>& msgs);
    void shutdown();

    ControlService& service;
    asio::io_context ioc;
    tcp::acceptor acceptor;
    asio::steady_timer timer;
    Clock::time_point last = Clock::now();
    std::set<std::shared_ptr<Session>> sessions;
    bool stopping = false;
};

class Session : public std::enable_shared_from_this<Session> {
public:
    Session(tcp::socket socket, std::shared_ptr<WsServer::Impl> server)
        : ws_(std::move(socket)), server_(std::move(server)) {}

    void start() {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            self->server_->sessions.insert(self);
            self->send(self->server_->service.snapshot());
            self->read();
        });
    }

    void send(std::string msg) {
        queue_.push_back(std::move(msg));
        if (queue_.size() == 1) write();
    }

    void close() {
        beast::error_code ec;
        ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
        ws_.next_layer().close(ec);
    }

private:
    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->server_->sessions.erase(self);
                return;
            }
            const std::string text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            auto out = self->server_->service.handle(text, self->index_++);
            for (auto& m : out.reply) self->send(std::move(m));
            self->server_->broadcast(out.broadcast);
            self->read();
        });
    }

    void write() {
        ws_.text(true);
        ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->server_->sessions.erase(self);
                return;
            }
            self->queue_.pop_front();
            if (!self->queue_.empty()) self->write();
        });
    }

    websocket::stream<tcp::socket> ws_;
    std::shared_ptr<WsServer::Impl> server_;
    beast::flat_buffer buffer_;
    std::deque<std::string> queue_;
    std::uint64_t index_ = 0;
};

void WsServer::Impl::accept() {
    acceptor.async_accept([self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
        if (ec) return;
        std::make_shared<Session>(std::move(socket), self)->start();
        self->accept();
    });
}

void WsServer::Impl::tick() {
    timer.expires_after(kFrame);
    timer.async_wait([self = shared_from_this()](beast::error_code ec) {
        if (ec) return;
        const auto now = Clock::now();
        const double wall = std::chrono::duration<double>(now - self->last).count();
        self->last = now;
        self->broadcast(self->service.advance(wall));
        self->tick();
    });
}

void WsServer::Impl::broadcast(const std::vector<std::string>& msgs) {
    if (msgs.empty()) return;
    for (const auto& s : sessions)
        for (const auto& m : msgs) s->send(m);
}

void WsServer::Impl::shutdown() {
    if (stopping) return;
    stopping = true;
    beast::error_code ec;
    acceptor.close(ec);
    timer.cancel();
    for (const auto& s : sessions) s->close();
    sessions.clear();
    service.finish();
    ioc.stop();
}

WsServer::WsServer(ControlService& service, unsigned short port, const std::string& address)
    : impl_(std::make_shared<Impl>(service, port, address)) {}

WsServer::~WsServer() = default;

unsigned short WsServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void WsServer::run(bool handleSignals) {
    asio::signal_set signals(impl_->ioc);
    if (handleSignals) {
        signals.add(SIGINT);
        signals.add(SIGTERM);
        signals.async_wait([impl = impl_](beast::error_code ec, int) {
            if (!ec) impl->shutdown();
        });
    }
    impl_->accept();
    impl_->last = Clock::now();
    impl_->tick();
    impl_->ioc.run();
}

void WsServer::stop() {
    asio::post(impl_->ioc, [impl = impl_] { impl->shutdown(); });
}

}  // namespace smartlet::tools
