#pragma once

#include <memory>
#include <string>

#include "control.hpp"

namespace smartlet::tools {

// WebSocket front-end for a ControlService. All service calls run on the
// single io thread that executes run().
class WsServer {
public:
    // Binds immediately; throws boost::system::system_error (e.g. address in use).
    WsServer(ControlService& service, unsigned short port, const std::string& address = "127.0.0.1");
    ~WsServer();

    unsigned short port() const;
    // Blocks until stop(); optionally also stops on SIGINT/SIGTERM.
    void run(bool handleSignals = false);
    void stop();  // safe from any thread or signal handler context via asio

    struct Impl;

private:
    std::shared_ptr<Impl> impl_;
};

}  // namespace smartlet::tools
