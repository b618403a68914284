#pragma once

// Minimal localhost HTTP stub implementing the inference wire protocol for
// remote-oracle tests.

#include <atomic>
#include <functional>
#include <string>
#include <thread>

#include <httplib.h>

namespace evoshape_test {

class StubServer {
public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit StubServer(Handler handler) {
    server_.Post("/v1/probabilities", [this, handler](const httplib::Request& req,
                                                      httplib::Response& res) {
      ++hits_;
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int hits() const { return hits_; }

private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

} // namespace evoshape_test
