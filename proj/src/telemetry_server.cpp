#include "wavewall/telemetry_server.hpp"

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include <atomic>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace wavewall::runtime {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

class WsSession;

// Registry of live WebSocket sessions; touched only on the I/O thread.
struct Hub {
  std::set<std::shared_ptr<WsSession>> sessions;
  std::shared_ptr<const std::string> latest;
  std::atomic<std::size_t> count{0};
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, Hub& hub, ControlChannel& control)
      : ws_(std::move(socket)), hub_(hub), control_(control) {}

  void start(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->hub_.sessions.insert(self);
      self->hub_.count = self->hub_.sessions.size();
      if (self->hub_.latest) self->send(self->hub_.latest);
      self->read();
    });
  }

  void send(std::shared_ptr<const std::string> text) {
    // Snapshots supersede each other; never let a slow client build a backlog.
    if (queue_.size() > 8) queue_.erase(queue_.begin() + 1, queue_.end());
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write();
  }

  void close() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->drop();
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write();
    });
  }

  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->drop();
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      try {
        self->control_.push(parse_control(text));
      } catch (const std::exception& e) {
        self->send(std::make_shared<const std::string>(error_message(e.what()).dump()));
      }
      self->read();
    });
  }

  void drop() {
    hub_.sessions.erase(shared_from_this());
    hub_.count = hub_.sessions.size();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  Hub& hub_;
  ControlChannel& control_;
};

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, Hub& hub, ControlChannel& control, const std::string& static_dir)
      : stream_(std::move(socket)), hub_(hub), control_(control), static_dir_(static_dir) {}

  void start() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      self->handle();
    });
  }

 private:
  void handle() {
    if (websocket::is_upgrade(req_)) {
      if (req_.target() != "/ws") return respond(http::status::not_found, "text/plain", "websocket endpoint is /ws");
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), hub_, control_)->start(std::move(req_));
      return;
    }
    if (req_.method() != http::verb::get) return respond(http::status::method_not_allowed, "text/plain", "GET only");
    serve_static();
  }

  void serve_static() {
    if (static_dir_.empty()) return respond(http::status::not_found, "text/plain", "no console assets configured");
    std::string target(req_.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target.find("..") != std::string::npos) return respond(http::status::bad_request, "text/plain", "bad path");
    if (target.empty() || target == "/") target = "/index.html";
    const std::filesystem::path file = std::filesystem::path(static_dir_) / target.substr(1);
    std::ifstream in(file, std::ios::binary);
    if (!in) return respond(http::status::not_found, "text/plain", "not found");
    std::stringstream body;
    body << in.rdbuf();
    respond(http::status::ok, mime_type(file), body.str());
  }

  void respond(http::status status, std::string_view type, std::string body) {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::content_type, std::string(type));
    res->keep_alive(false);
    res->body() = std::move(body);
    res->prepare_payload();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ec;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  Hub& hub_;
  ControlChannel& control_;
  const std::string& static_dir_;
};

}  // namespace

struct TelemetryServer::Impl {
  Impl(std::string bind, std::string dir, ControlChannel& ch) : bind(std::move(bind)), static_dir(std::move(dir)), control(ch) {}

  void accept() {
    acceptor->async_accept(asio::make_strand(io), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(socket), hub, control, static_dir)->start();
      accept();
    });
  }

  std::string bind;
  std::string static_dir;
  ControlChannel& control;
  asio::io_context io{1};
  std::optional<tcp::acceptor> acceptor;
  std::thread thread;
  Hub hub;
  std::atomic<std::uint16_t> port{0};
  bool running = false;
};

TelemetryServer::TelemetryServer(std::string bind, std::string static_dir, ControlChannel& control)
    : impl_(std::make_unique<Impl>(std::move(bind), std::move(static_dir), control)) {}

TelemetryServer::~TelemetryServer() { stop(); }

void TelemetryServer::start() {
  if (impl_->running) return;
  const auto colon = impl_->bind.rfind(':');
  const auto host = impl_->bind.substr(0, colon);
  const auto port = static_cast<std::uint16_t>(std::stoi(impl_->bind.substr(colon + 1)));
  const tcp::endpoint endpoint(asio::ip::make_address(host.empty() ? "0.0.0.0" : host), port);

  auto& acceptor = impl_->acceptor.emplace(impl_->io);
  acceptor.open(endpoint.protocol());
  acceptor.set_option(asio::socket_base::reuse_address(true));
  acceptor.bind(endpoint);
  acceptor.listen();
  impl_->port = acceptor.local_endpoint().port();
  impl_->accept();
  impl_->running = true;
  impl_->thread = std::thread([this] { impl_->io.run(); });
}

void TelemetryServer::stop() {
  if (!impl_->running) return;
  std::promise<void> closed;
  asio::post(impl_->io, [this, &closed] {
    beast::error_code ec;
    impl_->acceptor->close(ec);
    for (const auto& s : impl_->hub.sessions) s->close();
    impl_->hub.sessions.clear();
    impl_->hub.count = 0;
    closed.set_value();
  });
  closed.get_future().wait();
  impl_->io.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_->running = false;
}

std::uint16_t TelemetryServer::port() const { return impl_->port; }

std::size_t TelemetryServer::client_count() const { return impl_->hub.count; }

void TelemetryServer::publish(std::shared_ptr<const TelemetrySnapshot> snapshot) {
  auto text = std::make_shared<const std::string>(to_json(*snapshot).dump());
  asio::post(impl_->io, [this, text] {
    impl_->hub.latest = text;
    for (const auto& s : impl_->hub.sessions) s->send(text);
  });
}

}  // namespace wavewall::runtime
