#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "atlgts/engine.hpp"

namespace atlgts {

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

/// Session store plus request routing. handle() is transport-free; serve()
/// binds it to HTTP.
class SessionService {
 public:
  /// With a snapshot directory, every session is written there as JSON after
  /// each mutation and reloaded by replay at construction.
  explicit SessionService(std::optional<std::string> snapshot_dir = std::nullopt, std::size_t budget = 10000);

  ServiceResponse handle(const std::string& method, const std::string& path,
                         const std::map<std::string, std::string>& query, const std::string& body);

  /// Blocks; returns false if the port cannot be bound.
  /// Port 0 binds any free port; `on_bound` receives the port before listening.
  bool serve(const std::string& host, int port, std::function<void(int)> on_bound = {});
  /// Makes a running serve() return.
  void stop();
  std::size_t session_count() const;

 private:
  struct Entry {
    std::mutex mu;
    std::string id;
    std::string created_at;
    nlohmann::json request;
    std::unique_ptr<Session> session;
    nlohmann::json moves = nlohmann::json::array();  // accepted human moves, for replay
  };

  std::optional<std::string> snapshot_dir_;
  std::size_t budget_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mutex server_mu_;
  void* server_ = nullptr;  // httplib::Server while serving

  std::shared_ptr<Entry> find(const std::string& id) const;
  static std::unique_ptr<Session> build(const nlohmann::json& request);
  nlohmann::json view(const Entry& e) const;
  void persist(const Entry& e) const;
  void load_snapshots();
  void auto_reply(Entry& e);

  ServiceResponse create(const std::string& body);
  ServiceResponse move(Entry& e, const std::map<std::string, std::string>& query, const std::string& body);
  ServiceResponse machine(Entry& e);
  ServiceResponse labels(Entry& e);
};

}  // namespace atlgts
