#pragma once

#include <filesystem>
#include <string>

namespace httplib {
class Server;
}

namespace aerials::service {

class JudgingService;

// Installs the JSON routes on `server`. The service must outlive the server.
void register_routes(httplib::Server& server, JudgingService& service);

// Blocks serving on host:port until the process is stopped.
void run_server(const std::string& host, int port, const std::filesystem::path& data_dir);

}  // namespace aerials::service
