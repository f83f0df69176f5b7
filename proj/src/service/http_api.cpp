#include "aerials/service/http_api.hpp"

#include <iostream>

#include <httplib.h>

#include "aerials/service/judging_service.hpp"
#include "aerials/trace_io.hpp"

namespace aerials::service {

namespace {

void send_json(httplib::Response& res, const ordered_json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

ordered_json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return ordered_json::object();
  try {
    auto j = ordered_json::parse(req.body);
    if (!j.is_object()) throw validation_error("request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("malformed JSON body: ") + e.what());
  }
}

int judge_param(const httplib::Request& req) {
  const auto& text = req.matches[2].str();
  if (text.size() != 1 || text[0] < '1' || text[0] > '5')
    throw validation_error("judge must be between 1 and 5, got '" + text + "'");
  return text[0] - '0';
}

ordered_json score_reply(const JudgeScore& s) {
  ordered_json deductions = ordered_json::array();
  for (const auto& d : s.deductions) deductions.push_back(deduction_to_json(d));
  return {{"provisional_judge_score", judge_score_to_json(s, false)}, {"deductions", deductions}};
}

std::string body_string(const ordered_json& body, const char* key) {
  if (!body.contains(key) || !body.at(key).is_string())
    throw validation_error(std::string("field '") + key + "' must be a string");
  return body.at(key).get<std::string>();
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_json(res, {{"error", e.what()}}, e.status());
    } catch (const std::exception& e) {
      send_json(res, {{"error", e.what()}}, 500);
    }
  };
}

}  // namespace

void register_routes(httplib::Server& server, JudgingService& svc) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server.Post("/competitions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                send_json(res, {{"id", svc.create_competition(body.value("name", std::string()))}}, 201);
              }));

  server.Post(R"(/competitions/([^/]+)/jumps)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                const auto declared = svc.declare_jump(req.matches[1].str(), body_string(body, "athlete"),
                                                       body_string(body, "gender"), body_string(body, "code"), body);
                send_json(res, {{"jump_id", declared.jump_id}, {"dd", format_dd(declared.dd)}}, 201);
              }));

  server.Post(R"(/jumps/([^/]+)/judges/([^/]+)/observations)",
              guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                const int judge = judge_param(req);
                if (!body.contains("payload")) throw validation_error("field 'payload' is required");
                const auto score =
                    svc.submit_observation(req.matches[1].str(), judge, body_string(body, "stage"), body.at("payload"));
                send_json(res, score_reply(score));
              }));

  server.Post(R"(/jumps/([^/]+)/judges/([^/]+)/finalize)",
              guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                send_json(res, score_reply(svc.finalize_judge(req.matches[1].str(), judge_param(req))));
              }));

  server.Post(R"(/jumps/([^/]+)/finalize)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                send_json(res, panel_to_json(svc.finalize_jump(req.matches[1].str())));
              }));

  server.Get(R"(/jumps/([^/]+)/traces)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
               send_json(res, svc.jump_traces(req.matches[1].str()));
             }));

  server.Get(R"(/jumps/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
               send_json(res, svc.jump_state(req.matches[1].str()));
             }));

  server.Get(R"(/competitions/([^/]+)/leaderboard)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
               send_json(res, svc.leaderboard(req.matches[1].str()));
             }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_json(res, {{"error", "not found"}}, res.status);
  });
}

void run_server(const std::string& host, int port, const std::filesystem::path& data_dir) {
  JudgingService svc(data_dir, DifficultyCatalog::load_default(), load_rule_config(default_rule_config_path()));
  httplib::Server server;
  register_routes(server, svc);
  std::cerr << "aerials service listening on " << host << ":" << port << " (data in " << data_dir.string() << ")\n";
  if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace aerials::service
