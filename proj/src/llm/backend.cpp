// Copyright 2026 The TraceSpec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tracespec/llm/backend.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tracespec/core/error.hpp"

namespace tracespec::llm {

using Json = nlohmann::ordered_json;

void CompletionParams::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw Error(ErrorKind::kConfigError, "temperature must be in [0, 2]");
  }
  if (max_tokens < 1) {
    throw Error(ErrorKind::kConfigError, "max_tokens must be >= 1");
  }
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptRecord> records)
    : records_(std::move(records)), used_(records_.size(), false) {}

std::vector<ScriptRecord> ScriptedBackend::parse(std::string_view jsonl) {
  std::vector<ScriptRecord> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Json j = Json::parse(line);
      ScriptRecord r;
      r.task = task_kind_from_string(j.at("task").get<std::string>());
      if (j.contains("ordinal") && !j["ordinal"].is_null()) {
        r.ordinal = j["ordinal"].get<int>();
      }
      if (j.contains("problem") && !j["problem"].is_null()) {
        r.problem = j["problem"].get<std::string>();
      }
      r.response_text = j.at("response_text").get<std::string>();
      r.truncated = j.value("truncated", false);
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kConfigError,
                  "script line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ScriptRecord> ScriptedBackend::load(
    const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

Completion ScriptedBackend::complete(const std::vector<ChatMessage>&,
                                     const CompletionParams&,
                                     const CallTag& tag) {
  std::lock_guard lock(mu_);
  int& ordinal = calls_[{tag.problem_id, tag.task}];
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (used_[i] || r.task != tag.task) continue;
    if (r.problem && *r.problem != tag.problem_id) continue;
    if (r.ordinal && *r.ordinal != ordinal) continue;
    used_[i] = true;
    ++ordinal;
    return Completion{r.response_text, r.truncated};
  }
  throw Error(ErrorKind::kScriptExhausted,
              std::string(to_string(tag.task)) + " call " +
                  std::to_string(ordinal) + " for problem '" + tag.problem_id +
                  "'");
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (bool u : used_) n += u ? 0 : 1;
  return n;
}

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, url)) {
    throw Error(ErrorKind::kConfigError,
                "endpoint must be an http(s) URL: " + config_.endpoint);
  }
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
  if (config_.attempts < 1) config_.attempts = 1;
}

Completion RemoteBackend::attempt(const std::string& body) {
  httplib::Client client(scheme_host_port_);
  auto secs = static_cast<time_t>(config_.timeout.count());
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);
  httplib::Headers headers;
  if (!config_.auth_env.empty()) {
    const char* secret = std::getenv(config_.auth_env.c_str());
    if (!secret) {
      throw Error(ErrorKind::kConfigError,
                  "environment variable " + config_.auth_env + " is not set");
    }
    headers.emplace(config_.auth_header, config_.auth_prefix + secret);
  }
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    throw Error(ErrorKind::kTransportError,
                scheme_host_port_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorKind::kTransportError,
                "HTTP " + std::to_string(res->status) + ": " +
                    res->body.substr(0, 512));
  }
  try {
    Json j = Json::parse(res->body);
    const Json& choice = j.at("choices").at(0);
    Completion c;
    c.text = choice.at("message").at("content").get<std::string>();
    c.truncated = choice.value("finish_reason", "") == "length";
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kTransportError,
                std::string("malformed response: ") + e.what());
  }
}

Completion RemoteBackend::complete(const std::vector<ChatMessage>& messages,
                                   const CompletionParams& params,
                                   const CallTag&) {
  Json body;
  body["model"] = params.model_id;
  Json msgs = Json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", std::string(to_string(m.role))},
                    {"content", m.content}});
  }
  body["messages"] = std::move(msgs);
  body["temperature"] = params.temperature;
  body["max_tokens"] = params.max_tokens;
  std::string payload = body.dump();

  auto delay = config_.backoff;
  for (int i = 1;; ++i) {
    try {
      return attempt(payload);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kTransportError || i >= config_.attempts) {
        throw;
      }
    }
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

}  // namespace tracespec::llm
