// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "forge/screening/bridge.h"

#include <nlohmann/json.hpp>

#include <cstring>

#include "forge/util/error.h"
#include "forge/util/io.h"

namespace forge::screening {
namespace {

using nlohmann::json;

[[noreturn]] void protocol_error(const std::string& msg) {
  throw Error(ErrorCode::kSourceFailure, "bridge: " + msg);
}

const json& need(const json& j, const char* key, json::value_t type) {
  const auto it = j.find(key);
  if (it == j.end()) protocol_error(std::string("reply lacks '") + key + "'");
  const bool number = type == json::value_t::number_float && it->is_number();
  const bool unsigned_ok = type == json::value_t::number_unsigned && it->is_number_unsigned();
  const bool integer_ok = type == json::value_t::number_integer && it->is_number_integer();
  if (it->type() != type && !number && !unsigned_ok && !integer_ok) {
    protocol_error(std::string("reply field '") + key + "' has the wrong type");
  }
  return *it;
}

std::string encode_hidden(const math::Matrix& h) {
  std::vector<uint8_t> bytes;
  bytes.reserve(h.data().size() * 4);
  for (double v : h.data()) {
    const float f = static_cast<float>(v);
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<uint8_t>(bits >> (8 * i)));
  }
  return base64_encode(bytes);
}

}  // namespace

BridgeSource::BridgeSource(std::unique_ptr<LineChannel> channel, std::string description,
                           std::string session)
    : channel_(std::move(channel)),
      description_(std::move(description)),
      session_(std::move(session)) {}

std::string BridgeSource::call(const std::string& request) {
  try {
    channel_->send(request);
    return channel_->receive();
  } catch (const Error& e) {
    protocol_error(std::string(error_code_name(e.code())) + ": " + e.what());
  }
}

namespace {

json parse_reply(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    protocol_error("reply is not JSON: " + line.substr(0, 200));
  }
  if (!j.is_object()) protocol_error("reply is not an object");
  if (!need(j, "ok", json::value_t::boolean).get<bool>()) {
    const auto it = j.find("error");
    protocol_error(it != j.end() && it->is_string() ? it->get<std::string>() : "request failed");
  }
  return j;
}

}  // namespace

void BridgeSource::begin(const std::string& prompt, const SamplingParams& params) {
  json req = {{"op", "begin"},          {"session", session_},
              {"prompt", prompt},       {"seed", params.seed},
              {"temperature", params.temperature}, {"top_p", params.top_p}};
  parse_reply(call(req.dump()));
}

SourceStep BridgeSource::next() {
  const json j = parse_reply(call(json{{"op", "next"}, {"session", session_}}.dump()));
  SourceStep s;
  if (j.value("eos", false) || !j.contains("token")) {
    s.eos = true;
    return s;
  }
  s.text = need(j, "token", json::value_t::string).get<std::string>();
  s.nll = need(j, "nll", json::value_t::number_float).get<double>();
  s.entropy = need(j, "entropy", json::value_t::number_float).get<double>();
  if (j.contains("token_id")) s.token_id = need(j, "token_id", json::value_t::number_integer).get<int64_t>();
  return s;
}

Checkpoint BridgeSource::snapshot() {
  const json j = parse_reply(call(json{{"op", "snapshot"}, {"session", session_}}.dump()));
  return need(j, "checkpoint_id", json::value_t::string).get<std::string>();
}

void BridgeSource::restore(const Checkpoint& checkpoint, uint64_t attempt_seed) {
  parse_reply(call(json{{"op", "restore"},
                        {"session", session_},
                        {"checkpoint_id", checkpoint},
                        {"seed", attempt_seed}}
                       .dump()));
}

math::Matrix BridgeSource::hidden_states() {
  const json j = parse_reply(call(json{{"op", "hidden"}, {"session", session_}}.dump()));
  const json& shape = need(j, "hidden_shape", json::value_t::array);
  if (shape.size() != 2 || !shape[0].is_number_unsigned() || !shape[1].is_number_unsigned()) {
    protocol_error("hidden_shape must be [L, D]");
  }
  const size_t rows = shape[0].get<size_t>();
  const size_t cols = shape[1].get<size_t>();
  std::vector<uint8_t> bytes;
  try {
    bytes = base64_decode(need(j, "hidden_b64", json::value_t::string).get<std::string>());
  } catch (const Error&) {
    protocol_error("hidden_b64 is not valid base64");
  }
  if (bytes.size() != rows * cols * 4) {
    protocol_error("hidden payload has " + std::to_string(bytes.size()) + " bytes for shape [" +
                   std::to_string(rows) + ", " + std::to_string(cols) + "]");
  }
  math::Matrix h(rows, cols);
  for (size_t i = 0; i < rows * cols; ++i) {
    uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<uint32_t>(bytes[4 * i + b]) << (8 * b);
    float f;
    std::memcpy(&f, &bits, 4);
    h.data()[i] = f;
  }
  return h;
}

std::string BridgeServer::handle(const std::string& line) {
  json reply;
  try {
    const json req = json::parse(line);
    if (!req.is_object() || !req.contains("op") || !req["op"].is_string()) {
      throw Error(ErrorCode::kSchema, "request needs a string 'op'");
    }
    const std::string op = req["op"];
    const std::string session = req.value("session", "");
    if (op == "begin") {
      SamplingParams p;
      p.seed = req.value("seed", uint64_t{0});
      p.temperature = req.value("temperature", p.temperature);
      p.top_p = req.value("top_p", p.top_p);
      source_.begin(req.value("prompt", ""), p);
      session_ = session;
      reply = {{"ok", true}};
    } else if (session != session_ || session_.empty()) {
      throw Error(ErrorCode::kSchema, "unknown session '" + session + "'");
    } else if (op == "next") {
      const SourceStep s = source_.next();
      if (s.eos) {
        reply = {{"ok", true}, {"eos", true}};
      } else {
        reply = {{"ok", true},     {"token", s.text},        {"token_id", s.token_id},
                 {"nll", s.nll}, {"entropy", s.entropy}};
      }
    } else if (op == "snapshot") {
      reply = {{"ok", true}, {"checkpoint_id", source_.snapshot()}};
    } else if (op == "restore") {
      source_.restore(req.at("checkpoint_id").get<std::string>(), req.value("seed", uint64_t{0}));
      reply = {{"ok", true}};
    } else if (op == "hidden") {
      const math::Matrix h = source_.hidden_states();
      reply = {{"ok", true},
               {"hidden_shape", {h.rows(), h.cols()}},
               {"hidden_b64", encode_hidden(h)}};
    } else {
      throw Error(ErrorCode::kSchema, "unknown op '" + op + "'");
    }
  } catch (const std::exception& e) {
    reply = {{"ok", false}, {"error", e.what()}};
  }
  return reply.dump();
}

}  // namespace forge::screening
