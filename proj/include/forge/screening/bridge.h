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


#ifndef FORGE_SCREENING_BRIDGE_H_
#define FORGE_SCREENING_BRIDGE_H_

#include <memory>
#include <string>

#include "forge/screening/source.h"
#include "forge/util/process.h"

namespace forge::screening {

// Line-delimited JSON transport to a model bridge.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void send(const std::string& line) = 0;
  virtual std::string receive() = 0;
};

// Runs the bridge command as a child process speaking over stdin/stdout.
class ProcessChannel : public LineChannel {
 public:
  ProcessChannel(const std::string& command, double timeout_seconds)
      : process_(command), timeout_(timeout_seconds) {}
  void send(const std::string& line) override { process_.write_line(line); }
  std::string receive() override { return process_.read_line(timeout_); }

 private:
  LineProcess process_;
  double timeout_;
};

// TokenSource backed by the bridge protocol. Requests:
//   {"op": "begin"|"next"|"snapshot"|"restore"|"hidden", "session", ...}
// with prompt/seed/temperature/top_p on begin and checkpoint_id/seed on
// restore. Replies carry "ok" plus token/token_id/nll/entropy (or
// "eos": true), checkpoint_id, or hidden_shape [L, D] with hidden_b64
// (float32 little-endian, row-major). {"ok": false, "error"} reports a
// failure. Protocol violations throw Error(kSourceFailure).
class BridgeSource : public TokenSource {
 public:
  BridgeSource(std::unique_ptr<LineChannel> channel, std::string description,
               std::string session = "s0");

  void begin(const std::string& prompt, const SamplingParams& params) override;
  SourceStep next() override;
  Checkpoint snapshot() override;
  void restore(const Checkpoint& checkpoint, uint64_t attempt_seed) override;
  math::Matrix hidden_states() override;
  std::string describe() const override { return description_; }

 private:
  std::string call(const std::string& request);

  std::unique_ptr<LineChannel> channel_;
  std::string description_;
  std::string session_;
};

// Server side of the protocol over any TokenSource, one session at a
// time. handle() never throws; failures become {"ok": false, "error"}.
class BridgeServer {
 public:
  explicit BridgeServer(TokenSource& source) : source_(source) {}
  std::string handle(const std::string& line);

 private:
  TokenSource& source_;
  std::string session_;
};

}  // namespace forge::screening

#endif  // FORGE_SCREENING_BRIDGE_H_
