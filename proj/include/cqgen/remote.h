// Copyright 2026 The cqgen Authors
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

#ifndef CQGEN_REMOTE_H_
#define CQGEN_REMOTE_H_

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cqgen/lm.h"

namespace cqgen {

// Environment variables consulted when no endpoint flag is given.
inline constexpr const char* kLmEndpointEnv = "CQGEN_LM_ENDPOINT";
inline constexpr const char* kScorerEndpointEnv = "CQGEN_SCORER_ENDPOINT";

// http://host[:port][/path]
struct Endpoint {
  std::string scheme_host_port;
  std::string path;

  static Endpoint parse(const std::string& url);
  std::string url() const { return scheme_host_port + path; }
};

struct HttpReply {
  bool ok = false;
  std::string body;   // response body when ok
  std::string error;  // transport or status description otherwise
};

// POSTs `body` as application/json. Never throws for transport failures.
HttpReply post_json(const Endpoint& endpoint, const std::string& body, double timeout_s);

// Language model served over HTTP.
//
//   request:  {"context": ["tok", ...]}
//   response: {"tokens": ["tok", ...], "logprobs": [-1.2, ...]}
//
// One round trip per next_token_dist call. The first call (empty context)
// fixes the vocabulary; later responses may list tokens in any order but must
// stay inside it. Tokens the server omits get probability zero.
class RemoteModel final : public LanguageModel {
 public:
  explicit RemoteModel(Endpoint endpoint, double timeout_s = 30.0);

  std::string_view provider() const override { return "remote"; }
  // Fetches the vocabulary on first use; throws RemoteScoringError when the
  // endpoint is unreachable.
  const Vocab& vocab() const override;
  TokenDist next_token_dist(std::span<const TokenId> context) const override;

  const Endpoint& endpoint() const { return endpoint_; }

 private:
  struct Reply {
    std::vector<std::string> tokens;
    std::vector<double> logprobs;
  };
  Reply query(const std::vector<std::string>& context) const;

  Endpoint endpoint_;
  double timeout_s_;
  mutable std::mutex mu_;
  mutable std::optional<Vocab> vocab_;
};

// Decodes a remote-LM response into a distribution over `vocab`. Exposed for
// tests; throws RemoteScoringError on any malformed payload.
TokenDist decode_lm_response(const std::string& body, const Vocab& vocab);

}  // namespace cqgen

#endif  // CQGEN_REMOTE_H_
