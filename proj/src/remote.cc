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

#include "cqgen/remote.h"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "cqgen/error.h"

namespace cqgen {

using nlohmann::json;

Endpoint Endpoint::parse(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw InvalidInput("endpoint must start with http:// : " + url);
  }
  const auto slash = url.find('/', scheme.size());
  Endpoint e;
  if (slash == std::string::npos) {
    e.scheme_host_port = url;
    e.path = "/";
  } else {
    e.scheme_host_port = url.substr(0, slash);
    e.path = url.substr(slash);
  }
  if (e.scheme_host_port.size() == scheme.size()) throw InvalidInput("endpoint without host: " + url);
  return e;
}

HttpReply post_json(const Endpoint& endpoint, const std::string& body, double timeout_s) {
  HttpReply reply;
  httplib::Client client(endpoint.scheme_host_port);
  const auto sec = static_cast<time_t>(timeout_s);
  const auto usec = static_cast<time_t>((timeout_s - static_cast<double>(sec)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  auto res = client.Post(endpoint.path, body, "application/json");
  if (!res) {
    reply.error = "POST " + endpoint.url() + " failed: " + httplib::to_string(res.error());
    return reply;
  }
  if (res->status != 200) {
    reply.error = "POST " + endpoint.url() + " returned HTTP " + std::to_string(res->status);
    return reply;
  }
  reply.ok = true;
  reply.body = res->body;
  return reply;
}

namespace {

struct ParsedReply {
  std::vector<std::string> tokens;
  std::vector<double> logprobs;
};

ParsedReply parse_lm_reply(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw RemoteScoringError(std::string("remote LM response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("tokens") || !j.contains("logprobs") ||
      !j["tokens"].is_array() || !j["logprobs"].is_array()) {
    throw RemoteScoringError("remote LM response needs array fields 'tokens' and 'logprobs'");
  }
  ParsedReply r;
  for (const auto& t : j["tokens"]) {
    if (!t.is_string()) throw RemoteScoringError("remote LM token is not a string");
    r.tokens.push_back(t.get<std::string>());
  }
  for (const auto& v : j["logprobs"]) {
    if (!v.is_number()) throw RemoteScoringError("remote LM logprob is not a number");
    const double lp = v.get<double>();
    if (std::isnan(lp) || lp > 1e-9) throw RemoteScoringError("remote LM logprob out of range");
    r.logprobs.push_back(lp);
  }
  if (r.tokens.size() != r.logprobs.size() || r.tokens.empty()) {
    throw RemoteScoringError("remote LM tokens/logprobs length mismatch");
  }
  return r;
}

}  // namespace

TokenDist decode_lm_response(const std::string& body, const Vocab& vocab) {
  ParsedReply r = parse_lm_reply(body);
  TokenDist dist;
  dist.probs.assign(vocab.size(), 0.0);
  std::vector<bool> seen(vocab.size(), false);
  double total = 0.0;
  for (std::size_t i = 0; i < r.tokens.size(); ++i) {
    if (!vocab.contains(r.tokens[i])) {
      throw RemoteScoringError("remote LM returned token outside its vocabulary: " + r.tokens[i]);
    }
    const auto id = static_cast<std::size_t>(vocab.id(r.tokens[i]));
    if (seen[id]) throw RemoteScoringError("remote LM returned duplicate token: " + r.tokens[i]);
    seen[id] = true;
    const double p = std::exp(r.logprobs[i]);
    if (!Vocab::is_outcome(static_cast<TokenId>(id)) && p > 0.0) {
      throw RemoteScoringError("remote LM assigned mass to a context-only token");
    }
    dist.probs[id] = p;
    total += p;
  }
  if (!(std::abs(total - 1.0) <= 1e-6)) {
    throw RemoteScoringError("remote LM distribution sums to " + std::to_string(total));
  }
  for (double& p : dist.probs) p /= total;
  return dist;
}

RemoteModel::RemoteModel(Endpoint endpoint, double timeout_s)
    : endpoint_(std::move(endpoint)), timeout_s_(timeout_s) {}

RemoteModel::Reply RemoteModel::query(const std::vector<std::string>& context) const {
  json req = {{"context", context}};
  HttpReply http = post_json(endpoint_, req.dump(), timeout_s_);
  if (!http.ok) throw RemoteScoringError(http.error);
  ParsedReply r = parse_lm_reply(http.body);
  return Reply{std::move(r.tokens), std::move(r.logprobs)};
}

const Vocab& RemoteModel::vocab() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!vocab_) {
    Reply r = query({});
    Vocab v;
    for (const auto& t : r.tokens) v.add(t);
    vocab_ = std::move(v);
  }
  return *vocab_;
}

TokenDist RemoteModel::next_token_dist(std::span<const TokenId> context) const {
  const Vocab& v = vocab();
  json req = {{"context", v.strings(context)}};
  HttpReply http = post_json(endpoint_, req.dump(), timeout_s_);
  if (!http.ok) throw RemoteScoringError(http.error);
  return decode_lm_response(http.body, v);
}

}  // namespace cqgen
