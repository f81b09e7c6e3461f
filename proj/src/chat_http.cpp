// HTTP transport and request encoding. Kept apart from agents.cpp so only this
// translation unit pulls in cpp-httplib and OpenSSL.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <cstdlib>

#include "goalassign/agents.hpp"

namespace goalassign {

using nlohmann::json;

namespace {

std::string base64(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace

std::string ChatRequest::to_json() const {
  json msgs = json::array();
  for (const auto& m : messages) {
    if (m.image_png.empty()) {
      msgs.push_back({{"role", m.role}, {"content", m.text}});
    } else {
      json parts = json::array();
      parts.push_back({{"type", "text"}, {"text", m.text}});
      parts.push_back(
          {{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + base64(m.image_png)}}}});
      msgs.push_back({{"role", m.role}, {"content", parts}});
    }
  }
  json body{{"model", model}, {"temperature", temperature}, {"messages", msgs}};
  return body.dump();
}

std::string ChatRequest::hash() const {
  const std::string body = to_json();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(body.data(), body.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

HttpChatTransport::HttpChatTransport(const LLMConfig& config) : timeout_(config.timeout_seconds) {
  config.check();
  const std::string& url = config.endpoint;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("llm endpoint must be an http(s) URL: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);

  if (!config.credential_env.empty()) {
    const char* key = std::getenv(config.credential_env.c_str());
    if (!key || !*key) throw CredentialMissing("environment variable " + config.credential_env + " is not set");
    api_key_ = key;
  }
}

std::string HttpChatTransport::complete(const ChatRequest& request) {
  httplib::Client client(scheme_host_port_);
  if (!client.is_valid()) throw TransportFailure("cannot create client for " + scheme_host_port_);
  auto secs = std::chrono::duration_cast<std::chrono::milliseconds>(timeout_);
  client.set_connection_timeout(secs);
  client.set_read_timeout(secs);
  client.set_write_timeout(secs);
  if (!api_key_.empty()) client.set_bearer_token_auth(api_key_);

  auto res = client.Post(path_, request.to_json(), "application/json");
  if (!res) throw TransportFailure("request to " + scheme_host_port_ + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw TransportFailure("endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  try {
    json doc = json::parse(res->body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportFailure(std::string("unexpected response body: ") + e.what());
  }
}

}  // namespace goalassign
