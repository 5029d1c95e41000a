#include "viscom/relevance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>

#include "httplib.h"
#include "json.hpp"

namespace viscom {

Embedding EmbeddingProvider::embed(const std::string& text) const {
  auto out = embed_batch({text});
  if (out.size() != 1) throw ProviderFailure("provider returned wrong batch size");
  return std::move(out.front());
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> embedding_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<Embedding> HashedBagProvider::embed_batch(
    const std::vector<std::string>& texts) const {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) {
    Embedding v(dim_, 0.0);
    for (const std::string& tok : embedding_tokens(t)) v[fnv1a64(tok) % dim_] += 1.0;
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& x : v) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(std::string base_url, int max_in_flight,
                                                 double timeout_seconds)
    : base_url_(std::move(base_url)),
      timeout_seconds_(timeout_seconds),
      slots_(std::make_unique<std::counting_semaphore<>>(std::max(1, max_in_flight))),
      dim_mutex_(std::make_unique<std::mutex>()) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

RemoteEmbeddingProvider::~RemoteEmbeddingProvider() = default;

std::size_t RemoteEmbeddingProvider::dim() const {
  std::lock_guard lock(*dim_mutex_);
  return dim_;
}

std::vector<Embedding> RemoteEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) const {
  nlohmann::json body;
  body["texts"] = texts;

  slots_->acquire();
  httplib::Result res;
  {
    httplib::Client client(base_url_);
    const auto secs = static_cast<time_t>(timeout_seconds_);
    client.set_connection_timeout(secs, 0);
    client.set_read_timeout(secs, 0);
    res = client.Post("/embed", body.dump(), "application/json");
  }
  slots_->release();

  if (!res) throw ProviderFailure("embedding request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw ProviderFailure("embedding service answered HTTP " + std::to_string(res->status));
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception&) {
    throw ProviderFailure("embedding reply is not JSON");
  }
  if (!reply.is_object() || !reply.contains("dim") || !reply["dim"].is_number_integer() ||
      !reply.contains("vectors") || !reply["vectors"].is_array()) {
    throw ProviderFailure("embedding reply lacks dim/vectors");
  }
  const auto dim = reply["dim"].get<long long>();
  if (dim <= 0) throw ProviderFailure("embedding dim must be > 0");
  if (reply["vectors"].size() != texts.size()) {
    throw ProviderFailure("embedding reply has wrong vector count");
  }
  std::vector<Embedding> out;
  for (const auto& jv : reply["vectors"]) {
    if (!jv.is_array() || jv.size() != static_cast<std::size_t>(dim)) {
      throw ProviderFailure("embedding vector has wrong dimension");
    }
    Embedding v;
    v.reserve(jv.size());
    double norm = 0.0;
    for (const auto& x : jv) {
      if (!x.is_number()) throw ProviderFailure("embedding component is not a number");
      const double d = x.get<double>();
      if (!std::isfinite(d)) throw ProviderFailure("embedding component is not finite");
      v.push_back(d);
      norm += d * d;
    }
    norm = std::sqrt(norm);
    if (norm != 0.0 && std::abs(norm - 1.0) > 1e-6) {
      throw ProviderFailure("embedding vector is not unit-norm");
    }
    out.push_back(std::move(v));
  }
  {
    std::lock_guard lock(*dim_mutex_);
    if (dim_ != 0 && dim_ != static_cast<std::size_t>(dim)) {
      throw ProviderFailure("embedding dim changed between requests");
    }
    dim_ = static_cast<std::size_t>(dim);
  }
  return out;
}

FactSet parse_facts_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_object() || !doc.contains("facts") || !doc["facts"].is_array()) {
    throw std::invalid_argument("facts.json must hold {\"facts\": [...]}");
  }
  FactSet f;
  for (const auto& item : doc["facts"]) {
    if (!item.is_string()) throw std::invalid_argument("facts must be strings");
    f.facts.push_back(item.get<std::string>());
  }
  if (f.facts.empty()) throw std::invalid_argument("facts must be non-empty");
  if (doc.contains("provider") && doc["provider"].is_string()) {
    f.provider = doc["provider"].get<std::string>();
  }
  return f;
}

std::string facts_to_json(const FactSet& f) {
  nlohmann::ordered_json doc;
  doc["facts"] = f.facts;
  return doc.dump(1) + "\n";
}

FactSet default_facts() {
  FactSet f;
  f.facts = {
      "Thunderstorms form when warm moist air rises rapidly into cooler air.",
      "Rising air cools and its water vapour condenses into cumulonimbus clouds.",
      "Collisions between ice crystals and graupel separate electric charge in the cloud.",
      "The upper part of a thunderstorm cloud usually becomes positively charged.",
      "The lower part of the cloud usually carries a negative charge.",
      "Lightning is an electrical discharge that equalises charge differences.",
      "A stepped leader moves down from the cloud before a lightning strike.",
      "A return stroke travels upward from the ground along the leader channel.",
      "Lightning heats the air so quickly that it expands and causes thunder.",
      "Light travels faster than sound, so lightning is seen before thunder is heard.",
  };
  return f;
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) throw ProviderFailure("embedding dimensions differ");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

FeatureVector relevance_features(const MainText& text, const FactSet& facts,
                                 const EmbeddingProvider& provider) {
  std::vector<double> values(facts.facts.size(), 0.0);
  if (!text.paragraphs.empty()) {
    const auto fact_vecs = provider.embed_batch(facts.facts);
    const auto para_vecs = provider.embed_batch(text.paragraphs);
    if (fact_vecs.size() != facts.facts.size() || para_vecs.size() != text.paragraphs.size()) {
      throw ProviderFailure("provider returned wrong batch size");
    }
    const std::size_t dim = provider.dim();
    for (const auto* batch : {&fact_vecs, &para_vecs}) {
      for (const Embedding& v : *batch) {
        if (v.size() != dim) throw ProviderFailure("provider returned wrong dimension");
        for (double x : v) {
          if (!std::isfinite(x)) throw ProviderFailure("provider returned non-finite value");
        }
      }
    }
    for (std::size_t j = 0; j < fact_vecs.size(); ++j) {
      double best = 0.0;
      for (std::size_t i = 0; i < para_vecs.size(); ++i) {
        const double c = cosine(para_vecs[i], fact_vecs[j]);
        best = i == 0 ? c : std::max(best, c);
      }
      values[j] = best;
    }
  }
  return FeatureVector(registry::webrel(facts.facts.size()), std::move(values));
}

}  // namespace viscom
