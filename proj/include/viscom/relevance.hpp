#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "viscom/features.hpp"
#include "viscom/text.hpp"

namespace viscom {

class ProviderFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Embedding = std::vector<double>;

// Deterministic text encoder. Vectors are unit-norm, or all-zero for text
// without tokens.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) const = 0;
  Embedding embed(const std::string& text) const;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s);

// Lowercased ASCII-alphanumeric tokens (bytes >= 0x80 are token bytes).
std::vector<std::string> embedding_tokens(std::string_view text);

// Bag of tokens hashed with fnv1a64 into `dim` buckets, L2-normalised.
class HashedBagProvider : public EmbeddingProvider {
 public:
  explicit HashedBagProvider(std::size_t dim = 1024) : dim_(dim) {}
  std::string id() const override { return "hashed-bag-" + std::to_string(dim_); }
  std::size_t dim() const override { return dim_; }
  std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) const override;

 private:
  std::size_t dim_;
};

// POST {base_url}/embed with {"texts":[...]}, expecting
// {"dim":int,"vectors":[[...],...]} of unit-norm vectors. At most
// `max_in_flight` requests run concurrently.
class RemoteEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(std::string base_url, int max_in_flight = 4,
                                   double timeout_seconds = 30.0);
  ~RemoteEmbeddingProvider() override;
  std::string id() const override { return "remote:" + base_url_; }
  // Learned from the first response; 0 before any request.
  std::size_t dim() const override;
  std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) const override;

 private:
  std::string base_url_;
  double timeout_seconds_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
  mutable std::size_t dim_ = 0;
  mutable std::unique_ptr<std::mutex> dim_mutex_;
};

struct FactSet {
  std::vector<std::string> facts;
  std::string provider = "hashed-bag-1024";
};

// {"facts":[str,...]}; throws std::invalid_argument on an empty or malformed list.
FactSet parse_facts_json(const std::string& text);
std::string facts_to_json(const FactSet& f);

// Example thunderstorm facts; not the facts used in any published study.
FactSet default_facts();

double cosine(const Embedding& a, const Embedding& b);

// Feature j = max over paragraphs of cosine(paragraph, fact j); zeros for
// empty text. Throws ProviderFailure on wrong dimensions or non-finite values.
FeatureVector relevance_features(const MainText& text, const FactSet& facts,
                                 const EmbeddingProvider& provider);

}  // namespace viscom
