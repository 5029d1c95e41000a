#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "viscom/session.hpp"
#include "viscom/snapshot.hpp"

namespace viscom {

struct SynthOptions {
  std::size_t n_sessions = 112;
  std::size_t n_noise = 9;
  bool planted = true;         // KG driven by synth.planted; otherwise independent noise
  bool constant_feature = false;
  double kg_noise = 0.02;      // sd of the additive KG noise
  std::uint64_t seed = 42;
};

struct SynthData {
  FeatureTable features;  // keys user_id, scope
  std::vector<LabelRow> labels;
};

// Session rows with features synth.planted (optional), synth.noise_NN and
// synth.constant (optional), all N(0,1) except the constant. KG is
// 0.2 + 0.15 * planted + N(0, kg_noise), or 0.2 + 0.15 * N(0,1) without a
// planted feature; classes come from label_classes().
SynthData generate_synthetic(const SynthOptions& options);

// Session logs over existing snapshot ids: each session has one query, a
// SERP visit and 1-3 content visits drawn from `snapshot_ids`, and random
// pre/post test scores out of 10.
std::vector<SessionRecord> generate_sessions(const std::vector<std::string>& snapshot_ids,
                                             std::size_t n_sessions, std::uint64_t seed);

}  // namespace viscom
