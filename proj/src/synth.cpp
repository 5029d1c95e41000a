#include "viscom/synth.hpp"

#include <cstdio>

#include "viscom/ml/rng.hpp"

namespace viscom {

SynthData generate_synthetic(const SynthOptions& o) {
  ml::Rng rng(ml::derive_seed(o.seed, {ml::tag("synthetic")}));
  std::vector<std::string> names;
  if (o.planted) names.push_back("synth.planted");
  for (std::size_t i = 0; i < o.n_noise; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "synth.noise_%02zu", i + 1);
    names.emplace_back(buf);
  }
  if (o.constant_feature) names.push_back("synth.constant");

  SynthData out;
  out.features.key_columns = {"user_id", "scope"};
  out.features.names = names;
  std::vector<double> kgs;
  std::vector<std::string> users;
  for (std::size_t s = 0; s < o.n_sessions; ++s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "u%03zu", s + 1);
    users.emplace_back(buf);
    std::vector<std::optional<double>> row;
    double driver = 0.0;
    if (o.planted) {
      driver = rng.normal();
      row.emplace_back(driver);
    }
    for (std::size_t i = 0; i < o.n_noise; ++i) row.emplace_back(rng.normal());
    if (o.constant_feature) row.emplace_back(1.0);
    if (!o.planted) driver = rng.normal();
    kgs.push_back(0.2 + 0.15 * driver + (o.planted ? rng.normal(0.0, o.kg_noise) : 0.0));
    out.features.keys.push_back({users.back(), "session"});
    out.features.rows.push_back(std::move(row));
  }
  const auto labels = label_classes(kgs);
  for (std::size_t s = 0; s < o.n_sessions; ++s) out.labels.push_back({users[s], labels[s]});
  return out;
}

std::vector<SessionRecord> generate_sessions(const std::vector<std::string>& snapshot_ids,
                                             std::size_t n_sessions, std::uint64_t seed) {
  if (snapshot_ids.empty()) throw std::invalid_argument("no snapshot ids to visit");
  static const char* kQueries[] = {"lightning", "how lightning forms", "thunderstorm formation",
                                   "why thunder follows lightning", "cloud charge separation"};
  ml::Rng rng(ml::derive_seed(seed, {ml::tag("sessions")}));
  std::vector<SessionRecord> out;
  for (std::size_t s = 0; s < n_sessions; ++s) {
    SessionRecord r;
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%03zu", s + 1);
    r.user_id = buf;
    double t = 0.0;
    NavigationEvent q;
    q.timestamp = t;
    q.query = kQueries[rng.below(std::size(kQueries))];
    q.url = "https://www.google.com/search?q=" + std::to_string(s);
    q.page_type = PageType::kSerp;
    r.events.push_back(q);
    const std::size_t visits = 1 + rng.below(3);
    for (std::size_t v = 0; v < visits; ++v) {
      t += 10.0 + static_cast<double>(rng.below(120));
      NavigationEvent e;
      e.timestamp = t;
      e.snapshot_id = snapshot_ids[rng.below(snapshot_ids.size())];
      e.url = "https://example.org/" + *e.snapshot_id;
      e.page_type = PageType::kContent;
      r.events.push_back(e);
    }
    r.test.n_items = 10;
    r.test.pre_correct = static_cast<int>(rng.below(6));
    r.test.post_correct = r.test.pre_correct + static_cast<int>(rng.below(5));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace viscom
