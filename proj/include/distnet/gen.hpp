#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "distnet/net.hpp"

namespace distnet {

// knobs for the random test corpus; the defaults match the property suites
struct gen_params {
  std::size_t max_places = 6;
  std::size_t max_transitions = 6;
  std::size_t max_arcs = 12;
  std::size_t max_preset = 3;
  bool plain = true;       // injective visible labels, no internal transitions
  double tau_prob = 0.25;  // chance per transition when plain is false
};

// One sampling attempt. Draws sizes and arcs, guarantees nonempty presets
// and at least one marked place, drops places no transition consumes (their
// tokens would be inert), and filters out anything that is not contact-free
// or exceeds max_arcs; nullopt when a draw fails a filter.
std::optional<labelled_net> random_net(std::mt19937_64& rng,
                                       const gen_params& p = {});

// deterministic corpus member: retries seeded draws until one passes
labelled_net corpus_net(std::uint64_t seed, std::size_t index,
                        const gen_params& p = {});

}  // namespace distnet
