// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>

namespace wddl {

struct NetCap {
  double wire = 0.0;
  double pin = 0.0;
  double total() const { return wire + pin; }
  friend bool operator==(const NetCap&, const NetCap&) = default;
};

/// Load capacitance per net in normalized units.
struct CapTable {
  std::map<std::string, NetCap, std::less<>> nets;

  const NetCap* find(std::string_view net) const;
  /// Total capacitance; throws SimulationError for an unknown net.
  double total(std::string_view net) const;
  friend bool operator==(const CapTable&, const CapTable&) = default;
};

/// `net,cap_wire,cap_pin,cap_total`, one row per net, sorted by name.
std::string emit_caps_csv(const CapTable& t);
CapTable parse_caps_csv(std::string_view text);

}  // namespace wddl
