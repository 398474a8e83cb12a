#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ring3pc {

/// Report-side latency model: time = rounds·RTT + bytes·8 / bandwidth. Nothing sleeps.
struct NetProfile {
  std::string name;
  double rtt_ms;
  double mbps;

  double seconds(std::uint64_t rounds, std::uint64_t bytes) const {
    return static_cast<double>(rounds) * rtt_ms / 1000.0 + static_cast<double>(bytes) * 8.0 / (mbps * 1e6);
  }
};

inline NetProfile lan() { return {"lan", 0.2, 1000.0}; }
inline NetProfile man() { return {"man", 12.0, 100.0}; }
inline NetProfile wan() { return {"wan", 80.0, 40.0}; }
/// "lan", "man" or "wan"; ConfigError otherwise.
NetProfile profile_from_string(std::string_view s);

}  // namespace ring3pc
