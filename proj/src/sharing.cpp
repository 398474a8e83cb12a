#include "ring3pc/sharing.hpp"

#include <cstdio>

namespace ring3pc {

Digest rec_digest(std::uint64_t session, std::uint64_t rec_id, char component, const Bytes& payload) {
  Hasher h;
  h.update_u64(session).update_u64(rec_id);
  std::uint8_t c = static_cast<std::uint8_t>(component);
  h.update(&c, 1).update(payload);
  return h.finish();
}

std::string dump_line(std::uint64_t gate_id, bool masked, const std::string& ring, const std::vector<std::uint64_t>& fields,
                      unsigned width) {
  std::string out = std::to_string(gate_id) + ", " + (masked ? "MASK" : "ADD") + ", " + ring + ",";
  const int digits = static_cast<int>((width + 3) / 4);
  char buf[32];
  for (auto v : fields) {
    std::snprintf(buf, sizeof buf, " %0*llx", digits, static_cast<unsigned long long>(v));
    out += buf;
  }
  return out;
}

}  // namespace ring3pc
