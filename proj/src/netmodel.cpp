#include "ring3pc/netmodel.hpp"

#include "ring3pc/errors.hpp"

namespace ring3pc {

NetProfile profile_from_string(std::string_view s) {
  if (s == "lan") return lan();
  if (s == "man") return man();
  if (s == "wan") return wan();
  throw ConfigError("unknown network profile '" + std::string(s) + "' (expected lan, man or wan)");
}

}  // namespace ring3pc
