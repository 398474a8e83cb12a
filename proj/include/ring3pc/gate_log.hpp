#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "ring3pc/ring.hpp"
#include "ring3pc/shares.hpp"

namespace ring3pc {

enum class GateKind { Mul, Dot };

struct MulRecord {
  Masked<RingElem> x, y, z;
  Phase phase;
};

struct DotRecord {
  std::vector<Masked<RingElem>> x, y;
  Masked<RingElem> z;
  Phase phase;
};

/// Every Mul/Dot executed over one base ring, in execution order.
struct TripleLog {
  unsigned ell = 0;
  std::vector<MulRecord> muls;
  std::vector<DotRecord> dots;
};

/// Per-party gate logs keyed by ring width. Frozen before postprocessing challenges open.
class GateLogs {
 public:
  void add_mul(unsigned ell, MulRecord r);
  void add_dot(unsigned ell, DotRecord r);
  const TripleLog* find(unsigned ell) const;
  const std::map<unsigned, TripleLog>& all() const { return logs_; }
  std::size_t mul_count(unsigned ell) const;
  std::size_t dot_count(unsigned ell) const;
  /// Sum of dot dimensions.
  std::size_t dot_terms(unsigned ell) const;
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  void clear();

 private:
  std::map<unsigned, TripleLog> logs_;
  bool frozen_ = false;
};

}  // namespace ring3pc
