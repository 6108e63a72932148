#pragma once

// Game records and the generate-only enumerator a generator hands out.

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "genlim/langset.hpp"

namespace genlim {

/// What a generator would emit if input stopped now.
class Enumerator {
 public:
  enum class Kind { transparent, opaque, empty_flagged };

  static Enumerator transparent(SymbolicSet support) {
    Enumerator e;
    e.kind_ = Kind::transparent;
    e.support_ = std::move(support);
    return e;
  }
  /// Black-box enumeration; clauses over it can only be approximated.
  static Enumerator opaque(std::function<Int(std::uint64_t)> fn) {
    Enumerator e;
    e.kind_ = Kind::opaque;
    e.fn_ = std::move(fn);
    return e;
  }
  /// Stand-in when the generator has nothing consistent to offer.
  static Enumerator flagged_empty() {
    Enumerator e;
    e.kind_ = Kind::empty_flagged;
    return e;
  }

  Kind kind() const { return kind_; }
  bool is_transparent() const { return kind_ == Kind::transparent; }
  bool flagged() const { return kind_ == Kind::empty_flagged; }

  /// Exact support; the empty set for a flagged enumerator.
  const SymbolicSet& support() const {
    if (kind_ == Kind::opaque) throw ValidationError("opaque enumerator has no symbolic support");
    return support_;
  }

  Int emit(std::uint64_t k) const {
    if (kind_ == Kind::opaque) return fn_(k);
    return enumerate_rank(support_, k);
  }

  friend bool operator==(const Enumerator& a, const Enumerator& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ == Kind::opaque) return false;  // not comparable
    return a.support_ == b.support_;
  }

 private:
  Kind kind_ = Kind::empty_flagged;
  SymbolicSet support_;
  std::function<Int(std::uint64_t)> fn_;
};

/// One round: input, optional query and answer, output (nullopt is the
/// sentinel for "declined"), optional generate-only snapshot.
struct Round {
  Int x = 0;
  std::optional<Int> y;
  std::optional<bool> a;
  std::optional<Int> z;
  std::optional<Enumerator> snapshot;
};

class Transcript {
 public:
  std::vector<Round> rounds;

  std::size_t size() const { return rounds.size(); }
  bool empty() const { return rounds.empty(); }

  /// Distinct inputs x_1..x_t.
  std::set<Int> S(std::size_t t) const {
    std::set<Int> out;
    for (std::size_t i = 0; i < t && i < rounds.size(); ++i) out.insert(rounds[i].x);
    return out;
  }
  std::set<Int> S() const { return S(rounds.size()); }

  /// Distinct outputs z_1..z_{t-1}; sentinels are skipped.
  std::set<Int> Z_before(std::size_t t) const {
    std::set<Int> out;
    for (std::size_t i = 0; i + 1 < t && i < rounds.size(); ++i)
      if (rounds[i].z) out.insert(*rounds[i].z);
    return out;
  }

  /// Queries answered yes (resp. no) through round t.
  std::set<Int> answered(std::size_t t, bool yes) const {
    std::set<Int> out;
    for (std::size_t i = 0; i < t && i < rounds.size(); ++i)
      if (rounds[i].y && rounds[i].a && *rounds[i].a == yes) out.insert(*rounds[i].y);
    return out;
  }

  Transcript prefix(std::size_t t) const {
    Transcript out;
    out.rounds.assign(rounds.begin(), rounds.begin() + static_cast<std::ptrdiff_t>(std::min(t, rounds.size())));
    return out;
  }
};

/// Same record; kept as a separate name where the four-beat form is meant.
using FeedbackTranscript = Transcript;

/// The generator's view of the current round.
struct Turn {
  Int x = 0;
  std::optional<Int> query;
  std::optional<bool> answer;
};

inline SymbolicSet to_set(const std::set<Int>& xs) {
  std::vector<Int> v(xs.begin(), xs.end());
  return SymbolicSet::finite(v);
}

}  // namespace genlim
