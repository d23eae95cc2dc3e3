#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace setmax {

/// Immutable-style set of element ids, stored sorted ascending without
/// duplicates. Equality is extensional; the canonical text form is the
/// ascending comma-separated id list (e.g. "1,3,7").
class Subset {
 public:
  Subset() = default;

  Subset(std::initializer_list<int> ids) : Subset(std::vector<int>(ids)) {}

  explicit Subset(std::vector<int> ids) : ids_(std::move(ids)) {
    for (int e : ids_) {
      if (e < 0) throw std::domain_error("Subset: negative element id");
    }
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  /// Bit i of `mask` selects element i. Ground sets above 64 elements use the
  /// vector form directly.
  static Subset from_mask(std::uint64_t mask) {
    Subset s;
    for (int i = 0; mask != 0; ++i, mask >>= 1) {
      if (mask & 1ULL) s.ids_.push_back(i);
    }
    return s;
  }

  std::uint64_t to_mask() const {
    std::uint64_t m = 0;
    for (int e : ids_) {
      if (e >= 64) throw std::domain_error("Subset::to_mask: element id >= 64");
      m |= 1ULL << e;
    }
    return m;
  }

  bool contains(int e) const {
    return std::binary_search(ids_.begin(), ids_.end(), e);
  }

  Subset with(int e) const {
    Subset s = *this;
    auto it = std::lower_bound(s.ids_.begin(), s.ids_.end(), e);
    if (it == s.ids_.end() || *it != e) s.ids_.insert(it, e);
    return s;
  }

  Subset without(int e) const {
    Subset s = *this;
    auto it = std::lower_bound(s.ids_.begin(), s.ids_.end(), e);
    if (it != s.ids_.end() && *it == e) s.ids_.erase(it);
    return s;
  }

  /// Removes `out` and inserts `in` in one step (the exchange move shape).
  Subset exchanged(int out, int in) const { return without(out).with(in); }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<int>& ids() const { return ids_; }
  std::vector<int>::const_iterator begin() const { return ids_.begin(); }
  std::vector<int>::const_iterator end() const { return ids_.end(); }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(ids_[i]);
    }
    return out;
  }

  friend bool operator==(const Subset& a, const Subset& b) { return a.ids_ == b.ids_; }
  friend bool operator!=(const Subset& a, const Subset& b) { return !(a == b); }
  /// Lexicographic order on the ascending id sequence (tie-break order used
  /// by the enumeration routines; the empty set sorts first).
  friend bool operator<(const Subset& a, const Subset& b) { return a.ids_ < b.ids_; }

  friend std::ostream& operator<<(std::ostream& os, const Subset& s) {
    return os << '{' << s.to_string() << '}';
  }

 private:
  std::vector<int> ids_;
};

struct SubsetHash {
  std::size_t operator()(const Subset& s) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int e : s.ids()) {
      h ^= static_cast<std::uint64_t>(e) + 1;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace setmax
