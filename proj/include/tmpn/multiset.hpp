#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tmpn/errors.hpp"

namespace tmpn {

using count_t = std::uint64_t;

// Interned handle into a symbol_table. Only meaningful together with the
// table it came from; interning is injective within one model.
struct symbol {
  std::uint32_t id = 0;
  friend auto operator<=>(const symbol&, const symbol&) = default;
};

class symbol_table {
 public:
  // Returns the existing symbol for `name` or interns a new one.
  symbol intern(std::string_view name);
  std::optional<symbol> find(std::string_view name) const;
  const std::string& name(symbol s) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  bool operator==(const symbol_table& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Finite multiset over interned symbols. Stored sorted by symbol id with no
// zero counts, so equal multisets compare equal memberwise.
class multiset {
 public:
  multiset() = default;

  count_t count(symbol s) const;
  bool contains(symbol s) const { return count(s) > 0; }
  bool empty() const { return items_.empty(); }
  // total number of objects, counted with multiplicity
  count_t size() const;
  // number of distinct symbols
  std::size_t support_size() const { return items_.size(); }

  // add n copies of s (checked for overflow)
  void add(symbol s, count_t n);
  // remove n copies of s; throws underflow_error if fewer are present
  void remove(symbol s, count_t n);
  void set(symbol s, count_t n);

  void add(const multiset& other);
  void remove(const multiset& other);

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  friend bool operator==(const multiset&, const multiset&) = default;
  // lexicographic on the sorted (symbol, count) sequence; a deterministic
  // total order used for canonical output, not the inclusion order
  friend auto operator<=>(const multiset&, const multiset&) = default;

 private:
  std::vector<std::pair<symbol, count_t>> items_;
};

multiset add(const multiset& a, const multiset& b);
// throws underflow_error unless b <= a pointwise
multiset sub(const multiset& a, const multiset& b);
// pointwise <=; the partial inclusion order
bool leq(const multiset& a, const multiset& b);
// n scalar copies of a (checked for overflow)
multiset scale(count_t n, const multiset& a);

// "a^2 b^5" with factors in symbol-id order; "eps" for the empty multiset
std::string to_string(const multiset& m, const symbol_table& table);

}  // namespace tmpn
