#include "tmpn/multiset.hpp"

#include <algorithm>
#include <sstream>

namespace tmpn {

symbol symbol_table::intern(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return symbol{it->second};
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  return symbol{id};
}

std::optional<symbol> symbol_table::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return symbol{it->second};
}

const std::string& symbol_table::name(symbol s) const {
  if (s.id >= names_.size()) throw error("symbol id out of range");
  return names_[s.id];
}

namespace {

count_t checked_add(count_t a, count_t b) {
  count_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("multiset count overflow");
  return r;
}

count_t checked_mul(count_t a, count_t b) {
  count_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("multiset count overflow");
  return r;
}

}  // namespace

count_t multiset::count(symbol s) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), s,
                             [](const auto& item, symbol key) { return item.first < key; });
  if (it != items_.end() && it->first == s) return it->second;
  return 0;
}

count_t multiset::size() const {
  count_t total = 0;
  for (const auto& [s, n] : items_) total = checked_add(total, n);
  return total;
}

void multiset::add(symbol s, count_t n) {
  if (n == 0) return;
  auto it = std::lower_bound(items_.begin(), items_.end(), s,
                             [](const auto& item, symbol key) { return item.first < key; });
  if (it != items_.end() && it->first == s) {
    it->second = checked_add(it->second, n);
  } else {
    items_.insert(it, {s, n});
  }
}

void multiset::remove(symbol s, count_t n) {
  if (n == 0) return;
  auto it = std::lower_bound(items_.begin(), items_.end(), s,
                             [](const auto& item, symbol key) { return item.first < key; });
  if (it == items_.end() || it->first != s || it->second < n)
    throw underflow_error("multiset subtraction below zero");
  it->second -= n;
  if (it->second == 0) items_.erase(it);
}

void multiset::set(symbol s, count_t n) {
  auto it = std::lower_bound(items_.begin(), items_.end(), s,
                             [](const auto& item, symbol key) { return item.first < key; });
  if (it != items_.end() && it->first == s) {
    if (n == 0)
      items_.erase(it);
    else
      it->second = n;
  } else if (n > 0) {
    items_.insert(it, {s, n});
  }
}

void multiset::add(const multiset& other) {
  for (const auto& [s, n] : other) add(s, n);
}

void multiset::remove(const multiset& other) {
  // validate first so a failed removal leaves *this untouched
  if (!tmpn::leq(other, *this)) throw underflow_error("multiset subtraction below zero");
  for (const auto& [s, n] : other) remove(s, n);
}

multiset add(const multiset& a, const multiset& b) {
  multiset r = a;
  r.add(b);
  return r;
}

multiset sub(const multiset& a, const multiset& b) {
  multiset r = a;
  r.remove(b);
  return r;
}

bool leq(const multiset& a, const multiset& b) {
  for (const auto& [s, n] : a)
    if (b.count(s) < n) return false;
  return true;
}

multiset scale(count_t n, const multiset& a) {
  multiset r;
  if (n == 0) return r;
  for (const auto& [s, c] : a) r.add(s, checked_mul(n, c));
  return r;
}

std::string to_string(const multiset& m, const symbol_table& table) {
  if (m.empty()) return "eps";
  std::ostringstream out;
  bool first = true;
  for (const auto& [s, n] : m) {
    if (!first) out << ' ';
    first = false;
    out << table.name(s);
    if (n != 1) out << '^' << n;
  }
  return out.str();
}

}  // namespace tmpn
