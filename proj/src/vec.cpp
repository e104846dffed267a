#include "twistvo/vec.hpp"

#include <algorithm>

namespace twistvo {

Scalar Vec::at(uint32_t i) const {
  auto it = std::lower_bound(e_.begin(), e_.end(), i, [](const Entry& e, uint32_t k) { return e.first < k; });
  if (it != e_.end() && it->first == i) return it->second;
  return {};
}

void Vec::add(uint32_t i, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = std::lower_bound(e_.begin(), e_.end(), i, [](const Entry& e, uint32_t k) { return e.first < k; });
  if (it != e_.end() && it->first == i) {
    it->second += c;
    if (it->second.is_zero()) e_.erase(it);
  } else {
    e_.insert(it, {i, c});
  }
}

Vec& Vec::operator+=(const Vec& o) {
  if (o.e_.empty()) return *this;
  if (e_.empty()) return *this = o;
  std::vector<Entry> out;
  out.reserve(e_.size() + o.e_.size());
  size_t i = 0, j = 0;
  while (i < e_.size() || j < o.e_.size()) {
    if (j == o.e_.size() || (i < e_.size() && e_[i].first < o.e_[j].first)) {
      out.push_back(std::move(e_[i++]));
    } else if (i == e_.size() || o.e_[j].first < e_[i].first) {
      out.push_back(o.e_[j++]);
    } else {
      Scalar c = e_[i].second + o.e_[j].second;
      if (!c.is_zero()) out.push_back({e_[i].first, std::move(c)});
      ++i;
      ++j;
    }
  }
  e_ = std::move(out);
  return *this;
}

Vec& Vec::operator-=(const Vec& o) { return *this += -o; }

Vec& Vec::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    e_.clear();
    return *this;
  }
  for (auto& [i, c] : e_) c *= s;
  return *this;
}

Vec Vec::operator-() const {
  Vec r = *this;
  for (auto& [i, c] : r.e_) c = -c;
  return r;
}

bool operator==(const Vec& a, const Vec& b) {
  if (a.e_.size() != b.e_.size()) return false;
  for (size_t i = 0; i < a.e_.size(); ++i)
    if (a.e_[i].first != b.e_[i].first || !(a.e_[i].second == b.e_[i].second)) return false;
  return true;
}

}  // namespace twistvo
