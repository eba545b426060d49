#ifndef RB_DIFF_PARAM_STORE_HPP_
#define RB_DIFF_PARAM_STORE_HPP_

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rb/rng.hpp"

namespace rb::diff {

struct Shape {
  int rows = 0;
  int cols = 1;  // cols == 1 for plain vectors
  int size() const { return rows * cols; }
  bool operator==(const Shape&) const = default;
};

// Named parameter arrays plus their optimizer slots. Entries have stable
// addresses and sorted iteration order, so updates and serialization are
// deterministic.
class ParamStore {
 public:
  struct Entry {
    std::string name;
    Shape shape;
    std::vector<double> value;
    std::vector<double> second_moment;
    std::vector<double> momentum;
  };

  // Creates the entry if missing (uniform init in [-scale, scale]), otherwise
  // returns the existing one after a shape check. Reuse after checkpoint load
  // goes through here.
  Entry& ensure(const std::string& name, Shape shape, double init_scale,
                Rng& rng) {
    auto it = entries_.find(name);
    if (it != entries_.end()) {
      if (!(it->second.shape == shape))
        throw std::invalid_argument("ParamStore: shape mismatch for " + name);
      return it->second;
    }
    Entry e;
    e.name = name;
    e.shape = shape;
    e.value.resize(static_cast<std::size_t>(shape.size()));
    for (double& v : e.value) v = rng.uniform(-init_scale, init_scale);
    e.second_moment.assign(e.value.size(), 0.0);
    e.momentum.assign(e.value.size(), 0.0);
    auto [pos, inserted] = entries_.emplace(name, std::move(e));
    (void)inserted;
    return pos->second;
  }

  Entry& ensure_zeros(const std::string& name, Shape shape) {
    auto it = entries_.find(name);
    if (it != entries_.end()) {
      if (!(it->second.shape == shape))
        throw std::invalid_argument("ParamStore: shape mismatch for " + name);
      return it->second;
    }
    Entry e;
    e.name = name;
    e.shape = shape;
    e.value.assign(static_cast<std::size_t>(shape.size()), 0.0);
    e.second_moment.assign(e.value.size(), 0.0);
    e.momentum.assign(e.value.size(), 0.0);
    auto [pos, inserted] = entries_.emplace(name, std::move(e));
    (void)inserted;
    return pos->second;
  }

  Entry& at(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end())
      throw std::out_of_range("ParamStore: no entry named " + name);
    return it->second;
  }
  const Entry& at(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end())
      throw std::out_of_range("ParamStore: no entry named " + name);
    return it->second;
  }

  bool contains(const std::string& name) const {
    return entries_.count(name) > 0;
  }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& [k, e] : entries_) n += e.value.size();
    return n;
  }

  bool all_finite() const {
    for (const auto& [k, e] : entries_)
      for (double v : e.value)
        if (!std::isfinite(v)) return false;
    return true;
  }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::size_t count() const { return entries_.size(); }

 private:
  std::map<std::string, Entry> entries_;
};

using GradMap = std::map<std::string, std::vector<double>>;

}  // namespace rb::diff

#endif  // RB_DIFF_PARAM_STORE_HPP_
