#pragma once

#include <atomic>
#include <chrono>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace sere {

class Clock {
 public:
  using time_point = std::chrono::system_clock::time_point;
  virtual ~Clock() = default;
  virtual time_point now() const = 0;
};

class SystemClock final : public Clock {
 public:
  time_point now() const override { return std::chrono::system_clock::now(); }
};

/// Clock that only moves when told to.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(time_point start = time_point{}) : ticks_(start.time_since_epoch().count()) {}

  time_point now() const override { return time_point(time_point::duration(ticks_.load())); }
  void set(time_point t) { ticks_.store(t.time_since_epoch().count()); }
  void advance(std::chrono::system_clock::duration d) { ticks_.fetch_add(d.count()); }

 private:
  std::atomic<time_point::duration::rep> ticks_;
};

/// Thread-safe least-recently-used cache whose entries expire `ttl` after
/// insertion.
template <class Key, class Value, class Hash = std::hash<Key>>
class LruTtlCache {
 public:
  LruTtlCache(std::size_t capacity, std::chrono::seconds ttl, std::shared_ptr<const Clock> clock)
      : capacity_(capacity), ttl_(ttl), clock_(std::move(clock)) {
    if (capacity_ == 0) throw std::invalid_argument("cache capacity must be positive");
  }

  std::optional<Value> get(const Key& key) {
    std::lock_guard lock(mutex_);
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    if (expired(*it->second)) {
      order_.erase(it->second);
      index_.erase(it);
      return std::nullopt;
    }
    order_.splice(order_.begin(), order_, it->second);
    return it->second->value;
  }

  void put(const Key& key, Value value) {
    std::lock_guard lock(mutex_);
    const auto now = clock_->now();
    if (auto it = index_.find(key); it != index_.end()) {
      it->second->value = std::move(value);
      it->second->stored_at = now;
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    order_.push_front(Entry{key, std::move(value), now});
    index_.emplace(key, order_.begin());
    while (order_.size() > capacity_) {
      index_.erase(order_.back().key);
      order_.pop_back();
    }
  }

  /// Presence check that does not touch recency.
  bool contains(const Key& key) const {
    std::lock_guard lock(mutex_);
    auto it = index_.find(key);
    return it != index_.end() && !expired(*it->second);
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return order_.size();
  }

 private:
  struct Entry {
    Key key;
    Value value;
    Clock::time_point stored_at;
  };

  bool expired(const Entry& e) const { return clock_->now() - e.stored_at >= ttl_; }

  std::size_t capacity_;
  std::chrono::seconds ttl_;
  std::shared_ptr<const Clock> clock_;
  mutable std::mutex mutex_;
  std::list<Entry> order_;  // most recent first
  std::unordered_map<Key, typename std::list<Entry>::iterator, Hash> index_;
};

}  // namespace sere
