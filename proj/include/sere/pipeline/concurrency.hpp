#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <memory>
#include <mutex>
#include <semaphore>
#include <thread>
#include <vector>

#include "sere/datasource/provider.hpp"

namespace sere {

inline constexpr std::size_t kMaxInFlightLimit = 1024;

/// Caps the number of provider requests in flight across every caller that
/// shares the limiter.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(std::size_t capacity);

  class Permit {
   public:
    explicit Permit(InFlightLimiter& owner) : owner_(&owner) { owner_->slots_.acquire(); }
    Permit(const Permit&) = delete;
    Permit& operator=(const Permit&) = delete;
    ~Permit() { owner_->slots_.release(); }

   private:
    InFlightLimiter* owner_;
  };

  Permit acquire() { return Permit(*this); }
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  std::size_t capacity_;
  std::counting_semaphore<kMaxInFlightLimit> slots_;
};

/// Runs fn(0..n-1) on up to `workers` threads. The first exception thrown by
/// any call is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::min(n, std::max<std::size_t>(workers, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Provider decorator that holds a limiter permit for the duration of every
/// call to the wrapped provider.
class ThrottledProvider final : public Provider {
 public:
  ThrottledProvider(std::shared_ptr<const Provider> inner, std::shared_ptr<InFlightLimiter> limiter)
      : inner_(std::move(inner)), limiter_(std::move(limiter)) {}

  std::string name() const override { return inner_->name(); }
  std::vector<std::string> search(std::string_view term, std::size_t limit) const override;
  std::uint64_t hit_count(std::string_view phrase) const override;
  std::uint64_t cooccurrence_count(std::string_view phrase_a,
                                   std::string_view phrase_b) const override;
  std::uint64_t article_count() const override;
  std::string full_text(std::string_view title) const override;
  std::vector<std::string> out_links(std::string_view title) const override;
  std::vector<std::string> in_links(std::string_view title, std::size_t limit) const override;
  std::vector<std::string> categories(std::string_view title) const override;
  std::vector<std::string> broader(std::string_view title) const override;
  std::vector<std::string> narrower(std::string_view title, std::size_t limit) const override;
  std::string description(std::string_view title) const override;
  std::optional<std::string> thumbnail(std::string_view title) const override;
  std::vector<Passage> search_snippets(std::string_view phrase_a, std::string_view phrase_b,
                                       std::size_t limit) const override;

 private:
  std::shared_ptr<const Provider> inner_;
  std::shared_ptr<InFlightLimiter> limiter_;
};

Providers throttle(const Providers& providers, const std::shared_ptr<InFlightLimiter>& limiter);

}  // namespace sere
