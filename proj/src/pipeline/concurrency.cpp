#include "sere/pipeline/concurrency.hpp"

#include <stdexcept>

namespace sere {

InFlightLimiter::InFlightLimiter(std::size_t capacity)
    : capacity_(capacity), slots_(static_cast<std::ptrdiff_t>(capacity)) {
  if (capacity == 0 || capacity > kMaxInFlightLimit) {
    throw std::invalid_argument("in-flight limit must be within 1..1024");
  }
}

std::vector<std::string> ThrottledProvider::search(std::string_view term, std::size_t limit) const {
  auto permit = limiter_->acquire();
  return inner_->search(term, limit);
}

std::uint64_t ThrottledProvider::hit_count(std::string_view phrase) const {
  auto permit = limiter_->acquire();
  return inner_->hit_count(phrase);
}

std::uint64_t ThrottledProvider::cooccurrence_count(std::string_view phrase_a,
                                                    std::string_view phrase_b) const {
  auto permit = limiter_->acquire();
  return inner_->cooccurrence_count(phrase_a, phrase_b);
}

std::uint64_t ThrottledProvider::article_count() const {
  auto permit = limiter_->acquire();
  return inner_->article_count();
}

std::string ThrottledProvider::full_text(std::string_view title) const {
  auto permit = limiter_->acquire();
  return inner_->full_text(title);
}

std::vector<std::string> ThrottledProvider::out_links(std::string_view title) const {
  auto permit = limiter_->acquire();
  return inner_->out_links(title);
}

std::vector<std::string> ThrottledProvider::in_links(std::string_view title, std::size_t limit) const {
  auto permit = limiter_->acquire();
  return inner_->in_links(title, limit);
}

std::vector<std::string> ThrottledProvider::categories(std::string_view title) const {
  auto permit = limiter_->acquire();
  return inner_->categories(title);
}

std::vector<std::string> ThrottledProvider::broader(std::string_view title) const {
  auto permit = limiter_->acquire();
  return inner_->broader(title);
}

std::vector<std::string> ThrottledProvider::narrower(std::string_view title, std::size_t limit) const {
  auto permit = limiter_->acquire();
  return inner_->narrower(title, limit);
}

std::string ThrottledProvider::description(std::string_view title) const {
  auto permit = limiter_->acquire();
  return inner_->description(title);
}

std::optional<std::string> ThrottledProvider::thumbnail(std::string_view title) const {
  auto permit = limiter_->acquire();
  return inner_->thumbnail(title);
}

std::vector<Passage> ThrottledProvider::search_snippets(std::string_view phrase_a,
                                                        std::string_view phrase_b,
                                                        std::size_t limit) const {
  auto permit = limiter_->acquire();
  return inner_->search_snippets(phrase_a, phrase_b, limit);
}

Providers throttle(const Providers& providers, const std::shared_ptr<InFlightLimiter>& limiter) {
  Providers out;
  out.wiki = std::make_shared<ThrottledProvider>(providers.wiki, limiter);
  out.semantic = providers.semantic == providers.wiki
                     ? out.wiki
                     : std::make_shared<ThrottledProvider>(providers.semantic, limiter);
  return out;
}

}  // namespace sere
