#include "sere/datasource/provider.hpp"

#include "sere/errors.hpp"

namespace sere {

void Provider::unsupported(const char* capability) const {
  throw ProviderError(ProviderErrorKind::unsupported, name(),
                      std::string(capability) + " is not provided by this backend", false);
}

std::vector<std::string> Provider::search(std::string_view, std::size_t) const {
  unsupported("search");
}
std::uint64_t Provider::hit_count(std::string_view) const { unsupported("hit_count"); }
std::uint64_t Provider::cooccurrence_count(std::string_view, std::string_view) const {
  unsupported("cooccurrence_count");
}
std::uint64_t Provider::article_count() const { unsupported("article_count"); }
std::string Provider::full_text(std::string_view) const { unsupported("full_text"); }
std::vector<std::string> Provider::out_links(std::string_view) const { unsupported("out_links"); }
std::vector<std::string> Provider::in_links(std::string_view, std::size_t) const {
  unsupported("in_links");
}
std::vector<std::string> Provider::categories(std::string_view) const {
  unsupported("categories");
}
std::vector<std::string> Provider::broader(std::string_view) const { unsupported("broader"); }
std::vector<std::string> Provider::narrower(std::string_view, std::size_t) const {
  unsupported("narrower");
}
std::string Provider::description(std::string_view) const { unsupported("description"); }
std::optional<std::string> Provider::thumbnail(std::string_view) const {
  unsupported("thumbnail");
}
std::vector<Passage> Provider::search_snippets(std::string_view, std::string_view,
                                               std::size_t) const {
  unsupported("search_snippets");
}

}  // namespace sere
