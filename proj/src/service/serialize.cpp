#include "sere/service/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"

namespace sere {

namespace {

using boost::property_tree::ptree;
using ordered_json = nlohmann::ordered_json;

constexpr int kSrDecimals = 4;
constexpr int kDistanceDecimals = 6;

bool dropped_control(unsigned char c) { return c < 0x20 && c != '\t' && c != '\n' && c != '\r'; }

std::string escape_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (dropped_control(c)) continue;
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string escape_attr(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (dropped_control(c)) continue;
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += ch;
    }
  }
  return out;
}

class XmlWriter {
 public:
  void open(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs,
            bool self_closing = false) {
    indent();
    out_ << '<' << name;
    for (const auto& [key, value] : attrs) out_ << ' ' << key << "=\"" << escape_attr(value) << '"';
    if (self_closing) {
      out_ << "/>\n";
    } else {
      out_ << ">\n";
      ++depth_;
    }
  }
  void close(std::string_view name) {
    --depth_;
    indent();
    out_ << "</" << name << ">\n";
  }
  void text_element(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs,
                    std::string_view text) {
    indent();
    out_ << '<' << name;
    for (const auto& [key, value] : attrs) out_ << ' ' << key << "=\"" << escape_attr(value) << '"';
    const auto escaped = escape_text(text);
    if (escaped.empty()) {
      out_ << "/>\n";
    } else {
      out_ << '>' << escaped << "</" << name << ">\n";
    }
  }
  std::string str() const { return out_.str(); }
  std::ostringstream& raw() { return out_; }

 private:
  void indent() {
    for (int i = 0; i < depth_; ++i) out_ << "  ";
  }
  std::ostringstream out_;
  int depth_ = 0;
};

std::optional<double> parse_number(std::string_view text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::optional<std::size_t> parse_size(std::string_view text) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

ptree parse_tree(std::string_view xml) {
  std::istringstream in{std::string(xml)};
  ptree tree;
  try {
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw std::runtime_error(std::string("malformed XML: ") + e.what());
  }
  return tree;
}

const ptree& attrs_of(const ptree& node) {
  static const ptree empty;
  const auto child = node.get_child_optional("<xmlattr>");
  return child ? *child : empty;
}

std::optional<std::string> attr(const ptree& node, const std::string& name) {
  const auto& attrs = attrs_of(node);
  const auto it = attrs.find(name);
  if (it == attrs.not_found()) return std::nullopt;
  return it->second.data();
}

std::string required_attr(const ptree& node, const std::string& element, const std::string& name) {
  auto value = attr(node, name);
  if (!value) throw std::runtime_error("<" + element + "> lacks attribute '" + name + "'");
  return *value;
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";

  char buf[512];
  const auto result = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  std::string shortest(buf, result.ptr);

  const bool negative = !shortest.empty() && shortest.front() == '-';
  if (negative) shortest.erase(0, 1);
  const auto dot = shortest.find('.');
  std::string int_part = dot == std::string::npos ? shortest : shortest.substr(0, dot);
  std::string frac_part = dot == std::string::npos ? std::string() : shortest.substr(dot + 1);

  const auto keep = static_cast<std::size_t>(decimals);
  const bool round_up = frac_part.size() > keep && frac_part[keep] >= '5';
  frac_part.resize(keep, '0');

  std::string digits = int_part + frac_part;
  if (round_up) {
    std::size_t i = digits.size();
    while (i > 0) {
      --i;
      if (digits[i] == '9') {
        digits[i] = '0';
      } else {
        ++digits[i];
        break;
      }
      if (i == 0) digits.insert(digits.begin(), '1');
    }
  }

  const auto split = digits.size() - keep;
  std::string out = digits.substr(0, split);
  if (keep > 0) out += "." + digits.substr(split);
  const bool zero = std::all_of(digits.begin(), digits.end(), [](char c) { return c == '0'; });
  return negative && !zero ? "-" + out : out;
}

std::string iso8601(std::chrono::system_clock::time_point t) {
  const auto secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_xml(const ExplorationResult& result) {
  const auto& f = result.fields;
  XmlWriter w;
  w.raw() << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  w.open("sere", {{"version", "1"},
                  {"lang", result.subject.lang.str()},
                  {"query", result.query},
                  {"from_cache", result.from_cache ? "true" : "false"}});

  std::vector<std::pair<std::string, std::string>> concept_attrs{{"title", result.subject.title},
                                                                 {"url", result.subject.url}};
  if (f.has(Field::thumbnail) && result.subject.thumbnail) {
    concept_attrs.emplace_back("thumbnail", *result.subject.thumbnail);
  }
  if (f.has(Field::description)) {
    w.open("concept", concept_attrs);
    w.text_element("description", {}, result.subject.description);
    w.close("concept");
  } else {
    w.open("concept", concept_attrs, true);
  }

  const auto count = std::to_string(result.entities.size());
  if (result.entities.empty()) {
    w.open("related", {{"count", count}}, true);
  } else {
    w.open("related", {{"count", count}});
    for (const auto& entity : result.entities) {
      std::vector<std::pair<std::string, std::string>> attrs{{"title", entity.subject.title},
                                                             {"url", entity.subject.url}};
      if (f.has(Field::sr)) {
        attrs.emplace_back("sr", format_fixed(entity.score.relatedness, kSrDecimals));
        attrs.emplace_back("distance", format_fixed(entity.score.distance, kDistanceDecimals));
      }
      if (f.has(Field::category) && entity.assigned_category) {
        attrs.emplace_back("category", *entity.assigned_category);
      }
      if (f.has(Field::thumbnail) && entity.subject.thumbnail) {
        attrs.emplace_back("thumbnail", *entity.subject.thumbnail);
      }
      const bool with_snippets = f.has(Field::snippets) && !entity.snippets.empty();
      w.open("entity", attrs, !with_snippets);
      if (with_snippets) {
        for (const auto& snippet : entity.snippets) {
          w.text_element("snippet", {{"track", to_string(snippet.track)}, {"source", snippet.source_title}},
                         snippet.text);
        }
        w.close("entity");
      }
    }
    w.close("related");
  }

  if (f.has(Field::category)) {
    if (result.category_index.empty()) {
      w.open("categories", {}, true);
    } else {
      w.open("categories", {});
      for (const auto& c : result.category_index) {
        w.open("category", {{"name", c.name}, {"size", std::to_string(c.count)}}, true);
      }
      w.close("categories");
    }
  }
  w.close("sere");
  return w.str();
}

ExplorationResult from_xml(std::string_view xml) {
  const auto tree = parse_tree(xml);
  const auto root = tree.get_child_optional("sere");
  if (!root) throw std::runtime_error("missing <sere> root element");

  ExplorationResult result;
  result.fields = FieldSet{};
  const LanguageCode lang(required_attr(*root, "sere", "lang"));
  result.query = required_attr(*root, "sere", "query");
  result.from_cache = required_attr(*root, "sere", "from_cache") == "true";

  const auto concept_node = root->get_child_optional("concept");
  if (!concept_node) throw std::runtime_error("missing <concept>");
  result.subject.lang = lang;
  result.subject.title = required_attr(*concept_node, "concept", "title");
  result.subject.url = required_attr(*concept_node, "concept", "url");
  if (auto thumb = attr(*concept_node, "thumbnail")) {
    result.subject.thumbnail = *thumb;
    result.fields.insert(Field::thumbnail);
  }
  if (auto description = concept_node->get_child_optional("description")) {
    result.subject.description = description->data();
    result.fields.insert(Field::description);
  }

  const auto related = root->get_child_optional("related");
  if (!related) throw std::runtime_error("missing <related>");
  for (const auto& [name, node] : *related) {
    if (name != "entity") continue;
    RelatedEntity entity;
    entity.subject.lang = lang;
    entity.subject.title = required_attr(node, "entity", "title");
    entity.subject.url = required_attr(node, "entity", "url");
    if (auto sr = attr(node, "sr")) {
      const auto relatedness = parse_number(*sr);
      const auto distance = parse_number(required_attr(node, "entity", "distance"));
      if (!relatedness || !distance) throw std::runtime_error("non-numeric sr or distance");
      entity.score.relatedness = *relatedness;
      entity.score.distance = *distance;
      entity.score.cooccurring = std::isfinite(*distance);
      result.fields.insert(Field::sr);
    }
    if (auto category = attr(node, "category")) {
      entity.assigned_category = *category;
      entity.categories.push_back(*category);
    }
    if (auto thumb = attr(node, "thumbnail")) {
      entity.subject.thumbnail = *thumb;
      result.fields.insert(Field::thumbnail);
    }
    for (const auto& [child_name, child] : node) {
      if (child_name != "snippet") continue;
      Snippet snippet;
      const auto track = parse_snippet_track(required_attr(child, "snippet", "track"));
      if (!track) throw std::runtime_error("unknown snippet track");
      snippet.track = *track;
      snippet.source_title = required_attr(child, "snippet", "source");
      snippet.text = child.data();
      entity.snippets.push_back(std::move(snippet));
      result.fields.insert(Field::snippets);
    }
    result.entities.push_back(std::move(entity));
  }

  if (const auto categories = root->get_child_optional("categories")) {
    result.fields.insert(Field::category);
    for (const auto& [name, node] : *categories) {
      if (name != "category") continue;
      const auto size = parse_size(required_attr(node, "category", "size"));
      if (!size) throw std::runtime_error("non-numeric category size");
      result.category_index.push_back({required_attr(node, "category", "name"), *size});
    }
  }
  return result;
}

std::vector<std::string> validate_xml(std::string_view xml, std::size_t max_snippets) {
  std::vector<std::string> problems;
  ptree tree;
  try {
    tree = parse_tree(xml);
  } catch (const std::exception& e) {
    return {e.what()};
  }

  auto check_attrs = [&](const ptree& node, const std::string& element, const std::set<std::string>& required,
                         const std::set<std::string>& optional) {
    for (const auto& [key, value] : attrs_of(node)) {
      if (!required.count(key) && !optional.count(key)) {
        problems.push_back("<" + element + "> has unexpected attribute '" + key + "'");
      }
    }
    for (const auto& key : required) {
      if (!attr(node, key)) problems.push_back("<" + element + "> lacks attribute '" + key + "'");
    }
  };
  auto check_children = [&](const ptree& node, const std::string& element, const std::set<std::string>& allowed) {
    for (const auto& [name, child] : node) {
      if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
      if (!allowed.count(name)) problems.push_back("<" + element + "> has unexpected child <" + name + ">");
    }
  };
  auto is_fixed = [](const std::string& text, int decimals) {
    const auto dot = text.find('.');
    if (dot == std::string::npos || dot == 0) return false;
    if (text.size() - dot - 1 != static_cast<std::size_t>(decimals)) return false;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (i != dot && (text[i] < '0' || text[i] > '9')) return false;
    }
    return true;
  };

  std::size_t roots = 0;
  for (const auto& [name, node] : tree) {
    if (name != "<xmlcomment>") ++roots;
  }
  const auto root = tree.get_child_optional("sere");
  if (!root || roots != 1) return {"document must have exactly one <sere> root element"};

  check_attrs(*root, "sere", {"version", "lang", "query", "from_cache"}, {});
  check_children(*root, "sere", {"concept", "related", "categories"});
  if (attr(*root, "version").value_or("") != "1") problems.emplace_back("<sere> version must be \"1\"");
  if (!LanguageCode::valid(attr(*root, "lang").value_or(""))) problems.emplace_back("<sere> lang is not a language code");
  const auto from_cache = attr(*root, "from_cache").value_or("");
  if (from_cache != "true" && from_cache != "false") problems.emplace_back("<sere> from_cache must be true or false");
  if (root->count("concept") != 1) problems.emplace_back("<sere> needs exactly one <concept>");
  if (root->count("related") != 1) problems.emplace_back("<sere> needs exactly one <related>");
  if (root->count("categories") > 1) problems.emplace_back("<sere> has more than one <categories>");

  if (const auto concept_node = root->get_child_optional("concept")) {
    check_attrs(*concept_node, "concept", {"title", "url"}, {"thumbnail"});
    check_children(*concept_node, "concept", {"description"});
    if (concept_node->count("description") > 1) problems.emplace_back("<concept> has more than one <description>");
  }

  std::set<std::string> assigned;
  if (const auto related = root->get_child_optional("related")) {
    check_attrs(*related, "related", {"count"}, {});
    check_children(*related, "related", {"entity"});
    const auto declared = parse_size(attr(*related, "count").value_or(""));
    if (!declared || *declared != related->count("entity")) {
      problems.emplace_back("<related> count does not match the number of <entity> children");
    }
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& [name, entity] : *related) {
      if (name != "entity") continue;
      check_attrs(entity, "entity", {"title", "url"}, {"sr", "distance", "category", "thumbnail"});
      check_children(entity, "entity", {"snippet"});
      const auto sr = attr(entity, "sr");
      const auto distance = attr(entity, "distance");
      if (sr.has_value() != distance.has_value()) problems.emplace_back("<entity> sr and distance must appear together");
      if (sr) {
        const auto value = parse_number(*sr);
        if (!is_fixed(*sr, kSrDecimals) || !value || *value < 0.0 || *value > 1.0) {
          problems.push_back("<entity> sr '" + *sr + "' is not a 4-decimal value in [0, 1]");
        } else {
          if (*value > previous) problems.emplace_back("<entity> elements are not in descending sr order");
          previous = *value;
        }
      }
      if (distance && *distance != "inf" && !is_fixed(*distance, kDistanceDecimals)) {
        problems.push_back("<entity> distance '" + *distance + "' is not a 6-decimal value");
      }
      if (auto category = attr(entity, "category")) assigned.insert(*category);
      if (entity.count("snippet") > max_snippets) problems.emplace_back("<entity> has too many <snippet> children");
      for (const auto& [child_name, snippet] : entity) {
        if (child_name != "snippet") continue;
        check_attrs(snippet, "snippet", {"track", "source"}, {});
        if (!parse_snippet_track(attr(snippet, "track").value_or(""))) {
          problems.emplace_back("<snippet> track must be article_sentence or search_snippet");
        }
        if (snippet.data().empty()) problems.emplace_back("<snippet> is empty");
      }
    }
  }

  if (const auto categories = root->get_child_optional("categories")) {
    check_attrs(*categories, "categories", {}, {});
    check_children(*categories, "categories", {"category"});
    for (const auto& [name, category] : *categories) {
      if (name != "category") continue;
      check_attrs(category, "category", {"name", "size"}, {});
      const auto size = parse_size(attr(category, "size").value_or(""));
      if (!size || *size == 0) problems.emplace_back("<category> size must be a positive integer");
    }
  }
  return problems;
}

std::string to_json(const ExplorationResult& result) {
  const auto& f = result.fields;
  ordered_json doc;
  doc["version"] = 1;
  doc["lang"] = result.subject.lang.str();
  doc["query"] = result.query;
  doc["from_cache"] = result.from_cache;
  doc["generated_at"] = iso8601(result.generated_at);

  auto fields = ordered_json::array();
  for (const auto field : kAllFieldValues) {
    if (f.has(field)) fields.push_back(to_string(field));
  }
  doc["fields"] = fields;

  ordered_json subject;
  subject["title"] = result.subject.title;
  subject["url"] = result.subject.url;
  if (f.has(Field::thumbnail) && result.subject.thumbnail) subject["thumbnail"] = *result.subject.thumbnail;
  if (f.has(Field::description)) subject["description"] = result.subject.description;
  doc["concept"] = subject;

  auto related = ordered_json::array();
  for (const auto& entity : result.entities) {
    ordered_json e;
    e["title"] = entity.subject.title;
    e["url"] = entity.subject.url;
    if (f.has(Field::sr)) {
      e["sr"] = entity.score.relatedness;
      if (entity.score.infinite()) {
        e["distance"] = nullptr;
      } else {
        e["distance"] = entity.score.distance;
      }
    }
    if (f.has(Field::category) && entity.assigned_category) e["category"] = *entity.assigned_category;
    if (f.has(Field::thumbnail) && entity.subject.thumbnail) e["thumbnail"] = *entity.subject.thumbnail;
    auto origins = ordered_json::array();
    for (const auto origin : entity.origins.items()) origins.push_back(to_string(origin));
    e["origins"] = origins;
    if (f.has(Field::snippets)) {
      auto snippets = ordered_json::array();
      for (const auto& s : entity.snippets) {
        snippets.push_back({{"track", to_string(s.track)}, {"source", s.source_title}, {"text", s.text}});
      }
      e["snippets"] = snippets;
    }
    related.push_back(std::move(e));
  }
  doc["related"] = related;

  if (f.has(Field::category)) {
    auto categories = ordered_json::array();
    for (const auto& c : result.category_index) categories.push_back({{"name", c.name}, {"size", c.count}});
    doc["categories"] = categories;
  }
  doc["inlink_cap"] = result.inlink_cap;
  doc["warnings"] = result.warnings;
  return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

std::string error_xml(std::string_view code, std::string_view message) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<error code=\"" + escape_attr(code) + "\">" +
         escape_text(message) + "</error>\n";
}

std::string error_json(std::string_view code, std::string_view message) {
  ordered_json doc{{"error", {{"code", std::string(code)}, {"message", std::string(message)}}}};
  return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

namespace {

std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

// Cuts at a code-point boundary so no multibyte sequence is split.
std::string shorten(std::string_view s, std::size_t width) {
  if (display_width(s) <= width) return std::string(s);
  std::size_t seen = 0;
  std::size_t cut = 0;
  for (; cut < s.size(); ++cut) {
    if ((static_cast<unsigned char>(s[cut]) & 0xC0) != 0x80) {
      if (seen == width - 3) break;
      ++seen;
    }
  }
  return std::string(s.substr(0, cut)) + "...";
}

void pad(std::ostringstream& out, std::string_view s, std::size_t width) {
  out << s;
  for (auto w = display_width(s); w < width; ++w) out << ' ';
}

}  // namespace

std::string to_table(const ExplorationResult& result, std::size_t top) {
  constexpr std::size_t kSnippetWidth = 60;
  const auto rows = std::min(top, result.entities.size());

  std::size_t title_w = 5;
  std::size_t category_w = 8;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& e = result.entities[i];
    title_w = std::max(title_w, display_width(e.subject.title));
    if (e.assigned_category) category_w = std::max(category_w, display_width(*e.assigned_category));
  }

  std::ostringstream out;
  out << result.subject.title << " (" << result.subject.lang.str() << "), " << result.entities.size()
      << " related" << (result.from_cache ? ", cached" : "") << "\n";
  pad(out, "rank", 6);
  pad(out, "title", title_w + 2);
  pad(out, "sr", 8);
  pad(out, "category", category_w + 2);
  out << "snippet\n";
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& e = result.entities[i];
    pad(out, std::to_string(i + 1), 6);
    pad(out, e.subject.title, title_w + 2);
    pad(out, result.fields.has(Field::sr) ? format_fixed(e.score.relatedness, kSrDecimals) : "-", 8);
    const bool with_category = result.fields.has(Field::category) && e.assigned_category;
    pad(out, with_category ? *e.assigned_category : "-", category_w + 2);
    if (result.fields.has(Field::snippets) && !e.snippets.empty()) out << shorten(e.snippets.front().text, kSnippetWidth);
    out << "\n";
  }
  return out.str();
}

}  // namespace sere
