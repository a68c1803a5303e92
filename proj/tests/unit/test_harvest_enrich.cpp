#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "sere/datasource/corpus.hpp"
#include "sere/enrich.hpp"
#include "sere/errors.hpp"
#include "sere/harvest.hpp"
#include "support.hpp"

using namespace sere;

namespace {

const LanguageCode kEn("en");

std::shared_ptr<const CorpusProvider> demo_provider() {
  static const auto p =
      std::make_shared<const CorpusProvider>(std::make_shared<Corpus>(ingest_corpus(support::demo_corpus())));
  return p;
}

const std::vector<oracle::Article>& demo_articles() {
  static const auto a = oracle::load_jsonl(support::demo_corpus());
  return a;
}

const oracle::Article& demo_article(const std::string& title) {
  for (const auto& a : demo_articles()) {
    if (a.title == title) return a;
  }
  throw std::logic_error("no fixture article " + title);
}

RelatedEntity entity(const std::string& title, std::vector<std::string> categories, double relatedness = 0.5) {
  RelatedEntity e;
  e.subject = make_concept(kEn, title);
  e.categories = std::move(categories);
  e.score = {1.0 - relatedness, relatedness, relatedness > 0.0};
  return e;
}

bool namespaced(const std::string& t) {
  return t.rfind("Category:", 0) == 0 || t.rfind("File:", 0) == 0;
}

}  // namespace

TEST_CASE("resolving a term") {
  const auto& p = *demo_provider();
  const auto c = resolve_concept(p, kEn, "Angela Merkel");
  CHECK(c.title == "Angela Merkel");
  CHECK(c.url == "https://en.wikipedia.org/wiki/Angela_Merkel");
  CHECK(c.description == demo_article("Angela Merkel").description);
  CHECK(c.thumbnail == demo_article("Angela Merkel").thumbnail);

  CHECK(resolve_title(p, "merkel") == oracle::search(demo_articles(), "merkel", 10).front());
  CHECK(resolve_title(p, "  Helmut Kohl ") == "Helmut Kohl");
  CHECK_THROWS_AS(resolve_title(p, "qqqzzz"), NoMatchError);
  CHECK_THROWS_AS(resolve_title(p, "  "), EmptyInputError);
}

TEST_CASE("namespace detection") {
  for (const char* t : {"Category:Chancellors of Germany", "File:X.jpg", "Template:Infobox", "Kategorie:Bank",
                        "User talk:Someone", "Wikipedia:About", "help:Contents"}) {
    CHECK(is_namespaced(t));
  }
  for (const char* t : {"Angela Merkel", "Star Wars: A New Hope", ":Colon", "Mission: Impossible"}) {
    CHECK_FALSE(is_namespaced(t));
  }
}

TEST_CASE("harvest merges origins across sources") {
  support::FakeProvider wiki;
  wiki.outs["Angela Merkel"] = {"Helmut Kohl", "CDU", "Angela Merkel", "Category:Chancellors", "Helmut_Kohl"};
  wiki.ins["Angela Merkel"] = {"Helmut Kohl", "Templin"};
  support::FakeProvider semantic;
  semantic.up["Angela Merkel"] = {"Politics of Germany"};
  semantic.down["Angela Merkel"] = {"Merkel cabinet", "CDU"};
  const auto h = harvest_candidates(wiki, semantic, make_concept(kEn, "Angela Merkel"));
  CHECK(h.warnings.empty());
  const std::vector<Candidate> expected{
      {"CDU", {RelationOrigin::out_link, RelationOrigin::narrower}},
      {"Helmut Kohl", {RelationOrigin::out_link, RelationOrigin::in_link}},
      {"Merkel cabinet", {RelationOrigin::narrower}},
      {"Politics of Germany", {RelationOrigin::broader}},
      {"Templin", {RelationOrigin::in_link}},
  };
  CHECK(h.candidates == expected);
}

TEST_CASE("harvest of an isolated concept is empty") {
  support::FakeProvider p;
  const auto h = harvest_candidates(p, p, make_concept(kEn, "Lonely"));
  CHECK(h.candidates.empty());
  CHECK(h.warnings.empty());
}

TEST_CASE("harvest degrades on partial failure and fails when every source fails") {
  support::FakeProvider wiki;
  wiki.outs["A"] = {"B"};
  support::FakeProvider semantic;
  semantic.failing = {"broader", "narrower"};
  const auto h = harvest_candidates(wiki, semantic, make_concept(kEn, "A"));
  CHECK(h.candidates.size() == 1);
  CHECK(h.warnings.size() == 2);
  CHECK(h.warnings[0].find("broader") != std::string::npos);

  wiki.failing = {"out_links", "in_links"};
  CHECK_THROWS_AS(harvest_candidates(wiki, semantic, make_concept(kEn, "A")), HarvestError);
}

TEST_CASE("harvest truncates in-link-only candidates first") {
  support::FakeProvider p;
  p.outs["A"] = {"O1", "O2", "Shared"};
  p.ins["A"] = {"I1", "Shared", "I2", "I3"};
  HarvestOptions opts;
  opts.candidate_cap = 4;
  const auto h = harvest_candidates(p, p, make_concept(kEn, "A"), opts);
  std::vector<std::string> titles;
  for (const auto& c : h.candidates) titles.push_back(c.title);
  CHECK(titles == std::vector<std::string>{"I1", "O1", "O2", "Shared"});
  REQUIRE(h.warnings.size() == 1);
  CHECK(h.warnings[0].find("truncated from 6 to 4") != std::string::npos);

  opts.inlink_cap = 1;
  opts.candidate_cap = 400;
  const auto capped = harvest_candidates(p, p, make_concept(kEn, "A"), opts);
  CHECK(capped.candidates.size() == 4);
}

TEST_CASE("demo fixture harvest equals the union of the fixture's link and hierarchy fields") {
  const auto& p = *demo_provider();
  const auto h = harvest_candidates(p, p, make_concept(kEn, "Angela Merkel"));
  const auto& merkel = demo_article("Angela Merkel");
  std::map<std::string, OriginSet> expected;
  for (const auto& t : merkel.links) {
    if (!namespaced(t)) expected[t].insert(RelationOrigin::out_link);
  }
  for (const auto& a : demo_articles()) {
    if (std::find(a.links.begin(), a.links.end(), "Angela Merkel") != a.links.end()) {
      expected[a.title].insert(RelationOrigin::in_link);
    }
  }
  for (const auto& t : merkel.broader) expected[t].insert(RelationOrigin::broader);
  for (const auto& t : merkel.narrower) expected[t].insert(RelationOrigin::narrower);

  REQUIRE(h.candidates.size() == expected.size());
  auto it = expected.begin();
  for (const auto& c : h.candidates) {
    CHECK(c.title == it->first);
    CHECK(c.origins == it->second);
    CHECK(c.title != "Angela Merkel");
    ++it;
  }
  CHECK(h.candidates == harvest_candidates(p, p, make_concept(kEn, "Angela Merkel")).candidates);
}

TEST_CASE("category assignment: worked grouping example") {
  std::vector<RelatedEntity> es{entity("c1", {"X", "Y"}), entity("c2", {"X"}), entity("c3", {"Y", "Z"}),
                                entity("c4", {"Y"})};
  const auto index = assign_categories(es);
  CHECK(es[0].assigned_category == "Y");
  CHECK(es[1].assigned_category == "X");
  CHECK(es[2].assigned_category == "Y");
  CHECK(es[3].assigned_category == "Y");
  CHECK(index == std::vector<CategoryCount>{{"Y", 3}, {"X", 1}});

  auto [assigned, oracle_index] = oracle::group_categories({{"X", "Y"}, {"X"}, {"Y", "Z"}, {"Y"}});
  CHECK(oracle_index.size() == index.size());
  for (std::size_t i = 0; i < es.size(); ++i) CHECK(es[i].assigned_category == assigned[i]);
}

TEST_CASE("category assignment: single and empty cases") {
  std::vector<RelatedEntity> one{entity("a", {"C"})};
  CHECK(assign_categories(one) == std::vector<CategoryCount>{{"C", 1}});
  CHECK(one[0].assigned_category == "C");

  std::vector<RelatedEntity> none{entity("a", {})};
  CHECK(assign_categories(none) == std::vector<CategoryCount>{{std::string(kUncategorized), 1}});
  CHECK_FALSE(none[0].assigned_category.has_value());

  std::vector<RelatedEntity> ties{entity("a", {"B", "A"}), entity("b", {"B", "A"})};
  CHECK(assign_categories(ties) == std::vector<CategoryCount>{{"A", 2}});
}

TEST_CASE("category assignment agrees with the oracle on random inputs") {
  std::mt19937 rng(21);
  const std::vector<std::string> names{"A", "B", "C", "D", "E", "F"};
  std::uniform_int_distribution<int> count(0, 4);
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  std::uniform_int_distribution<int> size(0, 30);
  for (int round = 0; round < 300; ++round) {
    std::vector<RelatedEntity> es;
    std::vector<std::vector<std::string>> cats;
    for (int i = size(rng); i > 0; --i) {
      std::vector<std::string> c;
      for (int k = count(rng); k > 0; --k) c.push_back(names[pick(rng)]);
      cats.push_back(c);
      es.push_back(entity("e" + std::to_string(i), c));
    }
    const auto index = assign_categories(es);
    const auto [assigned, expected_index] = oracle::group_categories(cats);
    std::size_t total = 0;
    for (std::size_t i = 0; i < es.size(); ++i) {
      CHECK(es[i].assigned_category == assigned[i]);
      if (es[i].assigned_category) {
        CHECK(std::find(es[i].categories.begin(), es[i].categories.end(), *es[i].assigned_category) !=
              es[i].categories.end());
      }
    }
    REQUIRE(index.size() == expected_index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
      CHECK(index[i].name == expected_index[i].first);
      CHECK(index[i].count == expected_index[i].second);
      total += index[i].count;
    }
    CHECK(total == es.size());
  }
}

TEST_CASE("article sentence snippets") {
  const auto s = article_sentence_snippets("Merkel succeeded Helmut Kohl. She grew up in Templin.", "Angela Merkel",
                                           "Helmut Kohl");
  REQUIRE(s.size() == 1);
  CHECK(s[0] == Snippet{"Merkel succeeded Helmut Kohl.", SnippetTrack::article_sentence, "Angela Merkel"});
  CHECK(article_sentence_snippets("Nothing here.", "A", "Helmut Kohl").empty());
}

TEST_CASE("article sentence snippets keep the first three in document order") {
  const auto& text = demo_article("Angela Merkel").text;
  std::vector<std::string> containing;
  for (const auto& s : oracle::sentences(text)) {
    if (oracle::phrase_in(s, "Helmut Kohl")) containing.push_back(s);
  }
  REQUIRE(containing.size() == 5);
  const auto snippets = article_sentence_snippets(text, "Angela Merkel", "Helmut Kohl", 3);
  REQUIRE(snippets.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(snippets[i].text == containing[i]);
}

TEST_CASE("search snippet fallback") {
  const auto& p = *demo_provider();
  std::vector<std::string> warnings;
  const auto s = fallback_search_snippets(p, "Angela Merkel", "Politics of Germany", 3, warnings);
  CHECK(warnings.empty());
  std::vector<std::string> sources;
  for (const auto& a : demo_articles()) {
    if (oracle::phrase_in(a.text, "Angela Merkel") && oracle::phrase_in(a.text, "Politics of Germany")) {
      sources.push_back(a.title);
    }
  }
  REQUIRE(sources.size() == 1);
  REQUIRE(s.size() == 1);
  CHECK(s[0].track == SnippetTrack::search_snippet);
  CHECK(s[0].source_title == sources[0]);
  CHECK(s[0].source_title != "Angela Merkel");
  CHECK(s[0].source_title != "Politics of Germany");

  REQUIRE(oracle::cooccurrences(demo_articles(), "Physics", "Commerzbank") == 0);
  CHECK(fallback_search_snippets(p, "Physics", "Commerzbank", 3, warnings).empty());
  CHECK(warnings.empty());

  support::FakeProvider broken;
  broken.failing = {"search_snippets"};
  CHECK(fallback_search_snippets(broken, "A", "B", 3, warnings).empty());
  CHECK(warnings.size() == 1);
}

TEST_CASE("enrichment drops unrelated entities") {
  auto p = demo_provider();
  const Providers ps{p, p};
  const auto subject = make_concept(kEn, "Angela Merkel");
  const auto none = enrich_entities(ps, subject, {entity("Helmut Kohl", {}, 0.0), entity("Templin", {}, 0.0)});
  CHECK(none.entities.empty());
  CHECK(none.category_index.empty());

  const auto one = enrich_entities(ps, subject, {entity("Helmut Kohl", {}, 0.4), entity("Templin", {}, 0.0)});
  REQUIRE(one.entities.size() == 1);
  const auto& kohl = one.entities[0];
  CHECK(kohl.categories == demo_article("Helmut Kohl").categories);
  CHECK(kohl.assigned_category == "Chancellors of Germany");
  REQUIRE(kohl.snippets.size() == 3);
  for (const auto& s : kohl.snippets) CHECK(s.track == SnippetTrack::article_sentence);
}

TEST_CASE("enrichment failures become warnings") {
  support::FakeProvider wiki;
  wiki.texts["A"] = "A mentions B here.";
  wiki.failing = {"thumbnail"};
  support::FakeProvider semantic;
  semantic.failing = {"categories"};
  const Providers ps{std::make_shared<support::FakeProvider>(wiki), std::make_shared<support::FakeProvider>(semantic)};
  const auto r = enrich_entities(ps, make_concept(kEn, "A"), {entity("B", {}, 0.3)});
  REQUIRE(r.entities.size() == 1);
  CHECK(r.entities[0].snippets.size() == 1);
  CHECK_FALSE(r.entities[0].assigned_category.has_value());
  CHECK(r.warnings.size() == 2);
  CHECK(r.category_index == std::vector<CategoryCount>{{std::string(kUncategorized), 1}});
}

TEST_CASE("enrichment invariants on the demo fixture") {
  auto p = demo_provider();
  const Providers ps{p, p};
  const auto subject = make_concept(kEn, "Angela Merkel");
  std::vector<RelatedEntity> scored;
  for (const auto& a : demo_articles()) {
    if (a.title != "Angela Merkel") scored.push_back(entity(a.title, {}, 0.2));
  }
  const auto r = enrich_entities(ps, subject, scored);
  std::size_t total = 0;
  for (const auto& c : r.category_index) total += c.count;
  CHECK(total == r.entities.size());
  for (const auto& e : r.entities) {
    if (e.assigned_category) {
      CHECK(std::find(e.categories.begin(), e.categories.end(), *e.assigned_category) != e.categories.end());
    }
    std::set<SnippetTrack> tracks;
    for (const auto& s : e.snippets) tracks.insert(s.track);
    CHECK(tracks.size() <= 1);
    CHECK(e.snippets.size() <= 3);
  }
}
