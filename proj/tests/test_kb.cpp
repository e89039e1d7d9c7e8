#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "microfilter/kb.hpp"

using namespace microfilter;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(MICROFILTER_DATA_DIR) + "/fixtures/" + name;
}

KnowledgeBase load_maradona_kb() {
  std::ifstream in(fixture_path("kb_maradona.tsv"));
  REQUIRE(in.good());
  return KnowledgeBase::from_tsv(in);
}

}  // namespace

TEST_CASE("build sums pair link counts per mention") {
  auto kb = KnowledgeBase::build({{"maradona", "eDAM", 72, 100},
                                  {"maradona", "eFilm", 8, 100}});
  CHECK(kb.link_probability("maradona") == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(kb.commonness("maradona", "eDAM") == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(kb.commonness("maradona", "eFilm") == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("empty KB answers zero everywhere") {
  auto kb = KnowledgeBase::build({});
  CHECK(kb.link_probability("anything") == 0.0);
  CHECK(kb.commonness("anything", "e") == 0.0);
  CHECK(kb.entities_of("anything") == nullptr);
  CHECK(kb.surface_forms("e").empty());
  CHECK(kb.stats().mentions == 0);
  CHECK(kb.max_mention_words() == 0);
}

TEST_CASE("build rejects pair counts exceeding occurrence") {
  CHECK_THROWS_AS(KnowledgeBase::build({{"m", "e1", 80, 100},
                                        {"m", "e2", 30, 100}}),
                  KbError);
}

TEST_CASE("build rejects inconsistent occurrence counts") {
  CHECK_THROWS_AS(KnowledgeBase::build({{"m", "e1", 10, 100},
                                        {"m", "e2", 10, 90}}),
                  KbError);
}

TEST_CASE("build rejects duplicate mention-entity pairs") {
  CHECK_THROWS_AS(KnowledgeBase::build({{"m", "e", 10, 100},
                                        {"m", "e", 5, 100}}),
                  KbError);
}

TEST_CASE("build rejects non-positive counts") {
  CHECK_THROWS_AS(KnowledgeBase::build({{"m", "e", 0, 100}}), KbError);
  CHECK_THROWS_AS(KnowledgeBase::build({{"m", "e", -1, 100}}), KbError);
}

TEST_CASE("link probability is 1 for always-linked mentions") {
  auto kb = KnowledgeBase::build({{"m", "e", 100, 100}});
  CHECK(kb.link_probability("m") == 1.0);
  CHECK(kb.commonness("m", "e") == 1.0);  // single target entity
}

TEST_CASE("commonness of an unlinked pair is 0") {
  auto kb = load_maradona_kb();
  CHECK(kb.commonness("maradona", "eThe") == 0.0);
  CHECK(kb.commonness("unknown", "eDAM") == 0.0);
}

TEST_CASE("unknown mention has link probability 0") {
  auto kb = load_maradona_kb();
  CHECK(kb.link_probability("pele") == 0.0);
}

TEST_CASE("surface forms are sorted by mention with commonness") {
  auto kb = load_maradona_kb();
  auto forms = kb.surface_forms("eDAM");
  REQUIRE(forms.size() == 3);
  CHECK(forms[0].first == "argentine legend");
  CHECK(forms[0].second == doctest::Approx(1.0));
  CHECK(forms[1].first == "el diego");
  CHECK(forms[1].second == doctest::Approx(1.0));
  CHECK(forms[2].first == "maradona");
  CHECK(forms[2].second == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(kb.surface_forms("eNobody").empty());
}

TEST_CASE("fixture KB stats and mention list") {
  auto kb = load_maradona_kb();
  auto stats = kb.stats();
  CHECK(stats.mentions == 4);
  CHECK(stats.entities == 3);
  CHECK(stats.pairs == 5);
  auto mentions = kb.mentions();
  REQUIRE(mentions.size() == 4);
  CHECK(std::is_sorted(mentions.begin(), mentions.end()));
  CHECK(kb.max_mention_words() == 2);
  CHECK(kb.has_mention("el diego"));
  CHECK_FALSE(kb.has_mention("diego"));
}

TEST_CASE("entities_of reports pair link counts") {
  auto kb = load_maradona_kb();
  const auto* entities = kb.entities_of("maradona");
  REQUIRE(entities != nullptr);
  REQUIRE(entities->size() == 2);
  std::int64_t total = 0;
  for (const auto& [e, n] : *entities) total += n;
  CHECK(total == 80);
}

TEST_CASE("commonness sums to 1 over each linked mention") {
  auto kb = load_maradona_kb();
  for (const auto& m : kb.mentions()) {
    const auto* entities = kb.entities_of(m);
    REQUIRE(entities != nullptr);
    double sum = 0;
    for (const auto& [e, n] : *entities) sum += kb.commonness(m, e);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("normalize lowercases and collapses whitespace") {
  CHECK(KnowledgeBase::normalize("  El   Diego ") == "el diego");
  CHECK(KnowledgeBase::normalize("Maradona") == "maradona");
  CHECK(KnowledgeBase::normalize("") == "");
  CHECK(KnowledgeBase::normalize("\tA\tB\t") == "a b");
}

TEST_CASE("from_tsv rejects malformed rows") {
  std::istringstream missing_field("m\te\t10\n");
  CHECK_THROWS_AS(KnowledgeBase::from_tsv(missing_field), KbError);
  std::istringstream bad_number("m\te\tten\t100\n");
  CHECK_THROWS_AS(KnowledgeBase::from_tsv(bad_number), KbError);
}

TEST_CASE("snapshot round-trip preserves all statistics") {
  auto kb = load_maradona_kb();
  std::ostringstream out;
  kb.save_snapshot(out);
  std::istringstream in(out.str());
  auto loaded = KnowledgeBase::load_snapshot(in);

  CHECK(loaded.stats().mentions == kb.stats().mentions);
  CHECK(loaded.stats().entities == kb.stats().entities);
  CHECK(loaded.stats().pairs == kb.stats().pairs);
  CHECK(loaded.max_mention_words() == kb.max_mention_words());
  for (const auto& m : kb.mentions()) {
    CHECK(loaded.link_probability(m) == kb.link_probability(m));
    const auto* entities = kb.entities_of(m);
    for (const auto& [e, n] : *entities)
      CHECK(loaded.commonness(m, e) == kb.commonness(m, e));
  }
}

TEST_CASE("load_snapshot rejects foreign data") {
  std::istringstream not_a_snapshot("m\te\t10\t100\n");
  CHECK_THROWS_AS(KnowledgeBase::load_snapshot(not_a_snapshot), KbError);
}

TEST_CASE("all probabilities stay within the unit interval") {
  auto kb = load_maradona_kb();
  for (const auto& m : kb.mentions()) {
    double lp = kb.link_probability(m);
    CHECK(lp >= 0.0);
    CHECK(lp <= 1.0);
    for (const auto& [e, n] : *kb.entities_of(m)) {
      double cm = kb.commonness(m, e);
      CHECK(cm >= 0.0);
      CHECK(cm <= 1.0);
      CHECK(lp * cm <= 1.0);
    }
  }
}
