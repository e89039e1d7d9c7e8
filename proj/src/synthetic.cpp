#include "microfilter/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace microfilter {

namespace {

constexpr std::int64_t kTsStep = 1000;

std::string bg_word(std::size_t i) { return "bg" + std::to_string(i); }

std::string pick_bg(std::mt19937_64& rng, std::size_t vocab) {
  return bg_word(std::uniform_int_distribution<std::size_t>(0, vocab - 1)(rng));
}

struct PendingPost {
  std::string text;
  // Queries for which this post is relevant (index into all topics).
  std::vector<std::size_t> relevant_for;
};

// Lays out preamble + per-query first relevant posts + shuffled body,
// assigns ids/timestamps/urls, and fills judgments (every post judged
// for every query).
void assemble(SyntheticDataset& ds, std::mt19937_64& rng,
              std::vector<FilterQuery>& topics,
              const std::vector<std::string>& first_relevant_texts,
              std::vector<PendingPost> body, std::size_t preamble,
              std::size_t bg_vocab) {
  std::shuffle(body.begin(), body.end(), rng);

  std::vector<PendingPost> all;
  for (std::size_t i = 0; i < preamble; ++i) {
    PendingPost p;
    for (int w = 0; w < 5; ++w) p.text += pick_bg(rng, bg_vocab) + " ";
    all.push_back(std::move(p));
  }
  for (std::size_t q = 0; q < topics.size(); ++q) {
    PendingPost p;
    p.text = first_relevant_texts[q];
    p.relevant_for = {q};
    all.push_back(std::move(p));
  }
  for (auto& p : body) all.push_back(std::move(p));

  for (std::size_t n = 0; n < all.size(); ++n) {
    Micropost post;
    post.id = "p" + std::to_string(n);
    post.timestamp = static_cast<std::int64_t>(n) * kTsStep;
    post.text = all[n].text;
    post.urls = {"http://s.co/" + std::to_string(n)};
    ds.corpus.push_back(std::move(post));
    for (std::size_t q = 0; q < topics.size(); ++q) {
      bool rel = std::find(all[n].relevant_for.begin(), all[n].relevant_for.end(),
                           q) != all[n].relevant_for.end();
      ds.judgments.set(topics[q].query_id, ds.corpus.back().id, rel ? 1 : 0);
    }
    if (!all[n].relevant_for.empty()) {
      for (std::size_t q : all[n].relevant_for)
        if (topics[q].first_relevant_id.empty())
          topics[q].first_relevant_id = ds.corpus.back().id;
    }
  }
}

}  // namespace

SyntheticDataset make_el_benefit(std::uint64_t seed,
                                 const ElBenefitOptions& options) {
  SyntheticDataset ds;
  std::mt19937_64 rng(seed);
  const std::size_t bg_vocab = 300;
  const std::size_t n_queries = options.test_queries + options.validation_queries;
  const std::size_t n_forms = options.surface_forms_per_entity;

  std::vector<FilterQuery> topics(n_queries);
  std::vector<std::string> first_texts(n_queries);
  std::vector<std::vector<std::string>> forms(n_queries);
  for (std::size_t q = 0; q < n_queries; ++q) {
    std::string entity = "eTOP" + std::to_string(q);
    for (std::size_t f = 0; f < n_forms; ++f) {
      std::string tag = "q" + std::to_string(q) + "f" + std::to_string(f);
      std::string form = tag + "a " + tag + "b";
      forms[q].push_back(form);
      ds.kb_records.push_back({form, entity, 80, 100});  // lp 0.8, cm 1
    }
    topics[q].query_id = "Q" + std::to_string(q);
    topics[q].text = forms[q][0];
    topics[q].start_timestamp = 0;
    first_texts[q] = forms[q][0] + " " + pick_bg(rng, bg_vocab);
  }

  std::vector<PendingPost> body;
  for (std::size_t q = 0; q < n_queries; ++q) {
    for (std::size_t r = 1; r < options.relevant_per_query; ++r) {
      PendingPost p;
      p.text = forms[q][r % n_forms];
      for (int w = 0; w < 3; ++w) p.text += " " + pick_bg(rng, bg_vocab);
      p.relevant_for = {q};
      body.push_back(std::move(p));
    }
    for (std::size_t r = 0; r < options.nonrelevant_per_query; ++r) {
      PendingPost p;
      for (int w = 0; w < 5; ++w) p.text += pick_bg(rng, bg_vocab) + " ";
      body.push_back(std::move(p));
    }
  }

  assemble(ds, rng, topics, first_texts, std::move(body), 50, bg_vocab);
  for (std::size_t q = 0; q < n_queries; ++q) {
    if (q < options.validation_queries)
      ds.validation_topics.push_back(topics[q]);
    else
      ds.test_topics.push_back(topics[q]);
  }
  return ds;
}

SyntheticDataset make_ambiguous(std::uint64_t seed) {
  SyntheticDataset ds;
  std::mt19937_64 rng(seed);
  const std::size_t bg_vocab = 150;
  const std::size_t n_queries = 2;       // one per target entity
  const std::size_t n_forms = 3;         // exclusive forms per target
  const std::size_t n_decoys = 2;        // one doppelganger per target
  const std::size_t shared_per_decoy = 12;
  const std::size_t rel_per_query = 30;
  const std::size_t decoy_posts = 60;    // per decoy entity
  const std::size_t nonrel_bg = 150;

  std::vector<std::string> entities = {"eAAA", "eBBB"};
  std::vector<FilterQuery> topics(n_queries);
  std::vector<std::string> first_texts(n_queries);
  std::vector<std::vector<std::string>> forms(n_queries);
  for (std::size_t q = 0; q < n_queries; ++q) {
    for (std::size_t f = 0; f < n_forms; ++f) {
      std::string tag = (q == 0 ? "alpha" : "beta") + std::to_string(f);
      std::string form = tag + "x " + tag + "y";
      forms[q].push_back(form);
      ds.kb_records.push_back({form, entities[q], 30, 100});  // lp 0.3
    }
    topics[q].query_id = "Q" + std::to_string(q);
    topics[q].text = forms[q][0];
    topics[q].start_timestamp = 0;
    first_texts[q] = forms[q][0] + " " + pick_bg(rng, bg_vocab);
  }

  // Decoy entities: each has one exclusive form used in non-relevant
  // posts plus the full ambiguous form set shared 50/50 with its target
  // entity. The ambiguous forms never occur in post text, only in SF
  // sets, so only surface-form expansion sees them; under it the decoy
  // posts become indistinguishable from cross-form relevant posts.
  std::vector<std::string> decoy_forms(n_decoys);
  for (std::size_t d = 0; d < n_decoys; ++d) {
    std::string entity = "eDEC" + std::to_string(d);
    decoy_forms[d] = "dec" + std::to_string(d) + "x dec" + std::to_string(d) + "y";
    ds.kb_records.push_back({decoy_forms[d], entity, 30, 100});
    const std::string& target = entities[d % n_queries];
    for (std::size_t s = 0; s < shared_per_decoy; ++s) {
      std::string shared = "omega" + std::to_string(d) + "n" + std::to_string(s) +
                           " common";
      ds.kb_records.push_back({shared, target, 45, 100});  // lp 0.9, cm 0.5
      ds.kb_records.push_back({shared, entity, 45, 100});
    }
  }

  std::vector<PendingPost> body;
  for (std::size_t q = 0; q < n_queries; ++q) {
    for (std::size_t r = 1; r < rel_per_query; ++r) {
      PendingPost p;
      p.text = forms[q][r % n_forms];
      for (int w = 0; w < 2; ++w) p.text += " " + pick_bg(rng, bg_vocab);
      p.relevant_for = {q};
      body.push_back(std::move(p));
    }
  }
  for (std::size_t d = 0; d < n_decoys; ++d) {
    for (std::size_t r = 0; r < decoy_posts; ++r) {
      PendingPost p;
      p.text = decoy_forms[d];
      for (int w = 0; w < 2; ++w) p.text += " " + pick_bg(rng, bg_vocab);
      body.push_back(std::move(p));
    }
  }
  for (std::size_t r = 0; r < nonrel_bg; ++r) {
    PendingPost p;
    for (int w = 0; w < 5; ++w) p.text += pick_bg(rng, bg_vocab) + " ";
    body.push_back(std::move(p));
  }

  assemble(ds, rng, topics, first_texts, std::move(body), 30, bg_vocab);
  ds.test_topics = topics;
  return ds;
}

SyntheticDataset make_basic(std::uint64_t seed, std::size_t posts) {
  SyntheticDataset ds;
  std::mt19937_64 rng(seed);
  const std::size_t bg_vocab = 100;

  FilterQuery topic;
  topic.query_id = "Q0";
  topic.text = bg_word(1) + " " + bg_word(2) + " " + bg_word(3);
  topic.start_timestamp = 0;

  std::bernoulli_distribution is_relevant(0.15);
  std::uniform_int_distribution<int> n_words(4, 8);
  bool seen_first = false;
  for (std::size_t n = 0; n < posts; ++n) {
    Micropost p;
    p.id = "p" + std::to_string(n);
    p.timestamp = static_cast<std::int64_t>(n) * kTsStep;
    bool rel = is_relevant(rng);
    if (rel) p.text = topic.text;
    for (int w = 0; w < n_words(rng); ++w) p.text += " " + pick_bg(rng, bg_vocab);
    p.urls = {"http://s.co/" + std::to_string(n)};
    if (rel && !seen_first && n >= 10) {
      topic.first_relevant_id = p.id;
      seen_first = true;
    }
    ds.judgments.set(topic.query_id, p.id, rel ? 1 : 0);
    ds.corpus.push_back(std::move(p));
  }
  if (!seen_first) {
    topic.first_relevant_id = ds.corpus[10].id;
    ds.judgments.set(topic.query_id, ds.corpus[10].id, 1);
  }
  ds.test_topics = {topic};
  return ds;
}

SyntheticDataset make_bench(std::uint64_t seed, std::size_t posts,
                            std::size_t mentions) {
  SyntheticDataset ds;
  std::mt19937_64 rng(seed);
  const std::size_t bg_vocab = 2000;
  const std::size_t entities = std::max<std::size_t>(mentions / 2, 1);

  std::vector<std::string> mention_texts;
  mention_texts.reserve(mentions);
  for (std::size_t m = 0; m < mentions; ++m) {
    std::string text = "men" + std::to_string(m) + "x men" + std::to_string(m) + "y";
    mention_texts.push_back(text);
    ds.kb_records.push_back(
        {text, "eB" + std::to_string(m % entities), 80, 100});
  }

  FilterQuery topic;
  topic.query_id = "Q0";
  topic.text = mention_texts[0];
  topic.start_timestamp = 0;

  std::bernoulli_distribution has_mention(0.3);
  std::uniform_int_distribution<std::size_t> pick_mention(0, mentions - 1);
  std::bernoulli_distribution is_relevant(0.01);
  bool seen_first = false;
  for (std::size_t n = 0; n < posts; ++n) {
    Micropost p;
    p.id = "p" + std::to_string(n);
    p.timestamp = static_cast<std::int64_t>(n) * kTsStep;
    bool rel = n >= 10 && is_relevant(rng);
    if (rel) p.text = mention_texts[0];
    if (has_mention(rng)) p.text += " " + mention_texts[pick_mention(rng)];
    for (int w = 0; w < 8; ++w) p.text += " " + pick_bg(rng, bg_vocab);
    p.urls = {"http://s.co/" + std::to_string(n)};
    if (rel && !seen_first) {
      topic.first_relevant_id = p.id;
      seen_first = true;
    }
    ds.judgments.set(topic.query_id, p.id, rel ? 1 : 0);
    ds.corpus.push_back(std::move(p));
  }
  if (!seen_first && posts > 10) topic.first_relevant_id = ds.corpus[10].id;
  ds.test_topics = {topic};
  return ds;
}

}  // namespace microfilter
