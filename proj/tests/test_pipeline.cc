#include <random>

#include <gtest/gtest.h>

#include <tmr/errors.hh>
#include <tmr/pipeline.hh>

#include "oracles.hh"

using namespace tmr;

namespace
{
  TranslationIndex two_domain_index()
  {
    TranslationMemory m;
    m.add("blood pressure drops quickly", "t0", "med");
    m.add("the court ruled today", "t1", "law");
    m.add("blood pressure rises slowly", "t2", "med");
    m.add("the court adjourned today", "t3", "law");
    m.add("low blood pressure", "t4", "med");
    return TranslationIndex::build(std::move(m), 100.0);
  }

  TranslationIndex index_of(const std::vector<std::string>& sources, double p = 100.0)
  {
    TranslationMemory m;
    for (std::size_t i = 0; i < sources.size(); ++i)
      m.add(sources[i], "t" + std::to_string(i), "d");
    return TranslationIndex::build(std::move(m), p);
  }

  std::vector<Uid> uids_of(const RetrievedSet& r)
  {
    std::vector<Uid> out;
    for (const auto& c : r.matches)
      out.push_back(c.uid);
    return out;
  }

  std::string words(std::size_t n, const std::string& prefix)
  {
    std::string s;
    for (std::size_t i = 0; i < n; ++i)
      s += (i ? " " : "") + prefix + std::to_string(i);
    return s;
  }
}

TEST(DomainSelection, Policies)
{
  auto index = two_domain_index();
  const auto& m = index.memory;
  EXPECT_EQ(select_domain(m, DomainPolicy::in_domain, "med").size(), 3u);
  EXPECT_EQ(select_domain(m, DomainPolicy::all_domains, std::nullopt).size(), 5u);
  EXPECT_EQ(select_domain(m, DomainPolicy::out_of_domain, "med").size(), 2u);
  EXPECT_EQ(select_domain(m, DomainPolicy::out_of_domain, "med").uids(), (std::vector<Uid>{1, 3}));
  EXPECT_THROW(select_domain(m, DomainPolicy::in_domain, "it"), ConfigError);
  EXPECT_THROW(select_domain(m, DomainPolicy::in_domain, std::nullopt), ConfigError);
  EXPECT_EQ(parse_domain_policy("out"), DomainPolicy::out_of_domain);
  EXPECT_THROW(parse_domain_policy("some"), ConfigError);
}

TEST(DomainSelection, OutOfDomainOnSingleDomainIsEmpty)
{
  auto index = index_of({"a b c", "a b d"});
  RetrievalConfig config;
  config.domain_policy = DomainPolicy::out_of_domain;
  config.query_domain = "d";
  config.filter = NoFilter{};
  auto r = retrieve(index, index.memory.encode_query("a b c"), config);
  EXPECT_TRUE(r.matches.empty());
  EXPECT_TRUE(r.exhausted);
}

TEST(Ngm, Arithmetic)
{
  EXPECT_EQ(ngm_required_length(5, 0.3, 3), 3u);   // 1.5 -> 2, ML wins
  EXPECT_EQ(ngm_required_length(20, 0.3, 3), 6u);  // 6.0 exactly
  EXPECT_EQ(ngm_required_length(10, 0.3, 3), 3u);
  EXPECT_EQ(ngm_required_length(11, 0.3, 3), 4u);  // 3.3
  EXPECT_EQ(ngm_required_length(7, 1.0, 1), 7u);
  EXPECT_EQ(ngm_required_length(3, 0.1, 1), 1u);
}

TEST(Ngm, PassAndFailCases)
{
  // |q| = 5 sharing a trigram
  auto index = index_of({"x a b c y z", words(30, "w")});
  Universe all(index.memory, DomainPolicy::all_domains);
  auto q5 = index.memory.encode_query("a b c q r");
  EXPECT_EQ(ngm_filter(index.suffix_array, q5, 0.3, 3, all).size(), 1u);

  // |q| = 20 sharing only a trigram: 3 < 6
  auto q20 = index.memory.encode_query("a b c " + words(17, "u"));
  ASSERT_EQ(q20.length(), 20u);
  EXPECT_TRUE(ngm_filter(index.suffix_array, q20, 0.3, 3, all).empty());
  EXPECT_EQ(ngm_filter(index.suffix_array, q20, 0.15, 3, all).size(), 1u);

  // identical sentence passes for any tau
  auto self = index.memory.encode_query(words(30, "w"));
  for (double tau : {0.1, 0.5, 1.0})
    EXPECT_EQ(ngm_filter(index.suffix_array, self, tau, 3, all).size(), 1u);
}

TEST(Rank, TiesAndExactDuplicate)
{
  auto index = index_of({"a b x", "a b c", "a b y", "q r s"});
  auto q = index.memory.encode_query("a b c");
  auto ranked = rank(index, {0, 1, 2, 3}, q, EditRanker{});
  ASSERT_EQ(ranked.size(), 4u);
  EXPECT_EQ(ranked[0].uid, 1u);
  EXPECT_EQ(ranked[0].base_score, 1.0);
  EXPECT_EQ(ranked[1].uid, 0u);
  EXPECT_EQ(ranked[2].uid, 2u);
  EXPECT_EQ(ranked[1].base_score, ranked[2].base_score);
  EXPECT_EQ(ranked[3].base_score, 0.0);
}

TEST(Rank, MatchesDirectScores)
{
  auto index = index_of({"a b c d", "a c", "b c d e f", "d"});
  auto q = index.memory.encode_query("a b c");
  auto ranked = rank(index, {0, 1, 2, 3}, q, EditRanker{});
  // LED: 1-1/4, 1-1/3, 1-4/5, 0
  EXPECT_EQ(uids_of({{}, ranked, false}), (std::vector<Uid>{0, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(ranked[0].base_score, 0.75);
  EXPECT_DOUBLE_EQ(ranked[1].base_score, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(ranked[2].base_score, 0.2);
}

TEST(Contrast, DuplicateFixture)
{
  // c1 = uid 0, c2 = uid 1 duplicates c1, c3 = uid 2 shares nothing with c1
  auto index = index_of({"a b c d e", "a b c d e", "v w x y z"});
  std::vector<Candidate> ranked{{0, 0.9, 0.9}, {1, 0.9, 0.9}, {2, 0.7, 0.7}};
  auto r = contrastive_select(ranked, 0.3, 2, index.memory);
  ASSERT_EQ(r.matches.size(), 2u);
  EXPECT_EQ(r.matches[0].uid, 0u);
  EXPECT_EQ(r.matches[1].uid, 2u);
  EXPECT_DOUBLE_EQ(r.matches[1].adjusted_score, 0.7);
  EXPECT_FALSE(r.exhausted);

  auto plain = contrastive_select(ranked, 0.0, 2, index.memory);
  EXPECT_EQ(uids_of(plain), (std::vector<Uid>{0, 1}));
}

TEST(Contrast, PenaltyIsMeanOverSelected)
{
  // sources: s0, s1 = s0, s2 half-similar to s0 and s3 unrelated
  auto index = index_of({"a b c d", "a b c d", "a b x y", "p q r s"});
  std::vector<Candidate> ranked{{0, 1.0, 1.0}, {1, 0.95, 0.95}, {2, 0.9, 0.9}, {3, 0.5, 0.5}};
  auto r = contrastive_select(ranked, 0.4, 3, index.memory);
  // after s0: s1 0.95-0.4 = 0.55, s2 0.9-0.4*0.5 = 0.7, s3 0.5
  // after s2 (|M|=2): s1 0.95-0.2*(1+0.5)=0.65, s3 0.5-0.2*(0+0)=0.5
  EXPECT_EQ(uids_of(r), (std::vector<Uid>{0, 2, 1}));
  EXPECT_DOUBLE_EQ(r.matches[1].adjusted_score, 0.9 - 0.4 * 0.5);
  EXPECT_DOUBLE_EQ(r.matches[2].adjusted_score, 0.95 - 0.2 * 1.5);
  for (const auto& c : r.matches)
    EXPECT_LE(c.adjusted_score, c.base_score);
}

TEST(Contrast, Exhausted)
{
  auto index = index_of({"a b", "c d"});
  std::vector<Candidate> ranked{{0, 0.8, 0.8}, {1, 0.5, 0.5}};
  auto r = contrastive_select(ranked, 0.3, 3, index.memory);
  EXPECT_EQ(r.matches.size(), 2u);
  EXPECT_TRUE(r.exhausted);
  EXPECT_TRUE(contrastive_select({}, 0.3, 3, index.memory).matches.empty());
}

TEST(Retrieve, DuplicateFirstUnderEveryEditRanker)
{
  auto index = two_domain_index();
  auto q = index.memory.encode_query("blood pressure rises slowly");
  for (const auto& costs : {EditCosts::led(), EditCosts::lcs(), EditCosts::delta_lcs()})
    for (Filter f : {Filter{NoFilter{}}, Filter{NgmFilter{}}, Filter{Bm25Filter{}}})
    {
      RetrievalConfig config;
      config.domain_policy = DomainPolicy::in_domain;
      config.query_domain = "med";
      config.filter = f;
      config.ranker = EditRanker{costs};
      auto r = retrieve(index, q, config);
      ASSERT_FALSE(r.matches.empty());
      EXPECT_EQ(r.matches[0].uid, 2u);
      EXPECT_EQ(r.matches[0].base_score, 1.0);
    }
}

TEST(Retrieve, ScorePositivityAndExclusion)
{
  auto index = index_of({"a b c", "x y z", "a b d"});
  RetrievalConfig config;
  config.filter = NoFilter{};
  auto q = index.memory.encode_query("a b c");
  auto r = retrieve(index, q, config);
  EXPECT_EQ(uids_of(r), (std::vector<Uid>{0, 2}));
  EXPECT_TRUE(r.exhausted);
  auto loo = retrieve(index, q, config, Uid{0});
  EXPECT_EQ(uids_of(loo), (std::vector<Uid>{2}));
}

TEST(Retrieve, EmptyAndUnknownQuery)
{
  auto index = index_of({"a b c"});
  RetrievalConfig config;
  EXPECT_TRUE(retrieve(index, Sentence{}, config).matches.empty());
  EXPECT_TRUE(retrieve(index, index.memory.encode_query("zz yy"), config).matches.empty());
}

TEST(Retrieve, Bm25RankerWithContrast)
{
  auto index = index_of({"a b c d", "a b c d", "a b e f", "g h i j", "k l m n", "o p q r"});
  RetrievalConfig config;
  config.filter = Bm25Filter{10};
  config.ranker = Bm25Ranker{};
  auto q = index.memory.encode_query("a b c d");
  auto plain = retrieve(index, q, config);
  ASSERT_GE(plain.matches.size(), 2u);
  EXPECT_EQ(plain.matches[0].uid, 0u);
  EXPECT_EQ(plain.matches[1].uid, 1u);
  config.contrast = 2.0;
  auto diverse = retrieve(index, q, config);
  ASSERT_GE(diverse.matches.size(), 2u);
  EXPECT_EQ(diverse.matches[0].uid, 0u);
  EXPECT_EQ(diverse.matches[0].base_score, 1.0);
  EXPECT_EQ(diverse.matches[1].uid, 2u);
}

TEST(Retrieve, ConfigValidation)
{
  RetrievalConfig config;
  config.k = 0;
  EXPECT_THROW(config.validate(), ConfigError);
  config.k = 3;
  config.filter = NgmFilter{0.0, 3};
  EXPECT_THROW(config.validate(), ConfigError);
  config.filter = NgmFilter{1.5, 3};
  EXPECT_THROW(config.validate(), ConfigError);
  config.filter = NgmFilter{0.3, 0};
  EXPECT_THROW(config.validate(), ConfigError);
  config.filter = Bm25Filter{0};
  EXPECT_THROW(config.validate(), ConfigError);
  config.filter = NgmFilter{};
  config.contrast = -0.1;
  EXPECT_THROW(config.validate(), ConfigError);
}

namespace
{
  TranslationIndex random_index(std::mt19937& rng, std::size_t n)
  {
    TranslationMemory m;
    for (std::size_t i = 0; i < n; ++i)
    {
      std::string s;
      std::size_t len = 2 + rng() % 10;
      for (std::size_t j = 0; j < len; ++j)
        s += " w" + std::to_string(rng() % 30);
      m.add(s, "t", (rng() % 3) ? "a" : "b");
    }
    return TranslationIndex::build(std::move(m), 10.0);
  }

  Sentence random_query(std::mt19937& rng, const TranslationIndex& index)
  {
    std::string s;
    std::size_t len = 1 + rng() % 10;
    for (std::size_t j = 0; j < len; ++j)
      s += " w" + std::to_string(rng() % 33);
    return index.memory.encode_query(s);
  }
}

TEST(Retrieve, FilterSoundness)
{
  std::mt19937 rng(17);
  auto index = random_index(rng, 300);
  for (int i = 0; i < 100; ++i)
  {
    auto q = random_query(rng, index);
    for (auto policy : {DomainPolicy::in_domain, DomainPolicy::all_domains, DomainPolicy::out_of_domain})
    {
      RetrievalConfig config;
      config.domain_policy = policy;
      config.query_domain = "a";
      config.k = 5;
      config.filter = NgmFilter{0.3, 2};
      auto universe = select_domain(index.memory, policy, config.query_domain);
      const auto required = ngm_required_length(q.length(), 0.3, 2);
      for (const auto& c : retrieve(index, q, config).matches)
      {
        ASSERT_TRUE(universe.contains(c.uid));
        ASSERT_GE(oracle::longest_common_ngram(q, index.memory.unit(c.uid).source), required);
        ASSERT_GT(c.base_score, 0.0);
      }

      config.filter = Bm25Filter{5};
      auto allowed = index.inverted.bm25_candidates(q, 5, [&](Uid u) { return universe.contains(u); });
      for (const auto& c : retrieve(index, q, config).matches)
        ASSERT_TRUE(std::any_of(allowed.begin(), allowed.end(), [&](auto& s) { return s.uid == c.uid; }));
    }
  }
}

TEST(Retrieve, MonotoneFiltering)
{
  std::mt19937 rng(19);
  auto index = random_index(rng, 300);
  Universe all(index.memory, DomainPolicy::all_domains);
  for (int i = 0; i < 100; ++i)
  {
    auto q = random_query(rng, index);
    std::size_t previous = SIZE_MAX;
    for (double tau : {0.1, 0.2, 0.3, 0.4, 0.5, 0.8})
    {
      auto n = ngm_filter(index.suffix_array, q, tau, 1, all).size();
      ASSERT_LE(n, previous);
      previous = n;
    }
    previous = 0;
    for (std::size_t limit : {1u, 5u, 20u, 100u})
    {
      auto n = index.inverted.bm25_candidates(q, limit).size();
      ASSERT_GE(n, previous);
      previous = n;
    }
  }
}

TEST(Retrieve, ContrastZeroIsPlainTopK)
{
  std::mt19937 rng(23);
  auto index = random_index(rng, 300);
  for (int i = 0; i < 100; ++i)
  {
    auto q = random_query(rng, index);
    for (Ranker ranker : {Ranker{EditRanker{}}, Ranker{EditRanker{EditCosts::delta_lcs()}}, Ranker{Bm25Ranker{}}})
    {
      RetrievalConfig config;
      config.filter = Bm25Filter{50};
      config.ranker = ranker;
      config.k = 4;
      auto plain = retrieve(index, q, config);
      config.contrast = 0.0;
      auto zero = retrieve(index, q, config);
      ASSERT_EQ(plain.matches, zero.matches);
      std::vector<Uid> candidates;
      for (const auto& scored : index.inverted.bm25_candidates(q, 50))
        candidates.push_back(scored.uid);
      std::sort(candidates.begin(), candidates.end());
      auto ranked = rank(index, candidates, q, ranker);
      std::erase_if(ranked, [](auto& c) { return c.base_score <= 0; });
      auto manual = contrastive_select(ranked, 0.0, 4, index.memory);
      ASSERT_EQ(manual.matches, zero.matches);
    }
  }
}

TEST(Retrieve, BatchIsDeterministicAcrossThreads)
{
  std::mt19937 rng(29);
  auto index = random_index(rng, 500);
  std::vector<BatchQuery> batch;
  for (int i = 0; i < 200; ++i)
    batch.push_back({random_query(rng, index), i % 2 ? std::optional<std::string>("a") : std::nullopt,
                     i % 5 == 0 ? std::optional<Uid>(Uid(i)) : std::nullopt});
  RetrievalConfig config;
  config.contrast = 0.3;
  config.domain_policy = DomainPolicy::all_domains;
  auto one = retrieve_batch(index, batch, config, 1);
  for (std::size_t threads : {2u, 8u})
  {
    auto many = retrieve_batch(index, batch, config, threads);
    ASSERT_EQ(one.size(), many.size());
    for (std::size_t i = 0; i < one.size(); ++i)
    {
      ASSERT_EQ(one[i].matches, many[i].matches);
      ASSERT_EQ(one[i].exhausted, many[i].exhausted);
    }
  }
  for (std::size_t i = 0; i < batch.size(); ++i)
    ASSERT_EQ(one[i].matches, retrieve(index, batch[i].query, config, batch[i].exclude).matches);
}

TEST(Retrieve, BatchReportsConfigErrorsUpFront)
{
  auto index = two_domain_index();
  RetrievalConfig config;
  config.domain_policy = DomainPolicy::in_domain;
  std::vector<BatchQuery> batch{{index.memory.encode_query("blood"), std::string("med"), std::nullopt},
                                {index.memory.encode_query("court"), std::string("tax"), std::nullopt}};
  EXPECT_THROW(retrieve_batch(index, batch, config, 4), ConfigError);
}
