#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include <tmr/corpus.hh>
#include <tmr/errors.hh>
#include <tmr/tokenizer.hh>

using namespace tmr;

namespace
{
  std::filesystem::path write_file(const std::string& name, const std::string& content)
  {
    auto dir = std::filesystem::temp_directory_path() / "tmr_text_tests";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path, std::ios::binary) << content;
    return path;
  }
}

TEST(Tokenizer, EmptyText)
{
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("   \t ").empty());
}

TEST(Tokenizer, Whitespace)
{
  auto words = tokenize("orthostatic hypotension .");
  ASSERT_EQ(words.size(), 3u);
  EXPECT_EQ(words[2], ".");
  EXPECT_EQ(tokenize("  a \t b  "), (std::vector<std::string>{"a", "b"}));
}

TEST(Tokenizer, Punct)
{
  TokenizerOptions opts{TokenizerMode::punct, false};
  EXPECT_EQ(tokenize("Hello, world!", opts), (std::vector<std::string>{"Hello", ",", "world", "!"}));
  opts.lowercase = true;
  EXPECT_EQ(tokenize("Hello, World", opts), (std::vector<std::string>{"hello", ",", "world"}));
}

TEST(Tokenizer, CaseSensitiveByDefault)
{
  EXPECT_EQ(tokenize("The the"), (std::vector<std::string>{"The", "the"}));
}

TEST(Tokenizer, Utf8)
{
  EXPECT_TRUE(is_valid_utf8("caf\xc3\xa9 \xe2\x82\xac"));
  EXPECT_FALSE(is_valid_utf8("\xc3"));
  EXPECT_FALSE(is_valid_utf8("\xff"));
  EXPECT_FALSE(is_valid_utf8("\xe2\x82"));
  EXPECT_FALSE(is_valid_utf8("\xc0\xaf"));  // overlong
  EXPECT_THROW(tokenize("bad \xff byte"), IngestionError);
  EXPECT_EQ(tokenize("caf\xc3\xa9").size(), 1u);
}

TEST(Tokenizer, Modes)
{
  EXPECT_EQ(parse_tokenizer_mode("punct"), TokenizerMode::punct);
  EXPECT_EQ(to_string(TokenizerMode::whitespace), "whitespace");
  EXPECT_THROW(parse_tokenizer_mode("bpe"), ConfigError);
}

TEST(Vocabulary, Bijection)
{
  Vocabulary v;
  EXPECT_EQ(v.size(), 1u);  // <unk>
  auto a = v.intern("a");
  auto b = v.intern("b");
  EXPECT_EQ(v.intern("a"), a);
  EXPECT_NE(a, b);
  EXPECT_NE(a, kUnknownToken);
  EXPECT_EQ(v.surface(b), "b");
  EXPECT_EQ(v.lookup("zzz"), kUnknownToken);
}

TEST(Vocabulary, FrozenEncodingMapsUnknown)
{
  Vocabulary v;
  auto s = v.encode({"x", "y"});
  auto q = v.encode_frozen({"y", "new"});
  ASSERT_EQ(q.length(), 2u);
  EXPECT_EQ(q.tokens[0], s.tokens[1]);
  EXPECT_EQ(q.tokens[1], kUnknownToken);
  EXPECT_EQ(v.size(), 3u);
}

TEST(Vocabulary, RoundTrip)
{
  std::mt19937 rng(7);
  TranslationMemory memory;
  std::vector<std::string> lines;
  for (int i = 0; i < 200; ++i)
  {
    std::string line;
    int n = 1 + rng() % 12;
    for (int j = 0; j < n; ++j)
      line += (j ? " " : "") + std::string("t") + std::to_string(rng() % 50);
    lines.push_back(line);
    memory.add(line, "x", "d");
  }
  memory.freeze();
  for (std::size_t i = 0; i < lines.size(); ++i)
  {
    auto text = memory.source_text(Uid(i));
    EXPECT_EQ(text, lines[i]);
    EXPECT_EQ(memory.encode_query(text), memory.unit(Uid(i)).source);
  }
}

TEST(Vocabulary, SegmentFrequenciesMatchRecount)
{
  std::mt19937 rng(11);
  TranslationMemory memory;
  for (int i = 0; i < 1000; ++i)
  {
    std::string line;
    int n = 1 + rng() % 10;
    for (int j = 0; j < n; ++j)
      line += " w" + std::to_string(rng() % 300);
    memory.add(line, "t", "d");
  }
  memory.freeze();
  const auto& vocab = memory.source_vocab();
  std::vector<std::uint32_t> recount(vocab.size(), 0);
  for (const auto& unit : memory.units())
  {
    std::set<TokenId> seen(unit.source.tokens.begin(), unit.source.tokens.end());
    for (auto t : seen)
      ++recount[t];
  }
  for (TokenId t = 0; t < vocab.size(); ++t)
  {
    EXPECT_EQ(vocab.segment_frequency(t), recount[t]) << vocab.surface(t);
    EXPECT_LE(vocab.segment_frequency(t), memory.size());
  }
}

TEST(Corpus, ThreeLines)
{
  auto src = write_file("a.src", "a b\nc d e\nf\n");
  auto tgt = write_file("a.tgt", "A B\nC D E\nF\n");
  TranslationMemory memory;
  auto report = load_corpus(memory, src, tgt, "med");
  EXPECT_EQ(report.added, 3u);
  EXPECT_EQ(report.skipped, 0u);
  ASSERT_EQ(memory.size(), 3u);
  for (Uid i = 0; i < 3; ++i)
    EXPECT_EQ(memory.unit(i).uid, i);
  EXPECT_EQ(memory.domain_name(memory.unit(0)), "med");
  EXPECT_EQ(memory.unit(1).source.length(), 3u);
}

TEST(Corpus, LineCountMismatch)
{
  auto src = write_file("b.src", "a\nb\nc\n");
  auto tgt = write_file("b.tgt", "a\nb\nc\nd\n");
  TranslationMemory memory;
  try
  {
    load_corpus(memory, src, tgt, "d");
    FAIL() << "expected IngestionError";
  }
  catch (const IngestionError& e)
  {
    std::string msg = e.what();
    EXPECT_NE(msg.find("3 lines"), std::string::npos) << msg;
    EXPECT_NE(msg.find("4 lines"), std::string::npos) << msg;
  }
}

TEST(Corpus, EmptySideSkipped)
{
  auto src = write_file("c.src", "a b\nc\nd e\n");
  auto tgt = write_file("c.tgt", "A B\n\nD E\n");
  TranslationMemory memory;
  auto report = load_corpus(memory, src, tgt, "d");
  EXPECT_EQ(report.added, 2u);
  EXPECT_EQ(report.skipped, 1u);
  EXPECT_EQ(memory.size(), 2u);
  EXPECT_EQ(memory.skipped(), 1u);
  EXPECT_EQ(memory.source_text(1), "d e");
}

TEST(Corpus, InvalidEncodingReportsLine)
{
  auto src = write_file("d.src", "ok\nbad \xff\n");
  auto tgt = write_file("d.tgt", "ok\nok\n");
  TranslationMemory memory;
  try
  {
    load_corpus(memory, src, tgt, "d");
    FAIL() << "expected IngestionError";
  }
  catch (const IngestionError& e)
  {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(Corpus, MissingFile)
{
  TranslationMemory memory;
  EXPECT_THROW(load_corpus(memory, "/nonexistent/x", "/nonexistent/y", "d"), IngestionError);
}

TEST(Corpus, Tsv)
{
  auto path = write_file("e.tsv", "a b\tA B\r\nc\tC\n");
  TranslationMemory memory;
  auto report = load_tsv(memory, path, "law");
  EXPECT_EQ(report.added, 2u);
  EXPECT_EQ(memory.target_text(0), "A B");
  EXPECT_EQ(memory.target_text(1), "C");

  auto bad = write_file("f.tsv", "only one column\n");
  TranslationMemory m2;
  EXPECT_THROW(load_tsv(m2, bad, "law"), IngestionError);
}

TEST(Corpus, FrozenIsReadOnly)
{
  TranslationMemory memory;
  memory.add("a", "b", "d");
  memory.freeze();
  EXPECT_THROW(memory.add("c", "d", "d"), std::logic_error);
}

TEST(Corpus, Domains)
{
  TranslationMemory memory;
  memory.add("a", "A", "med");
  memory.add("b", "B", "law");
  memory.add("c", "C", "med");
  EXPECT_EQ(memory.domains().size(), 2u);
  EXPECT_EQ(memory.find_domain("law"), std::optional<std::uint32_t>(1));
  EXPECT_FALSE(memory.find_domain("it").has_value());
  EXPECT_DOUBLE_EQ(memory.mean_source_length(), 1.0);
}
