#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <tmr/sentence.hh>
#include <tmr/tokenizer.hh>
#include <tmr/vocabulary.hh>

namespace tmr
{
  /* Parallel corpus with source/target vocabularies. Mutable until freeze();
     afterwards it is read-only and may be shared across threads. */
  class TranslationMemory
  {
  public:
    explicit TranslationMemory(TokenizerOptions options = {});

    /* Adds one pair; returns its uid, or nullopt when either side is empty
       after tokenization (the pair is counted in skipped()). */
    std::optional<Uid> add(std::string_view source, std::string_view target, std::string_view domain);
    /* Adds an already tokenized pair. */
    std::optional<Uid> add_tokens(const std::vector<std::string>& source,
                                  const std::vector<std::string>& target,
                                  std::string_view domain);

    void freeze();
    bool frozen() const { return _frozen; }

    /* Tokenizes against the frozen source vocabulary. */
    Sentence encode_query(std::string_view text) const;

    const std::vector<TranslationUnit>& units() const { return _units; }
    const TranslationUnit& unit(Uid uid) const { return _units.at(uid); }
    std::size_t size() const { return _units.size(); }
    std::size_t skipped() const { return _skipped; }

    const Vocabulary& source_vocab() const { return _source_vocab; }
    const Vocabulary& target_vocab() const { return _target_vocab; }
    const TokenizerOptions& tokenizer() const { return _options; }

    const std::vector<std::string>& domains() const { return _domains; }
    std::optional<std::uint32_t> find_domain(std::string_view name) const;
    const std::string& domain_name(const TranslationUnit& unit) const { return _domains.at(unit.domain); }

    std::string source_text(Uid uid) const { return _source_vocab.decode(unit(uid).source); }
    std::string target_text(Uid uid) const { return _target_vocab.decode(unit(uid).target); }

    double mean_source_length() const;
    double mean_target_length() const;

  private:
    std::uint32_t intern_domain(std::string_view name);
    void require_mutable() const;

    TokenizerOptions _options;
    Vocabulary _source_vocab;
    Vocabulary _target_vocab;
    std::vector<std::string> _domains;
    std::vector<TranslationUnit> _units;
    std::size_t _skipped = 0;
    bool _frozen = false;

    friend class BinaryAccess;
  };

  struct LoadReport
  {
    std::size_t added = 0;
    std::size_t skipped = 0;  // pairs with an empty side
    std::size_t lines = 0;
  };

  /* Reads aligned one-sentence-per-line files into `memory`. Throws
     IngestionError on unreadable files, mismatched line counts or invalid
     encoding (with the offending line number). */
  LoadReport load_corpus(TranslationMemory& memory,
                         const std::filesystem::path& source_path,
                         const std::filesystem::path& target_path,
                         std::string_view domain);

  /* Same, from a single source<TAB>target file. */
  LoadReport load_tsv(TranslationMemory& memory,
                      const std::filesystem::path& path,
                      std::string_view domain);

  std::vector<std::string> read_lines(const std::filesystem::path& path);
}
