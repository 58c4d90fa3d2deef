#pragma once

#include <filesystem>
#include <iosfwd>

#include <tmr/corpus.hh>
#include <tmr/inverted_index.hh>
#include <tmr/suffix_array.hh>

namespace tmr
{
  /* A frozen memory with both of its indexes. */
  struct TranslationIndex
  {
    TranslationMemory memory;
    SuffixArrayIndex suffix_array;
    InvertedIndex inverted;

    /* freezes `memory` if needed */
    static TranslationIndex build(TranslationMemory memory, double prune_percent = 2.0);
  };

  /* On-disk container:
       8 bytes  magic "TMRINDEX"
       1 byte   format version
       then the memory (tokenizer options, vocabularies, domains, units),
       the suffix array and the inverted index, all little-endian.
     Identical inputs serialize to identical bytes. */
  inline constexpr char kIndexMagic[8] = {'T', 'M', 'R', 'I', 'N', 'D', 'E', 'X'};
  inline constexpr std::uint8_t kIndexVersion = 1;

  void write_index(const TranslationIndex& index, std::ostream& out);
  /* throws IndexFormatError on bad magic, version mismatch or truncation */
  TranslationIndex read_index(std::istream& in);

  void save_index(const TranslationIndex& index, const std::filesystem::path& path);
  TranslationIndex load_index(const std::filesystem::path& path);
}
