#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <tmr/pipeline.hh>

namespace tmr
{
  /* One line of the retrieval output stream:
       {"query": str, "domain": str|null,
        "matches": [{"uid": int, "source": str, "target": str,
                     "base_score": num, "adjusted_score": num}, ...],
        "exhausted": bool}
     Field order is fixed and scores carry exactly 6 decimals. */
  struct MatchRecord
  {
    struct Match
    {
      Uid uid = 0;
      std::string source;
      std::string target;
      double base_score = 0;
      double adjusted_score = 0;
    };

    std::string query;
    std::optional<std::string> domain;
    std::vector<Match> matches;
    bool exhausted = false;
  };

  MatchRecord make_record(const TranslationIndex& index,
                          const RetrievedSet& retrieved,
                          std::string query_text,
                          std::optional<std::string> domain);

  std::string to_jsonl(const MatchRecord& record);
  /* one row per match: query_index, rank, uid, base, adjusted, source, target */
  std::string to_tsv(const MatchRecord& record, std::size_t query_index);
  inline constexpr std::string_view kTsvHeader =
    "query_index\trank\tuid\tbase_score\tadjusted_score\tsource\ttarget";

  /* throws IngestionError on malformed lines */
  MatchRecord parse_record(std::string_view line);
  /* skips blank lines; errors carry the line number */
  std::vector<MatchRecord> read_records(std::istream& in);
}
