#include <tmr/match_io.hh>

#include <istream>

#include <fmt/format.h>
#include <json.hpp>

#include <tmr/errors.hh>

namespace tmr
{
  MatchRecord make_record(const TranslationIndex& index,
                          const RetrievedSet& retrieved,
                          std::string query_text,
                          std::optional<std::string> domain)
  {
    MatchRecord record;
    record.query = std::move(query_text);
    record.domain = std::move(domain);
    record.exhausted = retrieved.exhausted;
    for (const auto& c : retrieved.matches)
      record.matches.push_back({c.uid,
                                index.memory.source_text(c.uid),
                                index.memory.target_text(c.uid),
                                c.base_score,
                                c.adjusted_score});
    return record;
  }

  static std::string quote(const std::string& s)
  {
    return nlohmann::json(s).dump();
  }

  std::string to_jsonl(const MatchRecord& record)
  {
    std::string out = "{\"query\": " + quote(record.query) + ", \"domain\": ";
    out += record.domain ? quote(*record.domain) : "null";
    out += ", \"matches\": [";
    for (std::size_t i = 0; i < record.matches.size(); ++i)
    {
      const auto& m = record.matches[i];
      if (i)
        out += ", ";
      out += fmt::format("{{\"uid\": {}, \"source\": {}, \"target\": {}, "
                         "\"base_score\": {:.6f}, \"adjusted_score\": {:.6f}}}",
                         m.uid, quote(m.source), quote(m.target), m.base_score, m.adjusted_score);
    }
    out += "], \"exhausted\": ";
    out += record.exhausted ? "true" : "false";
    out += "}";
    return out;
  }

  static std::string tsv_field(std::string s)
  {
    for (auto& c : s)
      if (c == '\t' || c == '\n')
        c = ' ';
    return s;
  }

  std::string to_tsv(const MatchRecord& record, std::size_t query_index)
  {
    std::string out;
    for (std::size_t i = 0; i < record.matches.size(); ++i)
    {
      const auto& m = record.matches[i];
      out += fmt::format("{}\t{}\t{}\t{:.6f}\t{:.6f}\t{}\t{}\n", query_index, i + 1, m.uid,
                         m.base_score, m.adjusted_score, tsv_field(m.source), tsv_field(m.target));
    }
    return out;
  }

  MatchRecord parse_record(std::string_view line)
  {
    nlohmann::json j;
    try
    {
      j = nlohmann::json::parse(line);
    }
    catch (const nlohmann::json::exception& e)
    {
      throw IngestionError(fmt::format("malformed match record: {}", e.what()));
    }
    try
    {
      MatchRecord record;
      record.query = j.at("query").get<std::string>();
      if (j.contains("domain") && !j.at("domain").is_null())
        record.domain = j.at("domain").get<std::string>();
      for (const auto& m : j.at("matches"))
        record.matches.push_back({m.at("uid").get<Uid>(),
                                  m.at("source").get<std::string>(),
                                  m.at("target").get<std::string>(),
                                  m.at("base_score").get<double>(),
                                  m.at("adjusted_score").get<double>()});
      record.exhausted = j.value("exhausted", false);
      return record;
    }
    catch (const nlohmann::json::exception& e)
    {
      throw IngestionError(fmt::format("malformed match record: {}", e.what()));
    }
  }

  std::vector<MatchRecord> read_records(std::istream& in)
  {
    std::vector<MatchRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      try
      {
        records.push_back(parse_record(line));
      }
      catch (const IngestionError& e)
      {
        throw IngestionError(fmt::format("line {}: {}", line_no, e.what()));
      }
    }
    return records;
  }
}
