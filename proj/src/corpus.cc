#include <tmr/corpus.hh>

#include <fstream>

#include <fmt/format.h>

#include <tmr/errors.hh>

namespace tmr
{
  TranslationMemory::TranslationMemory(TokenizerOptions options)
    : _options(options)
  {
  }

  void TranslationMemory::require_mutable() const
  {
    if (_frozen)
      throw std::logic_error("translation memory is frozen");
  }

  std::uint32_t TranslationMemory::intern_domain(std::string_view name)
  {
    if (auto id = find_domain(name))
      return *id;
    _domains.emplace_back(name);
    return static_cast<std::uint32_t>(_domains.size() - 1);
  }

  std::optional<std::uint32_t> TranslationMemory::find_domain(std::string_view name) const
  {
    for (std::size_t i = 0; i < _domains.size(); ++i)
      if (_domains[i] == name)
        return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }

  std::optional<Uid> TranslationMemory::add(std::string_view source,
                                            std::string_view target,
                                            std::string_view domain)
  {
    require_mutable();
    return add_tokens(tmr::tokenize(source, _options), tmr::tokenize(target, _options), domain);
  }

  std::optional<Uid> TranslationMemory::add_tokens(const std::vector<std::string>& source,
                                                   const std::vector<std::string>& target,
                                                   std::string_view domain)
  {
    require_mutable();
    if (source.empty() || target.empty())
    {
      ++_skipped;
      return std::nullopt;
    }
    TranslationUnit unit;
    unit.uid = static_cast<Uid>(_units.size());
    unit.source = _source_vocab.encode(source);
    unit.target = _target_vocab.encode(target);
    unit.domain = intern_domain(domain);
    _units.push_back(std::move(unit));
    return _units.back().uid;
  }

  void TranslationMemory::freeze()
  {
    if (_frozen)
      return;
    _source_vocab.reset_segment_frequencies();
    _target_vocab.reset_segment_frequencies();
    for (const auto& unit : _units)
    {
      _source_vocab.count_segment(unit.source);
      _target_vocab.count_segment(unit.target);
    }
    _frozen = true;
  }

  Sentence TranslationMemory::encode_query(std::string_view text) const
  {
    return _source_vocab.encode_frozen(tmr::tokenize(text, _options));
  }

  double TranslationMemory::mean_source_length() const
  {
    if (_units.empty())
      return 0;
    std::size_t total = 0;
    for (const auto& u : _units)
      total += u.source.length();
    return static_cast<double>(total) / static_cast<double>(_units.size());
  }

  double TranslationMemory::mean_target_length() const
  {
    if (_units.empty())
      return 0;
    std::size_t total = 0;
    for (const auto& u : _units)
      total += u.target.length();
    return static_cast<double>(total) / static_cast<double>(_units.size());
  }

  std::vector<std::string> read_lines(const std::filesystem::path& path)
  {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw IngestionError(fmt::format("cannot read '{}'", path.string()));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
    {
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      lines.push_back(std::move(line));
    }
    if (in.bad())
      throw IngestionError(fmt::format("I/O error while reading '{}'", path.string()));
    return lines;
  }

  static void add_line_pair(TranslationMemory& memory,
                            const std::string& source,
                            const std::string& target,
                            std::string_view domain,
                            const std::string& where,
                            std::size_t line_no,
                            LoadReport& report)
  {
    std::optional<Uid> uid;
    try
    {
      uid = memory.add(source, target, domain);
    }
    catch (const IngestionError& e)
    {
      throw IngestionError(fmt::format("{}:{}: {}", where, line_no, e.what()));
    }
    if (uid)
      ++report.added;
    else
      ++report.skipped;
  }

  LoadReport load_corpus(TranslationMemory& memory,
                         const std::filesystem::path& source_path,
                         const std::filesystem::path& target_path,
                         std::string_view domain)
  {
    const auto sources = read_lines(source_path);
    const auto targets = read_lines(target_path);
    if (sources.size() != targets.size())
      throw IngestionError(fmt::format("line count mismatch: '{}' has {} lines, '{}' has {} lines",
                                       source_path.string(), sources.size(),
                                       target_path.string(), targets.size()));
    LoadReport report;
    report.lines = sources.size();
    const auto where = source_path.string();
    for (std::size_t i = 0; i < sources.size(); ++i)
      add_line_pair(memory, sources[i], targets[i], domain, where, i + 1, report);
    return report;
  }

  LoadReport load_tsv(TranslationMemory& memory,
                      const std::filesystem::path& path,
                      std::string_view domain)
  {
    const auto lines = read_lines(path);
    LoadReport report;
    report.lines = lines.size();
    const auto where = path.string();
    for (std::size_t i = 0; i < lines.size(); ++i)
    {
      const auto& line = lines[i];
      const auto tab = line.find('\t');
      if (tab == std::string::npos)
      {
        if (line.find_first_not_of(" \t") == std::string::npos)
        {
          ++report.skipped;
          continue;
        }
        throw IngestionError(fmt::format("{}:{}: missing TAB separator", where, i + 1));
      }
      if (line.find('\t', tab + 1) != std::string::npos)
        throw IngestionError(fmt::format("{}:{}: expected 2 columns", where, i + 1));
      add_line_pair(memory, line.substr(0, tab), line.substr(tab + 1), domain, where, i + 1, report);
    }
    return report;
  }
}
