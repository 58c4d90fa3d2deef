#include <tmr/index.hh>

#include <bit>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include <tmr/errors.hh>

namespace tmr
{
  TranslationIndex TranslationIndex::build(TranslationMemory memory, double prune_percent)
  {
    memory.freeze();
    TranslationIndex index{std::move(memory), {}, {}};
    index.suffix_array = SuffixArrayIndex::build(index.memory);
    index.inverted = InvertedIndex::build(index.memory, prune_percent);
    return index;
  }

  namespace
  {
    class Writer
    {
    public:
      explicit Writer(std::ostream& out) : _out(out) {}

      void u8(std::uint8_t v) { _out.put(static_cast<char>(v)); }
      void u32(std::uint32_t v)
      {
        char b[4];
        for (int i = 0; i < 4; ++i)
          b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        _out.write(b, 4);
      }
      void u64(std::uint64_t v)
      {
        char b[8];
        for (int i = 0; i < 8; ++i)
          b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        _out.write(b, 8);
      }
      void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
      void str(const std::string& s)
      {
        u64(s.size());
        _out.write(s.data(), static_cast<std::streamsize>(s.size()));
      }
      void u32s(const std::vector<std::uint32_t>& v)
      {
        u64(v.size());
        for (auto x : v)
          u32(x);
      }

    private:
      std::ostream& _out;
    };

    class Reader
    {
    public:
      explicit Reader(std::istream& in) : _in(in) {}

      void bytes(char* dst, std::size_t n)
      {
        _in.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(_in.gcount()) != n)
          throw IndexFormatError("truncated index file");
      }
      std::uint8_t u8()
      {
        char c;
        bytes(&c, 1);
        return static_cast<std::uint8_t>(c);
      }
      std::uint32_t u32()
      {
        unsigned char b[4];
        bytes(reinterpret_cast<char*>(b), 4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i)
          v = (v << 8) | b[i];
        return v;
      }
      std::uint64_t u64()
      {
        unsigned char b[8];
        bytes(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i)
          v = (v << 8) | b[i];
        return v;
      }
      double f64() { return std::bit_cast<double>(u64()); }
      std::size_t count()
      {
        const auto n = u64();
        if (n > (std::uint64_t(1) << 40))
          throw IndexFormatError("corrupt index file (bad length)");
        return static_cast<std::size_t>(n);
      }
      std::string str()
      {
        std::string s(count(), '\0');
        if (!s.empty())
          bytes(s.data(), s.size());
        return s;
      }
      std::vector<std::uint32_t> u32s()
      {
        std::vector<std::uint32_t> v(count());
        for (auto& x : v)
          x = u32();
        return v;
      }

    private:
      std::istream& _in;
    };
  }

  class BinaryAccess
  {
  public:
    static void write(Writer& w, const Vocabulary& vocab)
    {
      w.u64(vocab._surfaces.size());
      for (const auto& s : vocab._surfaces)
        w.str(s);
      w.u32s(vocab._segment_freq);
    }

    static void read(Reader& r, Vocabulary& vocab)
    {
      vocab = Vocabulary();
      const auto n = r.count();
      for (std::size_t i = 0; i < n; ++i)
      {
        auto s = r.str();
        if (i == 0)
        {
          if (s != Vocabulary::unknown_surface)
            throw IndexFormatError("corrupt vocabulary");
          continue;
        }
        if (vocab.intern(s) != i)
          throw IndexFormatError("corrupt vocabulary (duplicate term)");
      }
      vocab._segment_freq = r.u32s();
      if (vocab._segment_freq.size() != vocab._surfaces.size())
        throw IndexFormatError("corrupt vocabulary frequencies");
    }

    static void write(Writer& w, const TranslationMemory& m)
    {
      w.u8(static_cast<std::uint8_t>(m._options.mode));
      w.u8(m._options.lowercase ? 1 : 0);
      write(w, m._source_vocab);
      write(w, m._target_vocab);
      w.u64(m._domains.size());
      for (const auto& d : m._domains)
        w.str(d);
      w.u64(m._skipped);
      w.u64(m._units.size());
      for (const auto& u : m._units)
      {
        w.u32(u.domain);
        w.u32s(u.source.tokens);
        w.u32s(u.target.tokens);
      }
    }

    static void read(Reader& r, TranslationMemory& m)
    {
      const auto mode = r.u8();
      if (mode > 1)
        throw IndexFormatError("unknown tokenizer mode in index");
      m._options.mode = static_cast<TokenizerMode>(mode);
      m._options.lowercase = r.u8() != 0;
      read(r, m._source_vocab);
      read(r, m._target_vocab);
      m._domains.resize(r.count());
      for (auto& d : m._domains)
        d = r.str();
      m._skipped = r.count();
      m._units.resize(r.count());
      Uid uid = 0;
      for (auto& u : m._units)
      {
        u.uid = uid++;
        u.domain = r.u32();
        u.source.tokens = r.u32s();
        u.target.tokens = r.u32s();
        if (u.domain >= m._domains.size())
          throw IndexFormatError("corrupt unit domain");
        for (TokenId t : u.source.tokens)
          if (t >= m._source_vocab.size())
            throw IndexFormatError("corrupt source tokens");
        for (TokenId t : u.target.tokens)
          if (t >= m._target_vocab.size())
            throw IndexFormatError("corrupt target tokens");
      }
      m._frozen = true;
    }

    static void write(Writer& w, const SuffixArrayIndex& sa)
    {
      w.u32s(sa._stream);
      w.u32s(sa._suffixes);
      w.u32s(sa._sentence_of);
      w.u32s(sa._sentence_start);
      w.u32s(sa._bucket);
    }

    static void read(Reader& r, SuffixArrayIndex& sa)
    {
      sa._stream = r.u32s();
      sa._suffixes = r.u32s();
      sa._sentence_of = r.u32s();
      sa._sentence_start = r.u32s();
      sa._bucket = r.u32s();
      if (sa._sentence_of.size() != sa._stream.size())
        throw IndexFormatError("corrupt suffix array");
      for (auto p : sa._suffixes)
        if (p >= sa._stream.size())
          throw IndexFormatError("corrupt suffix array");
    }

    static void write(Writer& w, const InvertedIndex& inv)
    {
      w.f64(inv._p);
      w.f64(inv._params.k1);
      w.f64(inv._params.b);
      w.f64(inv._avgdl);
      w.u32s(inv._doc_length);
      w.u32s(inv._df);
      w.u64(inv._pruned.size());
      for (auto p : inv._pruned)
        w.u8(p);
      w.u64(inv._postings.size());
      for (const auto& plist : inv._postings)
      {
        w.u64(plist.size());
        for (const auto& p : plist)
        {
          w.u32(p.uid);
          w.u32(p.tf);
        }
      }
    }

    static void read(Reader& r, InvertedIndex& inv)
    {
      inv._p = r.f64();
      inv._params.k1 = r.f64();
      inv._params.b = r.f64();
      inv._avgdl = r.f64();
      inv._doc_length = r.u32s();
      inv._df = r.u32s();
      inv._pruned.resize(r.count());
      for (auto& p : inv._pruned)
        p = r.u8();
      inv._postings.resize(r.count());
      if (inv._postings.size() != inv._pruned.size() || inv._df.size() != inv._pruned.size())
        throw IndexFormatError("corrupt inverted index");
      for (auto& plist : inv._postings)
      {
        plist.resize(r.count());
        for (auto& p : plist)
        {
          p.uid = r.u32();
          p.tf = r.u32();
          if (p.uid >= inv._doc_length.size())
            throw IndexFormatError("corrupt posting list");
        }
      }
    }
  };

  void write_index(const TranslationIndex& index, std::ostream& out)
  {
    out.write(kIndexMagic, sizeof(kIndexMagic));
    Writer w(out);
    w.u8(kIndexVersion);
    BinaryAccess::write(w, index.memory);
    BinaryAccess::write(w, index.suffix_array);
    BinaryAccess::write(w, index.inverted);
  }

  TranslationIndex read_index(std::istream& in)
  {
    Reader r(in);
    char magic[sizeof(kIndexMagic)];
    try
    {
      r.bytes(magic, sizeof(magic));
    }
    catch (const IndexFormatError&)
    {
      throw IndexFormatError("not an index file (too short)");
    }
    if (std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0)
      throw IndexFormatError("not an index file (bad magic)");
    const auto version = r.u8();
    if (version != kIndexVersion)
      throw IndexFormatError(fmt::format("index format version {} is not supported (expected {})",
                                         version, kIndexVersion));
    TranslationIndex index;
    BinaryAccess::read(r, index.memory);
    BinaryAccess::read(r, index.suffix_array);
    BinaryAccess::read(r, index.inverted);
    if (index.suffix_array.num_sentences() != index.memory.size()
        || index.inverted.num_segments() != index.memory.size())
      throw IndexFormatError("index sections disagree on corpus size");
    if (in.peek() != std::char_traits<char>::eof())
      throw IndexFormatError("trailing bytes after index");
    return index;
  }

  void save_index(const TranslationIndex& index, const std::filesystem::path& path)
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IngestionError(fmt::format("cannot write '{}'", path.string()));
    write_index(index, out);
    out.flush();
    if (!out)
      throw IngestionError(fmt::format("I/O error while writing '{}'", path.string()));
  }

  TranslationIndex load_index(const std::filesystem::path& path)
  {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw IngestionError(fmt::format("cannot read '{}'", path.string()));
    return read_index(in);
  }
}
