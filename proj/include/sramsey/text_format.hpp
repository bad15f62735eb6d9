#pragma once

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "structure.hpp"

namespace sramsey {

class ParseError : public Error {
public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

struct NamedStructure {
  std::string name;
  FinStructure structure;
};

namespace text {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<long long> to_int(std::string_view s) {
  long long v = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Line source that tracks 1-based line numbers and skips blank lines and
/// `#` comments.
class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next significant line split into words, or nullopt at end of input.
  std::optional<std::vector<std::string>> next() {
    if (pushed_) {
      pushed_ = false;
      return last_;
    }
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      auto words = split_ws(raw);
      if (words.empty() || words[0][0] == '#') continue;
      last_ = std::move(words);
      return last_;
    }
    return std::nullopt;
  }

  std::vector<std::string> expect(const char* what) {
    auto w = next();
    if (!w) throw ParseError(line_ + 1, std::string("unexpected end of input, expected ") + what);
    return *w;
  }

  void push_back() { pushed_ = true; }
  int line() const { return line_; }

private:
  std::istream& in_;
  int line_ = 0;
  bool pushed_ = false;
  std::vector<std::string> last_;
};

inline Signature parse_signature(const std::vector<std::string>& words, int line) {
  std::vector<Symbol> syms;
  for (std::size_t i = 1; i < words.size(); ++i) {
    auto slash = words[i].find('/');
    if (slash == std::string::npos || slash == 0)
      throw ParseError(line, "malformed symbol '" + words[i] + "', expected name/arity");
    auto arity = to_int(std::string_view(words[i]).substr(slash + 1));
    if (!arity || *arity < 1) throw ParseError(line, "bad arity in '" + words[i] + "'");
    std::string name = words[i].substr(0, slash);
    for (const auto& s : syms)
      if (s.name == name) throw ParseError(line, "duplicate symbol '" + name + "'");
    syms.push_back({name, static_cast<int>(*arity)});
  }
  return Signature(std::move(syms));
}

/// Parses one `structure ... end` block. The reader must be positioned so
/// that the next significant line is the `structure` header.
inline NamedStructure read_structure(LineReader& r) {
  auto head = r.expect("'structure <name>'");
  const int head_line = r.line();
  if (head[0] != "structure" || head.size() != 2)
    throw ParseError(head_line, "expected 'structure <name>'");
  auto sig_line = r.expect("'signature'");
  if (sig_line[0] != "signature") throw ParseError(r.line(), "expected 'signature ...'");
  Signature sig = parse_signature(sig_line, r.line());
  auto size_line = r.expect("'size <n>'");
  if (size_line[0] != "size" || size_line.size() != 2) throw ParseError(r.line(), "expected 'size <n>'");
  auto n = to_int(size_line[1]);
  if (!n || *n < 0) throw ParseError(r.line(), "bad size '" + size_line[1] + "'");
  const int size = static_cast<int>(*n);
  std::vector<FinStructure::Table> tables(sig.size());
  std::vector<char> seen(sig.size(), 0);
  while (true) {
    auto words = r.expect("'end'");
    const int line = r.line();
    if (words[0] == "end") {
      if (words.size() != 1) throw ParseError(line, "trailing tokens after 'end'");
      break;
    }
    int s = sig.index_of(words[0]);
    if (s < 0) throw ParseError(line, "unknown symbol '" + words[0] + "'");
    if (seen[s]) throw ParseError(line, "table for '" + words[0] + "' given twice");
    seen[s] = 1;
    const int arity = sig[s].arity;
    auto& table = tables[s];
    for (std::size_t w = 1; w < words.size(); ++w) {
      Tuple t;
      std::string_view tok = words[w];
      std::size_t start = 0;
      while (true) {
        auto comma = tok.find(',', start);
        auto part = tok.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        auto v = to_int(part);
        if (!v) throw ParseError(line, "bad tuple '" + words[w] + "' (token " + std::to_string(w) + ")");
        if (*v < 0 || *v >= size)
          throw ParseError(line, "index " + std::to_string(*v) + " out of range in tuple '" + words[w] +
                                     "' (token " + std::to_string(w) + ")");
        t.push_back(static_cast<Point>(*v));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (static_cast<int>(t.size()) != arity)
        throw ParseError(line, "tuple '" + words[w] + "' has arity " + std::to_string(t.size()) +
                                   ", expected " + std::to_string(arity));
      if (std::find(table.begin(), table.end(), t) != table.end())
        throw ParseError(line, "duplicate tuple '" + words[w] + "' (token " + std::to_string(w) + ")");
      table.push_back(std::move(t));
    }
  }
  try {
    return {head[1], FinStructure(std::move(sig), size, std::move(tables))};
  } catch (const InvalidStructure& e) {
    throw ParseError(head_line, e.what());
  }
}

/// Reads every structure block in the stream.
inline std::vector<NamedStructure> read_structures(std::istream& in) {
  LineReader r(in);
  std::vector<NamedStructure> out;
  while (r.next()) {
    r.push_back();
    out.push_back(read_structure(r));
  }
  return out;
}

inline std::string format_signature(const Signature& sig) {
  std::string s = "signature";
  for (const auto& sym : sig) s += " " + sym.name + "/" + std::to_string(sym.arity);
  return s;
}

inline void write_structure(std::ostream& out, const std::string& name, const FinStructure& S) {
  out << "structure " << name << "\n";
  out << format_signature(S.signature()) << "\n";
  out << "size " << S.size() << "\n";
  for (std::size_t s = 0; s < S.signature().size(); ++s) {
    if (S.table(s).empty()) continue;
    out << S.signature()[s].name;
    for (const auto& t : S.table(s)) {
      out << ' ';
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
    }
    out << "\n";
  }
  out << "end\n";
}

inline std::string to_string(const std::string& name, const FinStructure& S) {
  std::ostringstream os;
  write_structure(os, name, S);
  return os.str();
}

inline NamedStructure parse_structure(const std::string& s) {
  std::istringstream in(s);
  LineReader r(in);
  return read_structure(r);
}

inline std::string join(const std::vector<int>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

/// Parses whitespace-separated non-negative integers; throws on anything else.
inline std::vector<int> parse_ints(const std::vector<std::string>& words, std::size_t from, int line) {
  std::vector<int> out;
  for (std::size_t i = from; i < words.size(); ++i) {
    auto v = to_int(words[i]);
    if (!v) throw ParseError(line, "expected integer, got '" + words[i] + "'");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

}  // namespace text
}  // namespace sramsey
