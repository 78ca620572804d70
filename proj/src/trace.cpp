#include "fpdyn/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fpdyn {

MatrixDescriptor MatrixDescriptor::identity(int n) {
  if (n < 1) throw std::invalid_argument("identity descriptor needs n >= 1");
  MatrixDescriptor d;
  d.kind = Kind::Identity;
  d.m = d.n = n;
  return d;
}

MatrixDescriptor MatrixDescriptor::make_inline(int m, int n, std::vector<Rational> entries) {
  if (m < 1 || n < 1) throw std::invalid_argument("inline descriptor needs m >= 1, n >= 1");
  if (entries.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n))
    throw std::invalid_argument("inline descriptor entry count does not match m*n");
  MatrixDescriptor d;
  d.kind = Kind::Inline;
  d.m = m;
  d.n = n;
  d.entries = std::move(entries);
  return d;
}

std::string rational_to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    const BigInt num(s.substr(0, slash));
    const BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
}

std::string format_header(const TraceHeader& h) {
  std::string out = "fpdyn v1 m=" + std::to_string(h.matrix.m) + " n=" + std::to_string(h.matrix.n);
  out += " matrix=";
  out += h.matrix.kind == MatrixDescriptor::Kind::Identity ? "identity:" + std::to_string(h.matrix.n)
                                                           : std::string("inline");
  out += " policy=" + h.policy_name;
  out += " seed=" + (h.seed ? std::to_string(*h.seed) : std::string("none"));
  if (h.matrix.kind == MatrixDescriptor::Kind::Inline) {
    out += " entries=";
    for (std::size_t k = 0; k < h.matrix.entries.size(); ++k) {
      if (k) out += ',';
      out += rational_to_string(h.matrix.entries[k]);
    }
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// "key=value" -> value, or error
std::string expect_kv(const std::string& token, const std::string& key, int line) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0)
    throw TraceParseError(line, "expected '" + key + "=...', got '" + token + "'");
  return token.substr(prefix.size());
}

std::int64_t parse_i64(const std::string& s, int line, const char* what) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw TraceParseError(line, std::string("malformed ") + what + " '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s, int line, const char* what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw TraceParseError(line, std::string("malformed ") + what + " '" + s + "'");
  return v;
}

}  // namespace

TraceHeader parse_header(const std::string& line) {
  const auto tokens = split(line, ' ');
  if (tokens.size() < 6 || tokens[0] != "fpdyn" || tokens[1] != "v1")
    throw TraceParseError(1, "header must start with 'fpdyn v1'");
  TraceHeader h;
  const int m = static_cast<int>(parse_i64(expect_kv(tokens[2], "m", 1), 1, "m"));
  const int n = static_cast<int>(parse_i64(expect_kv(tokens[3], "n", 1), 1, "n"));
  const std::string matrix = expect_kv(tokens[4], "matrix", 1);
  h.policy_name = expect_kv(tokens[5], "policy", 1);
  if (!policy_kind_from_name(h.policy_name))
    throw TraceParseError(1, "unknown policy '" + h.policy_name + "'");
  if (tokens.size() < 7) throw TraceParseError(1, "missing seed field");
  const std::string seed = expect_kv(tokens[6], "seed", 1);
  if (seed != "none") h.seed = parse_u64(seed, 1, "seed");

  if (matrix.rfind("identity:", 0) == 0) {
    const int in = static_cast<int>(parse_i64(matrix.substr(9), 1, "identity size"));
    if (in != m || in != n) throw TraceParseError(1, "identity size disagrees with m/n");
    if (tokens.size() != 7) throw TraceParseError(1, "unexpected trailing header fields");
    h.matrix = MatrixDescriptor::identity(in);
  } else if (matrix == "inline") {
    if (tokens.size() != 8) throw TraceParseError(1, "inline matrix needs an entries field");
    const std::string entries = expect_kv(tokens[7], "entries", 1);
    std::vector<Rational> parsed;
    for (const std::string& e : split(entries, ',')) {
      try {
        parsed.push_back(rational_from_string(e));
      } catch (const std::exception& ex) {
        throw TraceParseError(1, ex.what());
      }
    }
    if (parsed.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n))
      throw TraceParseError(1, "entry count does not match m*n");
    h.matrix = MatrixDescriptor::make_inline(m, n, std::move(parsed));
  } else {
    throw TraceParseError(1, "matrix must be identity:<n> or inline");
  }
  return h;
}

void write_trace(std::ostream& os, const Trace& trace) {
  os << format_header(trace.header) << '\n';
  std::size_t next_epoch = 0, next_phase = 0;
  const auto flush_marks = [&](std::int64_t t) {
    while (next_epoch < trace.epoch_marks.size() && trace.epoch_marks[next_epoch].t <= t) {
      const EpochMark& e = trace.epoch_marks[next_epoch++];
      os << "# epoch " << e.index << " t=" << e.t << " T=" << e.T << " G=" << e.G << '\n';
    }
    while (next_phase < trace.phase_marks.size() && trace.phase_marks[next_phase].t <= t) {
      const PhaseMark& p = trace.phase_marks[next_phase++];
      os << "# phase " << p.phase << " t=" << p.t << '\n';
    }
  };
  flush_marks(0);
  char buf[64];
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const std::int64_t t = static_cast<std::int64_t>(k) + 1;
    const int len = std::snprintf(buf, sizeof buf, "%lld %d %d\n", static_cast<long long>(t),
                                  trace.steps[k].i + 1, trace.steps[k].j + 1);
    os.write(buf, len);
    flush_marks(t);
  }
}

Trace read_trace(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw TraceParseError(1, "empty input");
  Trace trace;
  trace.header = parse_header(line);
  int lineno = 1;
  std::int64_t expected_t = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) throw TraceParseError(lineno, "blank line");
    if (line[0] == '#') {
      const auto tokens = split(line, ' ');
      if (tokens.size() >= 2 && tokens[1] == "epoch") {
        if (tokens.size() != 6) throw TraceParseError(lineno, "malformed epoch mark");
        EpochMark e;
        e.index = parse_i64(tokens[2], lineno, "epoch index");
        e.t = parse_i64(expect_kv(tokens[3], "t", lineno), lineno, "t");
        e.T = parse_i64(expect_kv(tokens[4], "T", lineno), lineno, "T");
        e.G = parse_i64(expect_kv(tokens[5], "G", lineno), lineno, "G");
        trace.epoch_marks.push_back(e);
      } else if (tokens.size() >= 2 && tokens[1] == "phase") {
        if (tokens.size() != 4 || tokens[2].size() != 1 || (tokens[2][0] != 'A' && tokens[2][0] != 'B'))
          throw TraceParseError(lineno, "malformed phase mark");
        PhaseMark p;
        p.phase = tokens[2][0];
        p.t = parse_i64(expect_kv(tokens[3], "t", lineno), lineno, "t");
        trace.phase_marks.push_back(p);
      }
      // other comments are ignored
      continue;
    }
    std::int64_t t = 0, i = 0, j = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    auto r1 = std::from_chars(p, end, t);
    if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ')
      throw TraceParseError(lineno, "expected '<t> <i> <j>'");
    auto r2 = std::from_chars(r1.ptr + 1, end, i);
    if (r2.ec != std::errc{} || r2.ptr == end || *r2.ptr != ' ')
      throw TraceParseError(lineno, "expected '<t> <i> <j>'");
    auto r3 = std::from_chars(r2.ptr + 1, end, j);
    if (r3.ec != std::errc{} || r3.ptr != end)
      throw TraceParseError(lineno, "expected '<t> <i> <j>'");
    if (t != expected_t)
      throw TraceParseError(lineno, "step index " + std::to_string(t) + ", expected " +
                                        std::to_string(expected_t));
    if (i < 1 || i > trace.header.matrix.m) throw TraceParseError(lineno, "row index out of range");
    if (j < 1 || j > trace.header.matrix.n) throw TraceParseError(lineno, "column index out of range");
    trace.steps.push_back(Step{static_cast<std::int32_t>(i - 1), static_cast<std::int32_t>(j - 1)});
    ++expected_t;
  }
  return trace;
}

void write_trace_file(const std::string& path, const Trace& trace) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_trace(os, trace);
  os.flush();
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

Trace read_trace_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_trace(is);
}

}  // namespace fpdyn
