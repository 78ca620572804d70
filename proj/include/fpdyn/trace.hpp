#pragma once

// Line-oriented trace files.
//
//   fpdyn v1 m=<m> n=<n> matrix=<identity:n|inline> policy=<name> seed=<u64|none>
//   <t> <i> <j>          one line per step, t starting at 1, indices 1-based
//
// Inline matrices append ` entries=<m*n rationals, row-major, '/'-separated
// fractions, comma-delimited>` to the header. Comment lines start with `#`
// and are ignored by replay; the generators use them to mark epoch starts
// and phase boundaries. In memory all indices are 0-based; the 1-based
// convention exists only on the wire.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpdyn/payoff_matrix.hpp"
#include "fpdyn/scalars.hpp"

namespace fpdyn {

struct Step {
  std::int32_t i = 0;  // row player's choice
  std::int32_t j = 0;  // column player's choice
  friend bool operator==(const Step&, const Step&) = default;
};

enum class PolicyKind { Lexicographic, SeededRandom, GreedyGap, Scripted };

inline std::string policy_kind_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::Lexicographic: return "lexicographic";
    case PolicyKind::SeededRandom: return "seededRandom";
    case PolicyKind::GreedyGap: return "greedyGap";
    case PolicyKind::Scripted: return "scripted";
  }
  return "unknown";
}

inline std::optional<PolicyKind> policy_kind_from_name(const std::string& name) {
  if (name == "lexicographic") return PolicyKind::Lexicographic;
  if (name == "seededRandom") return PolicyKind::SeededRandom;
  if (name == "greedyGap") return PolicyKind::GreedyGap;
  if (name == "scripted") return PolicyKind::Scripted;
  return std::nullopt;
}

struct MatrixDescriptor {
  enum class Kind { Identity, Inline };
  Kind kind = Kind::Identity;
  int m = 0;
  int n = 0;
  std::vector<Rational> entries;  // row-major, Inline only

  static MatrixDescriptor identity(int n);
  static MatrixDescriptor make_inline(int m, int n, std::vector<Rational> entries);
  friend bool operator==(const MatrixDescriptor&, const MatrixDescriptor&) = default;
};

template <class Scalar>
PayoffMatrix<Scalar> matrix_from_descriptor(const MatrixDescriptor& d);

template <class Scalar>
MatrixDescriptor descriptor_from_matrix(const PayoffMatrix<Scalar>& a) {
  if (a.is_identity()) return MatrixDescriptor::identity(a.cols());
  std::vector<Rational> entries;
  entries.reserve(static_cast<std::size_t>(a.rows()) * a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) entries.push_back(to_rational(a.at(i, j)));
  return MatrixDescriptor::make_inline(a.rows(), a.cols(), std::move(entries));
}

struct TraceHeader {
  MatrixDescriptor matrix;
  std::string policy_name = "scripted";
  std::optional<std::uint64_t> seed;
  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct EpochMark {
  std::int64_t t = 0;
  std::int64_t index = 0;
  std::int64_t T = 0;
  std::int64_t G = 0;
  friend bool operator==(const EpochMark&, const EpochMark&) = default;
};

struct PhaseMark {
  std::int64_t t = 0;
  char phase = 'A';
  friend bool operator==(const PhaseMark&, const PhaseMark&) = default;
};

struct Trace {
  TraceHeader header;
  std::vector<Step> steps;
  std::vector<EpochMark> epoch_marks;  // sorted by t
  std::vector<PhaseMark> phase_marks;  // sorted by t
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

std::string format_header(const TraceHeader& h);
TraceHeader parse_header(const std::string& line);

void write_trace(std::ostream& os, const Trace& trace);
Trace read_trace(std::istream& is);
void write_trace_file(const std::string& path, const Trace& trace);
Trace read_trace_file(const std::string& path);

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

// ---- implementation of the small templates ----

template <class Scalar>
PayoffMatrix<Scalar> matrix_from_descriptor(const MatrixDescriptor& d) {
  if (d.kind == MatrixDescriptor::Kind::Identity) return PayoffMatrix<Scalar>::identity(d.n);
  std::vector<Scalar> entries;
  entries.reserve(d.entries.size());
  for (const Rational& r : d.entries) {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      entries.push_back(r);
    } else if constexpr (std::is_floating_point_v<Scalar>) {
      entries.push_back(static_cast<Scalar>(to_double(r)));
    } else {
      if (boost::multiprecision::denominator(r) != 1)
        throw std::invalid_argument("matrix entry is not an integer; use the rational scalar");
      BigInt num = boost::multiprecision::numerator(r);
      if constexpr (std::is_same_v<Scalar, BigInt>) {
        entries.push_back(num);
      } else {
        entries.push_back(num.template convert_to<Scalar>());
      }
    }
  }
  return PayoffMatrix<Scalar>(d.m, d.n, std::move(entries));
}

}  // namespace fpdyn
