#pragma once

// Convergence measurement: gap series over a replayed trace, log-log
// exponent fits, the all-t envelope gap(t)/t^((n-1)/n), and a weak
// monotone-trend check against the classical upper bound. The gap values
// stay exact rationals; fitting is the only inexact stage.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fpdyn/engine.hpp"
#include "fpdyn/trace.hpp"

namespace fpdyn {

struct GapSample {
  std::int64_t t = 0;
  Rational gap;             // max V(t) - min U(t), exact
  double normalized = 0.0;  // gap / t
};

struct GapSeries {
  std::vector<GapSample> samples;
};

struct SamplePlan {
  enum class At { EveryStep, EpochStarts, GeometricGrid };
  At at = At::GeometricGrid;
  double ratio = 1.1;  // GeometricGrid only

  static SamplePlan every_step() { return SamplePlan{At::EveryStep, 0.0}; }
  static SamplePlan epoch_starts() { return SamplePlan{At::EpochStarts, 0.0}; }
  static SamplePlan geometric(double ratio) { return SamplePlan{At::GeometricGrid, ratio}; }
};

/// Replay a trace and sample the gap. EveryStep samples all t >= 1,
/// EpochStarts samples at the trace's epoch marks, GeometricGrid samples
/// t = 1 and then the first t past each multiple of `ratio` (the final step
/// is always included). The trace is assumed valid; use the validator first
/// if it is untrusted.
template <class Scalar>
GapSeries gap_series(const PayoffMatrix<Scalar>& a, const Trace& trace, const SamplePlan& plan) {
  if (plan.at == SamplePlan::At::GeometricGrid && plan.ratio <= 1.0)
    throw std::invalid_argument("geometric grid needs ratio > 1");
  GapSeries out;
  DynamicState<Scalar> st = DynamicState<Scalar>::zero(a);
  std::size_t next_epoch = 0;
  std::int64_t next_grid = 1;
  const std::int64_t total = static_cast<std::int64_t>(trace.steps.size());
  for (std::int64_t t = 1; t <= total; ++t) {
    detail::apply_step(st, a, trace.steps[t - 1].i, trace.steps[t - 1].j);
    bool take = false;
    switch (plan.at) {
      case SamplePlan::At::EveryStep:
        take = true;
        break;
      case SamplePlan::At::EpochStarts:
        while (next_epoch < trace.epoch_marks.size() && trace.epoch_marks[next_epoch].t < t) ++next_epoch;
        take = next_epoch < trace.epoch_marks.size() && trace.epoch_marks[next_epoch].t == t;
        break;
      case SamplePlan::At::GeometricGrid:
        take = t >= next_grid || t == total;
        if (t >= next_grid) {
          next_grid = std::max<std::int64_t>(t + 1, static_cast<std::int64_t>(static_cast<double>(t) * plan.ratio));
        }
        break;
    }
    if (take) {
      const Rational g = to_rational(gap(st));
      out.samples.push_back(GapSample{t, g, to_double(g) / static_cast<double>(t)});
    }
  }
  return out;
}

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::int64_t t_min = 0;
  std::int64_t t_max = 0;
  int sample_count = 0;
};

/// Least squares on (log t, log normalized_gap) over samples in
/// [t_min, t_max] with positive gap. Needs at least 3 usable samples.
ExponentFit fit_exponent(const GapSeries& series, std::int64_t t_min, std::int64_t t_max);

std::string format_fit(const ExponentFit& fit);  // key=value lines

struct RateEnvelope {
  double c_low = 0.0;
  double c_high = 0.0;
  int excluded_zero = 0;  // zero-gap samples excluded from the envelope
};

/// min and max of gap(t) / t^((n-1)/n) over samples with t >= n; zero-gap
/// samples are excluded and counted.
RateEnvelope rate_envelope(int n, const GapSeries& series);

/// Weak decay check: the series must span at least two decades in t; true
/// iff the normalized gap at the last decade's geometric mean is below the
/// one at the first decade's geometric mean.
bool robinson_sanity(const GapSeries& series);

void write_gap_csv(std::ostream& os, const GapSeries& series);
GapSeries read_gap_csv(std::istream& is);
void write_gap_csv_file(const std::string& path, const GapSeries& series);
GapSeries read_gap_csv_file(const std::string& path);

}  // namespace fpdyn
