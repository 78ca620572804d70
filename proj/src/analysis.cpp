#include "fpdyn/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fpdyn {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExponentFit fit_exponent(const GapSeries& series, std::int64_t t_min, std::int64_t t_max) {
  std::vector<double> xs, ys;
  for (const GapSample& s : series.samples) {
    if (s.t < t_min || s.t > t_max) continue;
    if (!(s.normalized > 0.0)) continue;
    xs.push_back(std::log(static_cast<double>(s.t)));
    ys.push_back(std::log(s.normalized));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3) throw std::invalid_argument("exponent fit needs at least 3 positive samples in range");

  double sx = 0, sy = 0;
  for (int k = 0; k < n; ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("exponent fit needs distinct t values");

  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (int k = 0; k < n; ++k) {
    const double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
    ss_res += r * r;
  }
  fit.stderr_slope = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.sample_count = n;
  return fit;
}

std::string format_fit(const ExponentFit& fit) {
  std::string out;
  out += "slope=" + fmt_double(fit.slope) + "\n";
  out += "intercept=" + fmt_double(fit.intercept) + "\n";
  out += "stderr=" + fmt_double(fit.stderr_slope) + "\n";
  out += "t_min=" + std::to_string(fit.t_min) + "\n";
  out += "t_max=" + std::to_string(fit.t_max) + "\n";
  out += "samples=" + std::to_string(fit.sample_count) + "\n";
  return out;
}

RateEnvelope rate_envelope(int n, const GapSeries& series) {
  if (n < 2) throw std::invalid_argument("rate envelope needs n >= 2");
  if (series.samples.empty()) throw std::invalid_argument("rate envelope needs a nonempty series");
  const double expo = static_cast<double>(n - 1) / static_cast<double>(n);
  RateEnvelope env;
  env.c_low = std::numeric_limits<double>::infinity();
  env.c_high = 0.0;
  bool any = false;
  for (const GapSample& s : series.samples) {
    if (s.t < n) continue;
    const double g = to_double(s.gap);
    if (g <= 0.0) {
      ++env.excluded_zero;
      continue;
    }
    const double c = g / std::pow(static_cast<double>(s.t), expo);
    env.c_low = std::min(env.c_low, c);
    env.c_high = std::max(env.c_high, c);
    any = true;
  }
  if (!any) throw std::invalid_argument("rate envelope found no usable samples with t >= n");
  return env;
}

bool robinson_sanity(const GapSeries& series) {
  if (series.samples.empty()) throw std::invalid_argument("robinson check needs a nonempty series");
  const std::int64_t t_first = series.samples.front().t;
  const std::int64_t t_last = series.samples.back().t;
  if (t_first < 1 || t_last < 100 * t_first)
    throw std::invalid_argument("robinson check needs a series spanning at least two decades");
  const double lo_target = std::log(static_cast<double>(t_first)) + 0.5 * std::log(10.0);
  const double hi_target = std::log(static_cast<double>(t_last)) - 0.5 * std::log(10.0);
  const auto nearest = [&](double target) -> const GapSample& {
    const GapSample* best = &series.samples.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const GapSample& s : series.samples) {
      const double d = std::abs(std::log(static_cast<double>(s.t)) - target);
      if (d < best_d) {
        best_d = d;
        best = &s;
      }
    }
    return *best;
  };
  return nearest(hi_target).normalized < nearest(lo_target).normalized;
}

void write_gap_csv(std::ostream& os, const GapSeries& series) {
  os << "t,gap_num,gap_den,normalized_gap_float\n";
  for (const GapSample& s : series.samples) {
    os << s.t << ',' << boost::multiprecision::numerator(s.gap).str() << ','
       << boost::multiprecision::denominator(s.gap).str() << ',' << fmt_double(s.normalized) << '\n';
  }
}

GapSeries read_gap_csv(std::istream& is) {
  GapSeries out;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty CSV");
  if (line != "t,gap_num,gap_den,normalized_gap_float")
    throw std::runtime_error("unexpected CSV header '" + line + "'");
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string t_s, num_s, den_s, norm_s;
    if (!std::getline(ss, t_s, ',') || !std::getline(ss, num_s, ',') || !std::getline(ss, den_s, ',') ||
        !std::getline(ss, norm_s))
      throw std::runtime_error("line " + std::to_string(lineno) + ": malformed CSV row");
    GapSample sample;
    try {
      sample.t = std::stoll(t_s);
      sample.gap = Rational(BigInt(num_s), BigInt(den_s));
      sample.normalized = std::stod(norm_s);
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": malformed CSV value");
    }
    out.samples.push_back(std::move(sample));
  }
  return out;
}

void write_gap_csv_file(const std::string& path, const GapSeries& series) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_gap_csv(os, series);
}

GapSeries read_gap_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_gap_csv(is);
}

}  // namespace fpdyn
