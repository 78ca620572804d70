#include "fpdyn/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "fpdyn/scalars.hpp"

namespace fpdyn {

namespace {

// Appends steps for the n-by-n identity game while checking each one
// against the best-response conditions on its own replayed state. Any
// transcription bug in a generator throws here instead of producing an
// invalid schedule.
class Recorder {
 public:
  explicit Recorder(int n) : u_(VecI64::Zero(n)), v_(VecI64::Zero(n)) { sched_.n = n; }

  void append(int i, int j) {
    if (v_[i] != v_.maxCoeff())
      throw std::logic_error("generator bug: row choice " + std::to_string(i + 1) +
                             " not a best response at t=" + std::to_string(t()));
    if (u_[j] != u_.minCoeff())
      throw std::logic_error("generator bug: column choice " + std::to_string(j + 1) +
                             " not a best response at t=" + std::to_string(t()));
    ++u_[i];
    ++v_[j];
    sched_.steps.push_back(Step{i, j});
  }

  std::int64_t t() const { return static_cast<std::int64_t>(sched_.steps.size()); }
  const VecI64& U() const { return u_; }
  const VecI64& V() const { return v_; }
  Schedule& schedule() { return sched_; }
  const Schedule& schedule() const { return sched_; }
  Schedule take() { return std::move(sched_); }

 private:
  VecI64 u_, v_;
  Schedule sched_;
};

// Largest k >= 1 with k(2k-1) <= T, for T >= 1.
std::int64_t largest_k_i2(std::int64_t T) {
  auto k = static_cast<std::int64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(T))) / 4.0);
  while (k * (2 * k - 1) > T) --k;
  while ((k + 1) * (2 * (k + 1) - 1) <= T) ++k;
  if (k < 1) throw std::logic_error("largest_k_i2 requires T >= 1");
  return k;
}

// Arithmetic-only epoch series, cached per dimension within one call tree.
using Series = std::vector<std::pair<std::int64_t, std::int64_t>>;  // (T_i, G_i)

struct SeriesCache {
  std::map<int, Series> by_dim;
};

std::int64_t cached_part2_gap(int n, std::int64_t T, SeriesCache& cache) {
  if (T < 1) throw std::invalid_argument("part2 gap needs T >= 1");
  if (n == 2) return 2 * largest_k_i2(T) - 1;
  Series& s = cache.by_dim[n];
  if (s.empty()) s.push_back({1, 1});
  while (s.back().first <= T) {
    const auto [Tk, Gk] = s.back();
    s.push_back({Tk + n * Gk, Gk + cached_part2_gap(n - 1, n * Gk, cache)});
  }
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    if (it->first <= T) return it->second;
  throw std::logic_error("epoch series does not cover T");
}

// tau translating a block's base coordinates into physical ones: the base
// pattern's min/max positions go to the live argmin/argmax of v (unique by
// construction), remaining base coordinates map to the remaining physical
// ones in ascending order.
std::vector<int> pattern_relabel(const VecI64& v, int base_min, int base_max) {
  const int n = static_cast<int>(v.size());
  int pmin = 0, pmax = 0;
  v.minCoeff(&pmin);
  v.maxCoeff(&pmax);
  for (int k = 0; k < n; ++k)
    if ((v[k] == v[pmin] && k != pmin) || (v[k] == v[pmax] && k != pmax))
      throw std::logic_error("generator bug: padding pattern lost uniqueness of min/max");
  std::vector<int> tau(n, -1);
  tau[base_min] = pmin;
  tau[base_max] = pmax;
  int next = 0;
  for (int c = 0; c < n; ++c) {
    if (c == base_min || c == base_max) continue;
    while (next == pmin || next == pmax) ++next;
    tau[c] = next++;
  }
  return tau;
}

// One period of the odd-k padding pattern: advances U from [k,...,k] with
// V = {k-1 at base 0, k+1 at base n-1, k elsewhere} to the same shape two
// levels up, ending with max at base n-3 and min at base n-1.
void emit_top_block(Recorder& rec) {
  const int n = static_cast<int>(rec.V().size());
  const std::vector<int> tau = pattern_relabel(rec.V(), 0, n - 1);
  const auto put = [&](int i, int j) { rec.append(tau[i], tau[j]); };
  put(n - 1, 0);
  put(n - 1, 0);
  for (int s = 0; s <= n - 3; ++s) put(s, s + 1);
  put(n - 2, n - 2);
  put(n - 2, 0);
  for (int s = 0; s <= n - 4; ++s) put(s, s + 1);
  put(n - 3, n - 3);
}

// One period of the even-k padding pattern (needs n >= 4): starts with max
// at base n-2 and min at base 0, ends with max at base n-4 and min at n-2.
void emit_bottom_block(Recorder& rec) {
  const int n = static_cast<int>(rec.V().size());
  const std::vector<int> tau = pattern_relabel(rec.V(), 0, n - 2);
  const auto put = [&](int i, int j) { rec.append(tau[i], tau[j]); };
  put(n - 2, 0);
  put(n - 2, n - 1);
  put(n - 1, 0);
  for (int s = 0; s <= n - 4; ++s) put(s, s + 1);
  put(n - 3, n - 3);
  put(n - 3, n - 1);
  put(n - 1, 0);
  for (int s = 0; s <= n - 5; ++s) put(s, s + 1);
  put(n - 4, n - 4);
}

void check_padding_args(int n, std::int64_t k) {
  if (n < 3) throw std::invalid_argument("identity padding needs n >= 3");
  if (k < 1) throw std::invalid_argument("identity padding needs k >= 1");
}

// Builds the main dynamic for I_n epoch by epoch, holding the live state so
// callers can extend it incrementally. Owns a lower-dimensional builder for
// the embedded part-2 dynamics when n >= 4.
class MainBuilder {
 public:
  explicit MainBuilder(int n) : n_(n), rec_(n) {
    if (n < 3) throw std::invalid_argument("main dynamic needs n >= 3");
    const Schedule pad = padding_identity(n, 1);
    for (const Step& s : pad.steps) rec_.append(s.i, s.j);
    push_epoch_record();
  }

  void ensure_epochs(int count) {
    while (static_cast<int>(epochs_.size()) < count) advance();
  }

  // Grows until the series brackets T, then returns the last epoch record
  // with T_k <= T.
  const EpochRecord& epoch_covering(std::int64_t T) {
    while (epochs_.back().T <= T) advance();
    for (auto it = epochs_.rbegin(); it != epochs_.rend(); ++it)
      if (it->T <= T) return *it;
    throw std::logic_error("epoch series does not cover T");
  }

  const Schedule& schedule() const { return rec_.schedule(); }
  const std::vector<EpochRecord>& epochs() const { return epochs_; }

  MainDynamic take(int count) {
    epochs_.resize(count);
    return MainDynamic{rec_.take(), std::move(epochs_)};
  }

 private:
  void push_epoch_record() {
    const VecI64& u = rec_.U();
    const VecI64& v = rec_.V();
    if (u.minCoeff() != u.maxCoeff())
      throw std::logic_error("generator bug: U not flat at an epoch start");
    EpochRecord r;
    r.index = static_cast<int>(epochs_.size()) + 1;
    r.P = u[0];
    r.T = r.P;
    r.sigma.resize(n_);
    std::iota(r.sigma.begin(), r.sigma.end(), 0);
    std::stable_sort(r.sigma.begin(), r.sigma.end(), [&](int a, int b) { return v[a] < v[b]; });
    r.Q.resize(n_);
    for (int c = 0; c < n_; ++c) r.Q[c] = v[r.sigma[c]];
    r.G = r.Q.back() - r.P;
    r.R = n_ * r.G;
    if (std::accumulate(r.Q.begin(), r.Q.end(), std::int64_t{0}) != n_ * r.P)
      throw std::logic_error("generator bug: sum(Q) != n*P at an epoch start");
    rec_.schedule().epoch_marks.push_back(EpochMark{rec_.t(), r.index, r.T, r.G});
    epochs_.push_back(std::move(r));
  }

  void advance() {
    const std::size_t ei = epochs_.size() - 1;
    const std::vector<int> sigma = epochs_[ei].sigma;
    const std::vector<std::int64_t> Q = epochs_[ei].Q;
    const std::int64_t q_top = Q.back();
    const std::int64_t R = epochs_[ei].R;

    // Phase A: grow the top canonical component of U by R while the column
    // player levels V at q_top, lowest canonical coordinate first.
    rec_.schedule().phase_marks.push_back(PhaseMark{rec_.t(), 'A'});
    for (int c = 0; c < n_; ++c)
      for (std::int64_t r = 0; r < q_top - Q[c]; ++r) rec_.append(sigma[n_ - 1], sigma[c]);

    // Phase B: embed a part-2 dynamic for dimension n-1 into the canonical
    // coordinates 0..n-2; the top coordinate stays put.
    rec_.schedule().phase_marks.push_back(PhaseMark{rec_.t(), 'B'});
    emit_part2_sub(R, [&](int i, int j) { rec_.append(sigma[i], sigma[j]); });

    epochs_[ei].S.resize(n_ - 1);
    for (int c = 0; c + 1 < n_; ++c) epochs_[ei].S[c] = rec_.V()[sigma[c]] - q_top;
    push_epoch_record();
  }

  template <class Sink>
  void emit_part2_sub(std::int64_t T, Sink&& sink) {
    const int m = n_ - 1;
    if (m == 2) {
      const std::int64_t k = largest_k_i2(T);
      const std::int64_t l = T - k * (2 * k - 1) + 1;
      for (const Step& s : padding_i2(l, PadOrientation::V1Low).steps) sink(s.i, s.j);
      const Schedule mi2 = main_i2(k);
      for (std::size_t p = 2; p < mi2.steps.size(); ++p) sink(mi2.steps[p].i, mi2.steps[p].j);
      return;
    }
    if (!sub_) sub_ = std::make_unique<MainBuilder>(m);
    const EpochRecord& cover = sub_->epoch_covering(T);
    const std::int64_t l = T - cover.T + 1;
    for (const Step& s : padding_identity(m, l).steps) sink(s.i, s.j);
    const auto& steps = sub_->schedule().steps;
    for (std::int64_t p = m; p < m * cover.T; ++p) sink(steps[p].i, steps[p].j);
  }

  int n_;
  Recorder rec_;
  std::vector<EpochRecord> epochs_;
  std::unique_ptr<MainBuilder> sub_;
};

}  // namespace

Schedule padding_i2(std::int64_t k, PadOrientation orientation) {
  if (k < 1) throw std::invalid_argument("padding_i2 needs k >= 1");
  Recorder rec(2);
  std::int64_t cur = 0;
  if (k % 2 == 1) {
    rec.append(0, 1);
    rec.append(1, 1);
    cur = 1;
  } else {
    rec.append(0, 0);
    rec.append(0, 1);
    rec.append(1, 1);
    rec.append(1, 1);
    cur = 2;
  }
  while (cur < k) {
    // From U = [c, c], V = {c-1, c+1}: two steps feeding the low side of V,
    // then two on the low side's diagonal, landing two levels up swapped.
    const int a = rec.V()[0] > rec.V()[1] ? 0 : 1;
    const int b = 1 - a;
    rec.append(a, b);
    rec.append(a, b);
    rec.append(b, b);
    rec.append(b, b);
    cur += 2;
  }
  const bool natural_low = rec.V()[0] < rec.V()[1];
  const bool want_low = orientation == PadOrientation::V1Low;
  Schedule s = rec.take();
  if (natural_low != want_low)
    for (Step& st : s.steps) {
      st.i ^= 1;
      st.j ^= 1;
    }
  return s;
}

Schedule main_i2(std::int64_t target_k) {
  if (target_k < 1) throw std::invalid_argument("main_i2 needs target_k >= 1");
  Recorder rec(2);
  rec.append(0, 1);
  rec.append(1, 1);
  rec.schedule().epoch_marks.push_back(EpochMark{2, 1, 1, 1});
  for (std::int64_t k = 1; k < target_k; ++k) {
    const int hi = rec.V()[0] > rec.V()[1] ? 0 : 1;
    const int lo = 1 - hi;
    rec.append(hi, hi);
    for (std::int64_t s = 0; s < 4 * k; ++s) rec.append(hi, lo);
    for (std::int64_t s = 0; s < 4 * k + 1; ++s) rec.append(lo, lo);
    rec.schedule().epoch_marks.push_back(
        EpochMark{2 * (k + 1) * (2 * k + 1), k + 1, (k + 1) * (2 * k + 1), 2 * k + 1});
  }
  return rec.take();
}

Schedule padding_identity_figure(int n, std::int64_t k) {
  check_padding_args(n, k);
  Recorder rec(n);
  std::int64_t cur = 0;
  if (k % 2 == 1) {
    for (int s = 0; s <= n - 2; ++s) rec.append(s, s + 1);
    rec.append(n - 1, n - 1);
    cur = 1;
  } else {
    rec.append(0, 0);
    rec.append(0, 1);
    for (int s = 1; s <= n - 2; ++s) rec.append(s, s + 1);
    rec.append(n - 1, n - 1);
    rec.append(n - 1, 1);
    for (int s = 1; s <= n - 3; ++s) rec.append(s, s + 1);
    rec.append(n - 2, n - 2);
    cur = 2;
  }
  while (cur < k) {
    // The even-k period assumes a fourth coordinate; with n = 3 the odd-k
    // period is used instead (any certified period with the right terminal
    // pattern extends the dynamic, by the common-permutation property).
    if (k % 2 == 0 && n >= 4)
      emit_bottom_block(rec);
    else
      emit_top_block(rec);
    cur += 2;
  }
  return rec.take();
}

Schedule padding_identity(int n, std::int64_t k) {
  check_padding_args(n, k);
  const Schedule fig = padding_identity_figure(n, k);
  VecI64 v = VecI64::Zero(n);
  for (const Step& s : fig.steps) ++v[s.j];
  int pmin = 0, pmax = 0;
  v.minCoeff(&pmin);
  v.maxCoeff(&pmax);
  std::vector<int> sigma(n, -1);  // physical -> canonical
  sigma[pmin] = 0;
  sigma[pmax] = n - 1;
  int next = 1;
  for (int p = 0; p < n; ++p)
    if (p != pmin && p != pmax) sigma[p] = next++;
  Recorder rec(n);
  for (const Step& s : fig.steps) rec.append(sigma[s.i], sigma[s.j]);
  return rec.take();
}

std::int64_t part2_gap(int n, std::int64_t T) {
  if (n < 2) throw std::invalid_argument("part2 needs n >= 2");
  SeriesCache cache;
  return cached_part2_gap(n, T, cache);
}

Schedule part2(int n, std::int64_t T) {
  if (n < 2) throw std::invalid_argument("part2 needs n >= 2");
  if (T < 1) throw std::invalid_argument("part2 needs T >= 1");
  Recorder rec(n);
  const auto play = [&](const Schedule& s, std::int64_t from, std::int64_t to) {
    for (std::int64_t p = from; p < to; ++p) rec.append(s.steps[p].i, s.steps[p].j);
  };
  if (n == 2) {
    const std::int64_t k = largest_k_i2(T);
    const std::int64_t l = T - k * (2 * k - 1) + 1;
    const Schedule pad = padding_i2(l, PadOrientation::V1Low);
    play(pad, 0, static_cast<std::int64_t>(pad.steps.size()));
    const Schedule mi2 = main_i2(k);
    play(mi2, 2, static_cast<std::int64_t>(mi2.steps.size()));
    return rec.take();
  }
  MainBuilder builder(n);
  const EpochRecord cover = builder.epoch_covering(T);
  const std::int64_t l = T - cover.T + 1;
  const Schedule pad = padding_identity(n, l);
  play(pad, 0, static_cast<std::int64_t>(pad.steps.size()));
  play(builder.schedule(), n, n * cover.T);
  return rec.take();
}

MainDynamic main_dynamic(int n, int epochs) {
  if (epochs < 1) throw std::invalid_argument("main dynamic needs epochs >= 1");
  MainBuilder builder(n);
  builder.ensure_epochs(epochs);
  return builder.take(epochs);
}

std::vector<std::pair<std::int64_t, std::int64_t>> epoch_series(int n, int count) {
  if (n < 3) throw std::invalid_argument("epoch series needs n >= 3");
  if (count < 1) throw std::invalid_argument("epoch series needs count >= 1");
  SeriesCache cache;
  Series& s = cache.by_dim[n];
  s.push_back({1, 1});
  while (static_cast<int>(s.size()) < count) {
    const auto [Tk, Gk] = s.back();
    s.push_back({Tk + n * Gk, Gk + cached_part2_gap(n - 1, n * Gk, cache)});
  }
  s.resize(count);
  return s;
}

int main_epochs_reaching(int n, std::int64_t min_steps) {
  if (n < 3) throw std::invalid_argument("main dynamic needs n >= 3");
  SeriesCache cache;
  Series& s = cache.by_dim[n];
  s.push_back({1, 1});
  while (n * s.back().first < min_steps) {
    const auto [Tk, Gk] = s.back();
    s.push_back({Tk + n * Gk, Gk + cached_part2_gap(n - 1, n * Gk, cache)});
  }
  return static_cast<int>(s.size());
}

}  // namespace fpdyn
