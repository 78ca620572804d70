#pragma once

// Exact generators for the slow-convergence schedules on identity games.
//
// The 2x2 generators (padding_i2, main_i2) are closed-form: a short seed
// followed by periodic blocks. For n >= 3 the main dynamic is built epoch
// by epoch: phase A grows one component of U while flattening V, phase B
// embeds a part-2 dynamic of dimension n-1 into the remaining coordinates.
// part2(n, T) splices a padding prefix onto a main-dynamic suffix so that
// U(nT) = [T,...,T] exactly, with every component of U at most T along the
// way (the property the embedding needs).
//
// All generators certify each emitted step against the best-response tie
// sets while generating, so transcription errors surface immediately.

#include <cstdint>
#include <utility>
#include <vector>

#include "fpdyn/schedule.hpp"

namespace fpdyn {

enum class PadOrientation {
  V1Low,   // terminal V = [k-1, k+1]
  V1High,  // terminal V = [k+1, k-1]
};

/// 2k-step padding schedule for the 2x2 identity game ending at
/// U = [k, k], V = [k-1, k+1] (orientation V1Low) or [k+1, k-1] (V1High).
Schedule padding_i2(std::int64_t k, PadOrientation orientation);

/// Main slow schedule for the 2x2 identity game, 2K(2K-1) steps with
/// K = target_k. At every level k <= K the state at t = 2k(2k-1) is
/// U = [k(2k-1), k(2k-1)] and V = {(k-1)(2k-1), (k+1)(2k-1)} with the
/// large side alternating by the parity of k. Levels are marked as epochs.
Schedule main_i2(std::int64_t target_k);

/// nk-step padding schedule for the n-by-n identity game (n >= 3) ending at
/// U = [k,...,k] and V = [k-1, k,...,k, k+1] exactly (a final canonicalizing
/// permutation is applied to the whole schedule).
Schedule padding_identity(int n, std::int64_t k);

/// Same schedule before the canonicalizing permutation: ends with V equal
/// to some permutation of [k-1, k,...,k, k+1]. This is the verbatim
/// transcription of the reference seed-and-period patterns, kept separate
/// so its intermediate states can be checked against the known tables.
Schedule padding_identity_figure(int n, std::int64_t k);

/// nT-step schedule for the n-by-n identity game (n >= 2) ending at
/// U = [T,...,T] with gap part2_gap(n, T); every component of U stays
/// at most T at every intermediate step.
Schedule part2(int n, std::int64_t T);

/// The exact terminal gap of part2(n, T), computed arithmetically:
/// 2k-1 with k the largest integer such that k(2k-1) <= T when n = 2,
/// and G_k with k the largest epoch index such that T_k <= T when n >= 3.
std::int64_t part2_gap(int n, std::int64_t T);

/// Bookkeeping for one epoch of the main dynamic for the n-by-n identity
/// game. Fields describing the transition out of the epoch (R, S) are
/// empty/zero on the final record when the transition was not generated.
/// Invariants: n*P = sum(Q), G = Q.back() - P, R = n*G, sum(S) = (n-1)*R.
struct EpochRecord {
  int index = 0;                  // 1-based epoch number
  std::int64_t T = 0;             // t/n at the epoch start
  std::int64_t G = 0;             // gap at the epoch start
  std::int64_t P = 0;             // common U component at the epoch start (= T)
  std::vector<std::int64_t> Q;    // V at the epoch start, sorted ascending
  std::vector<int> sigma;         // canonical coordinate c -> physical index
  std::int64_t R = 0;             // phase-A step count of the transition
  std::vector<std::int64_t> S;    // embedded sub-dynamic's terminal V, size n-1
};

struct MainDynamic {
  Schedule schedule;
  std::vector<EpochRecord> epochs;
};

/// Main slow schedule for the n-by-n identity game (n >= 3), generated for
/// the requested number of epochs. The schedule ends at the start of the
/// last epoch, t = n * T_epochs.
MainDynamic main_dynamic(int n, int epochs);

/// (T_i, G_i) for i = 1..count from the arithmetic recurrence
///   T_1 = G_1 = 1,  T_{i+1} = T_i + n*G_i,  G_{i+1} = G_i + part2_gap(n-1, n*G_i),
/// with no schedule generation involved. main_dynamic must reproduce these
/// values exactly; the pair of routes cross-validates both.
std::vector<std::pair<std::int64_t, std::int64_t>> epoch_series(int n, int count);

/// Smallest epoch count c such that main_dynamic(n, c) has at least
/// min_steps steps (n * T_c >= min_steps).
int main_epochs_reaching(int n, std::int64_t min_steps);

}  // namespace fpdyn
