#include <doctest.h>

#include <random>

#include "fpdyn/constructions.hpp"
#include "fpdyn/policy.hpp"
#include "fpdyn/validator.hpp"
#include "golden_figures.hpp"
#include "test_util.hpp"

using namespace fpdyn;
using testutil::replay_identity;
using testutil::steps_1based;

namespace {

Trace identity_trace(int n, std::vector<Step> steps) {
  Trace tr;
  tr.header.matrix = MatrixDescriptor::identity(n);
  tr.header.policy_name = "scripted";
  tr.steps = std::move(steps);
  return tr;
}

std::vector<int> random_permutation(int n, std::mt19937_64& gen) {
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (int k = n - 1; k > 0; --k) std::swap(sigma[k], sigma[gen() % (k + 1)]);
  return sigma;
}

}  // namespace

TEST_SUITE("validator") {

TEST_CASE("the 30-step reference schedule validates cleanly") {
  const auto a = PayoffMatrix<std::int64_t>::identity(2);
  const ValidationReport rep = validate_trace(a, identity_trace(2, steps_1based(golden::fig1_steps())));
  CHECK(rep.ok);
  CHECK(rep.steps_checked == 30);
  CHECK_FALSE(rep.first_violation.has_value());
  CHECK(rep.structural_checks.at("sum_U_equals_t"));
  CHECK(rep.structural_checks.at("V_matches_col_counts"));
}

TEST_CASE("a corrupted step is pinpointed") {
  auto steps = steps_1based(golden::fig1_steps());
  steps[3] = Step{0, 0};  // step 4 altered to (row 1, col 1); V(3) = [0,3] forces row 2
  const auto a = PayoffMatrix<std::int64_t>::identity(2);
  const ValidationReport rep = validate_trace(a, identity_trace(2, std::move(steps)));
  CHECK_FALSE(rep.ok);
  CHECK(rep.steps_checked == 3);
  REQUIRE(rep.first_violation.has_value());
  CHECK(rep.first_violation->t == 3);  // pre-step state; reported as step 4
  CHECK(rep.first_violation->side == ViolationSide::Row);
  CHECK(rep.first_violation->index == 0);
  CHECK(rep.first_violation->tie_set == std::vector<int>{1});
  CHECK(rep.to_json().find("\"t\": 4") != std::string::npos);
}

TEST_CASE("an empty trace is vacuously valid") {
  const auto a = PayoffMatrix<std::int64_t>::identity(3);
  const ValidationReport rep = validate_trace(a, identity_trace(3, {}));
  CHECK(rep.ok);
  CHECK(rep.steps_checked == 0);
}

TEST_CASE("mismatched header and matrix is an error") {
  const auto a = PayoffMatrix<std::int64_t>::identity(3);
  CHECK_THROWS_AS(validate_trace(a, identity_trace(2, {})), std::invalid_argument);
}

TEST_CASE("structural checks only apply to identity games") {
  const PayoffMatrix<Rational> a(2, 2, {Rational(1), Rational(0), Rational(0), Rational(2)});
  Trace tr;
  tr.header.matrix = descriptor_from_matrix(a);
  tr.steps = {Step{0, 0}};
  const ValidationReport rep = validate_trace(a, tr);
  CHECK(rep.ok);
  CHECK(rep.structural_checks.empty());
}

TEST_CASE("permute_trace: identity permutation is a no-op") {
  const Trace tr = identity_trace(2, steps_1based(golden::fig2_left_steps()));
  const Trace same = permute_trace(tr, {0, 1});
  CHECK(same.steps == tr.steps);
}

TEST_CASE("permute_trace: swapping the 2x2 padding flips terminal V") {
  const Trace tr = identity_trace(2, steps_1based(golden::fig2_left_steps()));
  const Trace swapped = permute_trace(tr, {1, 0});
  const auto a = PayoffMatrix<std::int64_t>::identity(2);
  CHECK(validate_trace(a, swapped).ok);
  const auto st = replay_identity(2, swapped.steps);
  CHECK(st.V == testutil::make_vec({2, 4}));
}

TEST_CASE("permute_trace: a 3-cycle keeps the main dynamic valid") {
  const MainDynamic md = main_dynamic(3, 5);
  const Trace tr = to_trace(md.schedule);
  const Trace rotated = permute_trace(tr, {1, 2, 0});
  CHECK(validate_trace(PayoffMatrix<std::int64_t>::identity(3), rotated).ok);
}

TEST_CASE("permute_trace input checking") {
  const Trace tr = identity_trace(3, {});
  CHECK_THROWS_AS(permute_trace(tr, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(permute_trace(tr, {0, 1, 1}), std::invalid_argument);
  Trace inline_tr;
  inline_tr.header.matrix = MatrixDescriptor::make_inline(2, 2, {Rational(1), Rational(0), Rational(0), Rational(1)});
  CHECK_THROWS_AS(permute_trace(inline_tr, {0, 1}), std::invalid_argument);
}

TEST_CASE("every engine run validates, for every policy") {
  const auto a = PayoffMatrix<std::int64_t>::identity(3);
  for (const PolicyKind kind :
       {PolicyKind::Lexicographic, PolicyKind::SeededRandom, PolicyKind::GreedyGap}) {
    PolicySpec spec;
    spec.kind = kind;
    spec.seed = 11;
    auto policy = make_policy<std::int64_t>(spec);
    for (const std::int64_t steps : {0, 1, 17, 250}) {
      const auto rr = run(a, *policy, steps);
      const ValidationReport rep = validate_trace(a, rr.trace);
      CHECK(rep.ok);
      CHECK(rep.steps_checked == steps);
    }
  }
}

TEST_CASE("permutation closure over random prefixes of constructed schedules") {
  std::mt19937_64 gen(33);
  const Schedule sources[] = {main_i2(5), main_dynamic(3, 6).schedule, padding_identity(4, 6)};
  for (int rep = 0; rep < 100; ++rep) {
    const Schedule& src = sources[gen() % 3];
    const int n = src.n;
    Trace tr = identity_trace(n, src.steps);
    tr.steps.resize(gen() % (src.steps.size() + 1));
    const Trace permuted = permute_trace(tr, random_permutation(n, gen));
    CHECK(validate_trace(PayoffMatrix<std::int64_t>::identity(n), permuted).ok);
  }
}

TEST_CASE("fault injection: a single corrupted step is detected at its index") {
  std::mt19937_64 gen(99);
  const Schedule src = main_i2(4);
  const auto a = PayoffMatrix<std::int64_t>::identity(2);
  int injected = 0;
  while (injected < 50) {
    const std::size_t pos = gen() % src.steps.size();
    // find a corruption that the tie sets genuinely forbid
    const auto st = replay_identity(2, src.steps, static_cast<std::int64_t>(pos));
    const TieSets ties = best_response_sets(st, a);
    Step corrupted = src.steps[pos];
    bool found = false;
    if (ties.rows.size() < 2) {
      corrupted.i = 1 - ties.rows[0];
      found = true;
    } else if (ties.cols.size() < 2) {
      corrupted.j = 1 - ties.cols[0];
      found = true;
    }
    if (!found) continue;  // full tie, nothing to corrupt here
    ++injected;
    Trace tr = identity_trace(2, src.steps);
    tr.steps[pos] = corrupted;
    const ValidationReport rep = validate_trace(a, tr);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.first_violation.has_value());
    CHECK(rep.first_violation->t == static_cast<std::int64_t>(pos));
    CHECK(rep.steps_checked == static_cast<std::int64_t>(pos));
  }
}

TEST_CASE("report serialization") {
  const auto a = PayoffMatrix<std::int64_t>::identity(2);
  ValidationReport rep = validate_trace(a, identity_trace(2, steps_1based(golden::fig2_left_steps())));
  const std::string text = rep.summary();
  CHECK(text.find("ok: true") != std::string::npos);
  CHECK(text.find("steps_checked: 6") != std::string::npos);
  const std::string json = rep.to_json();
  CHECK(json.find("\"ok\": true") != std::string::npos);
  CHECK(json.find("\"stepsChecked\": 6") != std::string::npos);
  CHECK(json.find("\"firstViolation\": null") != std::string::npos);
}

TEST_CASE("validation also runs on the arbitrary-precision and rational lanes") {
  const Trace tr = identity_trace(2, steps_1based(golden::fig1_steps()));
  CHECK(validate_trace(PayoffMatrix<BigInt>::identity(2), tr).ok);
  CHECK(validate_trace(PayoffMatrix<Rational>::identity(2), tr).ok);
}

}  // TEST_SUITE
