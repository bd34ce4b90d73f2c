#pragma once

#include "abelcs/kirby.hpp"
#include "abelcs/reciprocity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace abelcs {

struct SuiteFailure {
  std::string instance;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  long checked = 0;
  std::vector<SuiteFailure> failures;
  std::vector<std::string> notes;
  double seconds = 0;
  bool ok() const { return failures.empty(); }
};

struct FuzzConfig {
  long count = 100;
  long max_dim = 2;
  long entry_bound = 4;
  long det_bound = 8;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// Linear reciprocity on random, possibly degenerate, pairs with one side even; nondegenerate
// pairs also check the quadratic form with a Wu class from a random integer vector.
SuiteReport reciprocity_suite(const FuzzConfig& cfg);

// verify_wu(L x K, wu_class_even(L, K, w)) on random pairs, dims <= max_dim.
SuiteReport wu_suite(const FuzzConfig& cfg);

SuiteReport duality_suite(const FuzzConfig& cfg);

SuiteReport dual_involution_suite(const FuzzConfig& cfg);

// Random (K0 even, L0, ell) with |det L0|^s <= 1e4.
SuiteReport representative_independence_suite(const FuzzConfig& cfg);
SuiteReport route_equivalence_suite(const FuzzConfig& cfg);

// K-form shift invariance is asserted, the C-form result is only recorded in notes.
SuiteReport zero_regularization_suite(const FuzzConfig& cfg);

// Random states with nonzero value where possible: dims <= 3, entries <= 3, group order <= 1e4.
std::vector<KirbyState> random_kirby_instances(long count, std::uint64_t seed);

// For every instance and seed s in [seed, seed + seeds): evaluate(random_equivalent(., steps, s)) ==
// evaluate(.), exactly. Failures carry the replayable move log.
SuiteReport kirby_suite(const std::vector<KirbyState>& instances, long steps, long seeds, std::uint64_t seed,
                        unsigned threads = 1);

std::string describe(const KirbyState& s);

}  // namespace abelcs
