#pragma once

#include "abelcs/exact.hpp"
#include "abelcs/surgery.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abelcs {

struct EvalOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
  BigInt max_terms{10000000};
  // Nonzero: shift every coset representative by a pseudo-random L0-lattice vector.
  std::uint64_t shift_seed = 0;
};

struct GateCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct GateReport {
  std::vector<GateCheck> checks;
  bool passed() const;
  std::string failed_gate() const;  // empty when all passed
};

struct EvalReport {
  ExactValue value;
  GateReport gates;
  BigInt prefactor{1};
  PhaseSum trivial_phase;
  Rat self_linking{0};     // l^T (K0^-1 x L0^-1) l
  PhaseSum self_link_phase;  // e^{i pi self_linking}
  PhaseSum gauss_sum;        // uncompleted sum
  PhaseSum completed_sum;    // gauss_sum * e^{-i pi self_linking}
  BigInt term_count{0};
  BlockDecomposition blocks;
};

// sum over kappa in (Z^r/L0 Z^r)^s of e^{-i pi k^T (K0 x L0^-1) k - 2 pi i k^T (Id x L0^-1) l}
PhaseSum gauss_sum(const IntMat& K0, const IntMat& L0, const IntMat& ell_middle,
                   const EvalOptions& opts = {});

// Completed-square form, summed independently with exact rationals.
PhaseSum gauss_sum_completed(const IntMat& K0, const IntMat& L0, const IntMat& ell_middle);

Rat self_linking(const IntMat& K0, const IntMat& L0, const IntMat& ell_middle);

// Trivial components index K0's copies directly. cross_links columns are j*m + i over the
// s copies of K0 and m torsion components.
PhaseSum trivial_phase(const IntMat& K0, const std::vector<TrivialComponent>& trivial,
                       const IntMat& trivial_links, const IntMat& cross_links = IntMat(),
                       long surgery_components = 0);

EvalReport evaluate(const SurgeryPresentation& L, const IntMat& C, const ObservableSpec& obs,
                    const EvalOptions& opts = {}, const std::optional<FrameHint>& hint = std::nullopt);

ExactValue partition_function(const SurgeryPresentation& L, const IntMat& C,
                              const EvalOptions& opts = {});

struct LinkingFormCheck {
  bool k_form_invariant = true;
  bool c_form_invariant = true;
  Rat k_value{0};  // l^T (K x L0^-1) l mod 1
  Rat c_value{0};  // l^T (C x L0^-1) l mod 1
};

LinkingFormCheck linking_form_details(const IntMat& L0, const IntMat& C, const IntMat& ell_middle);

// K-form invariance (see linking_form_details for the C form).
bool linking_form_consistency(const IntMat& L0, const IntMat& C, const IntMat& ell_middle);

// Representatives of the zero-mode classes in (Z^r/L0)^n, reduced to Hermite boxes.
std::vector<IntVec> zero_modes_torsion(const IntMat& L0, const IntMat& C);

}  // namespace abelcs
