#pragma once

#include "abelcs/int_linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abelcs {

struct SurgeryPresentation {
  IntMat L;
  long m() const { return static_cast<long>(L.rows()); }
};

struct TrivialComponent {
  long copy = 0;
  BigInt charge;
  BigInt framing;
};

// Charges are m x n: charges(i, j) = lk(copy j, surgery component i).
// cross_links is t x (n*m), column j*m + i for the torsion piece (copy j, component i).
struct ObservableSpec {
  IntMat charges;
  std::vector<TrivialComponent> trivial;
  IntMat trivial_links;
  IntMat cross_links;

  long copies() const { return static_cast<long>(charges.cols()); }
  long components() const { return static_cast<long>(charges.rows()); }
  bool has_cross_links() const;

  static ObservableSpec empty(long m, long n);
};

// Fills trivial_links from framings when absent, validates shapes.
void validate_observable(ObservableSpec& obs, long m, long n);

// Explicit normalizing transforms, used instead of computed ones when supplied.
struct FrameHint {
  IntMat P_L, P_K;
};

struct BlockDecomposition {
  IntMat P_L, P_K, L0, K0;
  long m = 0, n = 0, r = 0, s = 0;
  IntMat charges_normalized;  // P_L^T charges P_K
  IntMat ell_middle;          // s x r, (copy, component)
  IntMat ell_tors_free;       // s x (m-r)
  IntMat ell_free_tors;       // (n-s) x r
  IntMat ell_free_free;       // (n-s) x (m-r)

  IntMat reassemble() const;
};

BlockDecomposition decompose(const SurgeryPresentation& L, const IntMat& C, const ObservableSpec& obs,
                             const std::optional<FrameHint>& hint = std::nullopt);

// Copy-major flattening of an s x r block: index j*r + i.
IntVec flatten_copy_major(const IntMat& block);

class TorsionCosets {
 public:
  TorsionCosets(const IntMat& L0, long copies);

  const std::vector<BigInt>& factors() const { return factors_; }
  const IntMat& lift() const { return lift_; }
  long copies() const { return copies_; }
  long rank() const { return rank_; }
  BigInt count() const;

  // index in [0, count), copy-major lexicographic over cyclic factors
  IntVec representative(const BigInt& index) const;
  std::vector<IntVec> all() const;

 private:
  long copies_, rank_;
  std::vector<BigInt> factors_;
  IntMat lift_;
};

// Representative of x + M Z^k with 0 <= x_i < H_ii for the lower Hermite form H of M.
IntVec reduce_mod_lattice(const IntMat& H, const IntVec& x);

struct Crossing {
  long a, b;
  int sign;
};

IntMat linking_from_crossings(long components, const std::vector<Crossing>& crossings,
                              const std::vector<BigInt>& framings);

IntMat bf_embed(const IntMat& C);

// Trivial loops carrying a charge vector over copies, before splitting into components.
struct VectorLoop {
  IntVec charge;  // length n
  BigInt framing;
};

// Groups of mutually parallel trivial components (same framing, mutual linking equal to the
// framing, identical linking with everything else).
std::vector<std::vector<long>> parallel_groups(const ObservableSpec& obs);

// Charge vector of each parallel group.
std::vector<VectorLoop> group_vectors(const ObservableSpec& obs,
                                      const std::vector<std::vector<long>>& groups, long n);

// Splits vector loops into per-copy components; links[a][b] are the loop linkings.
void set_vector_loops(ObservableSpec& obs, const std::vector<VectorLoop>& loops, const IntMat& links);

// Observable whose charges and trivial loops were written in the frame of `hint`,
// pulled back to the raw frame.
ObservableSpec pull_back_frame(const FrameHint& hint, const IntMat& charges_normalized,
                               const std::vector<TrivialComponent>& trivial_normalized,
                               const IntMat& trivial_links);

}  // namespace abelcs
