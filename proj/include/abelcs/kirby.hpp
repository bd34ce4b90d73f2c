#pragma once

#include "abelcs/surgery.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace abelcs {

struct KirbyState {
  SurgeryPresentation L;
  IntMat C;
  ObservableSpec obs;
};

struct Move {
  enum class Kind { Kirby1, Kirby1Inverse, Kirby2, FieldRedef };
  Kind kind = Kind::Kirby1;
  int sign = 1;
  long i = 0, j = 0;  // Kirby1Inverse uses i
  IntMat R;

  static Move kirby1(int sign) { return {Kind::Kirby1, sign, 0, 0, {}}; }
  static Move blow_down(long comp) { return {Kind::Kirby1Inverse, 1, comp, 0, {}}; }
  static Move slide(long i, long j, int sign) { return {Kind::Kirby2, sign, i, j, {}}; }
  static Move redef(IntMat R) { return {Kind::FieldRedef, 1, 0, 0, std::move(R)}; }
};

// Adds an unlinked unknot framed +-1 with zero charges.
KirbyState kirby1(const KirbyState& s, int sign);
// Removes an unlinked +-1 component; each copy's charge q on it becomes a trivial loop
// (copy, q, framing) and these loops link each other with the removed framing.
KirbyState kirby1_inverse(const KirbyState& s, long comp);
// L -> P^T L P with P = Id + sign E_ij; charges -> P^T charges (row j += sign row i).
KirbyState kirby2(KirbyState s, long i, long j, int sign);
// C -> R^T C R, charges -> charges R, trivial charge vectors -> R^T v.
KirbyState field_redef(const KirbyState& s, const IntMat& R);

KirbyState apply_move(const KirbyState& s, const Move& m);
KirbyState replay(const KirbyState& s, const std::vector<Move>& log);

std::string format_move(const Move& m);
std::string format_log(const std::vector<Move>& log);
// Parses "K1 +1 | K1I 3 | K2 0 1 -1 | FR [[1,0],[-2,1]]"; throws InputError.
std::vector<Move> parse_log(std::string_view text);

// A component can be blown down without moving charge into a degenerate K direction.
bool blowdown_keeps_gates(const KirbyState& s, long comp);

// Every entry of L, C, charges and trivial data is at most 1e6 in absolute value.
bool within_entry_bound(const KirbyState& s);

struct RandomRun {
  KirbyState state;
  std::vector<Move> log;
};

// `steps` random moves, deterministic per seed; moves that would push any entry above 1e6
// are rejected and redrawn.
RandomRun random_equivalent(const KirbyState& s, long steps, std::uint64_t seed);

}  // namespace abelcs
