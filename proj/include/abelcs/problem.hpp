#pragma once

#include "abelcs/surgery.hpp"

#include <json.hpp>
#include <optional>
#include <string>

namespace abelcs {

// A problem instance as read from a JSON file.
//
//   surgery          m x m matrix, or {"framings": [...], "crossings": [[a, b, sign], ...]}
//   coupling | K     n x n coupling C, or an even symmetric K (C is then its upper half)
//   charges | ell    m x n matrix, or a flat copy-major list (index j*m + i)
//   trivial          [{"copy": j, "charge": q, "framing": f}, ...]
//   trivial_links    t x t matrix, or {"crossings": [...]} with framings from `trivial`
//   cross_links      t x (n*m)
//   normalized_frame {"P_L": ..., "P_K": ...}: charges and trivial loops are given in this frame
struct Problem {
  std::string name;
  SurgeryPresentation L;
  IntMat C;
  ObservableSpec obs;
  std::optional<FrameHint> hint;

  long m() const { return L.m(); }
  long n() const { return static_cast<long>(C.rows()); }
};

// Throws InputError naming `source` and the offending field.
Problem parse_problem(const nlohmann::json& j, const std::string& source = "<input>");
Problem load_problem(const std::string& path);

// Resolved form: plain matrices, raw frame, no crossing blocks.
nlohmann::json problem_to_json(const Problem& p);

nlohmann::json mat_to_json(const IntMat& M);

}  // namespace abelcs
