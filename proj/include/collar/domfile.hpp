#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collar/field.hpp"

namespace collar {

// Line-oriented domain spec:
//   dim = 2
//   rho = "y - sin(x)/x"
//   branch = { guard = "abs(x) < 0.1", rho = "..." }
//   region = { min = [-50, -5], max = [50, 5] }
// plus optional `name = "..."` and `complex_dim = 2`. '#' starts a comment.
struct DomainSpec {
  std::string name;
  int dim = 0;
  int complex_dim = 0;
  std::string rho;
  std::vector<std::pair<std::string, std::string>> branches;  // (guard, rho)
  Box region;
  bool has_region = false;
  std::uint64_t digest = 0;  // FNV-1a of the source text
};

DomainSpec parse_dom_text(const std::string& text);
DomainSpec load_dom_file(const std::string& path);

ScalarField field_from_spec(const DomainSpec& spec, int max_jet_order = 6);

std::string digest_hex(std::uint64_t digest);

}  // namespace collar
