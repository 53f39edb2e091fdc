#pragma once

#include <string>
#include <vector>

#include "entroact/semigroup.hpp"

#include <json.hpp>

namespace entroact::catalog {

using semigroup::GeneratorSet;
using semigroup::MapDesc;
using spaces::Space;

/// Declarative description of a generator system: the space, the generator
/// maps, and the declared per-step expansion bound Lambda used by the
/// feasibility guards (Lambda must dominate the true Lipschitz constant of
/// every generator).
struct SystemSpec {
  std::string name;
  Space space = Space::circle();
  std::vector<MapDesc> generators;
  double max_expansion = 1.0;
  bool invertible = false;
};

/// Validates the spec and instantiates the generator set.
GeneratorSet build_system(const SystemSpec& spec);

/// Canonical named systems. Accepted names:
///   expanding23, doubling, rotations, example43, example44,
///   mp_rot            (beta = 1, alpha = sqrt(2) - 1)
///   mp_rot(beta,alpha)
SystemSpec builtin(const std::string& name);

/// JSON schema: {name, space:{kind,dim|left,right}, generators:[{type,...}],
/// max_expansion, invertible}; matrices as row-major integer arrays.
SystemSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const SystemSpec& spec);

}  // namespace entroact::catalog
