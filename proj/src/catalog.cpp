#include "entroact/catalog.hpp"

#include <cmath>

#include "entroact/errors.hpp"

namespace entroact::catalog {

using nlohmann::json;

GeneratorSet build_system(const SystemSpec& spec) {
  if (spec.generators.empty())
    throw DomainError("system needs at least one generator");
  for (const auto& m : spec.generators) {
    if (m.kind == MapDesc::Kind::toral_endo) {
      if (spec.space.kind() != Space::Kind::torus ||
          static_cast<int>(m.matrix.size()) != spec.space.dim())
        throw DomainError("toral_endo matrix does not match the torus "
                          "dimension");
    }
    if (m.kind == MapDesc::Kind::piecewise && !spec.space.is_union())
      throw DomainError("piecewise generator requires a disjoint union");
  }
  return GeneratorSet(spec.space, spec.generators, spec.max_expansion,
                      spec.invertible, spec.name);
}

namespace {

SystemSpec make_expanding23() {
  SystemSpec s;
  s.name = "expanding23";
  s.space = Space::circle();
  s.generators = {MapDesc::expanding_circle(2), MapDesc::expanding_circle(3)};
  s.max_expansion = 3.0;
  s.invertible = false;
  return s;
}

SystemSpec make_doubling() {
  SystemSpec s;
  s.name = "doubling";
  s.space = Space::circle();
  s.generators = {MapDesc::expanding_circle(2)};
  s.max_expansion = 2.0;
  s.invertible = false;
  return s;
}

SystemSpec make_rotations() {
  SystemSpec s;
  s.name = "rotations";
  s.space = Space::circle();
  // Two fixed irrational angles; any pair serves, these are pinned for
  // reproducibility.
  s.generators = {MapDesc::rotation(std::sqrt(2.0) - 1.0),
                  MapDesc::rotation(std::sqrt(3.0) - 1.0)};
  s.max_expansion = 1.0;
  s.invertible = true;
  return s;
}

SystemSpec make_mp_rot(double beta, double alpha) {
  SystemSpec s;
  s.name = "mp_rot";
  s.space = Space::circle();
  s.generators = {MapDesc::manneville_pomeau(beta), MapDesc::rotation(alpha)};
  // Conservative Lipschitz bound: sup derivative of the intermittent branch
  // is 1 + (beta + 1) 2^beta x^beta <= 2 + beta on [0, 1/2], the linear
  // branch has slope 2.
  s.max_expansion = std::max(2.0, 2.0 + beta);
  s.invertible = false;
  return s;
}

SystemSpec make_example43() {
  SystemSpec s;
  s.name = "example43";
  s.space = Space::disjoint_union(Space::circle(), Space::circle());
  // Branch X_1 carries the expanding pair; branch X_2 is pointwise fixed.
  s.generators = {
      MapDesc::piecewise(MapDesc::expanding_circle(2), MapDesc::identity()),
      MapDesc::piecewise(MapDesc::expanding_circle(3), MapDesc::identity())};
  s.max_expansion = 3.0;
  s.invertible = false;
  return s;
}

SystemSpec make_example44() {
  SystemSpec s;
  s.name = "example44";
  s.space = Space::torus(5);
  // Commuting block endomorphisms of T^5: a hyperbolic block on one pair of
  // coordinates, identity on the other, zero on the fifth.
  s.generators = {MapDesc::toral_endo({{2, 1, 0, 0, 0},
                                       {1, 1, 0, 0, 0},
                                       {0, 0, 1, 0, 0},
                                       {0, 0, 0, 1, 0},
                                       {0, 0, 0, 0, 0}}),
                  MapDesc::toral_endo({{1, 0, 0, 0, 0},
                                       {0, 1, 0, 0, 0},
                                       {0, 0, 2, 1, 0},
                                       {0, 0, 1, 1, 0},
                                       {0, 0, 0, 0, 0}})};
  s.max_expansion = 3.0;  // max row sum of either matrix
  s.invertible = false;
  return s;
}

}  // namespace

SystemSpec builtin(const std::string& name) {
  if (name == "expanding23") return make_expanding23();
  if (name == "doubling") return make_doubling();
  if (name == "rotations") return make_rotations();
  if (name == "example43") return make_example43();
  if (name == "example44") return make_example44();
  if (name == "mp_rot") return make_mp_rot(1.0, std::sqrt(2.0) - 1.0);
  if (name.rfind("mp_rot(", 0) == 0 && name.back() == ')') {
    const std::string inner = name.substr(7, name.size() - 8);
    const auto comma = inner.find(',');
    if (comma == std::string::npos)
      throw DomainError("mp_rot takes two parameters: mp_rot(beta,alpha)");
    try {
      const double beta = std::stod(inner.substr(0, comma));
      const double alpha = std::stod(inner.substr(comma + 1));
      return make_mp_rot(beta, alpha);
    } catch (const std::exception&) {
      throw DomainError("could not parse mp_rot parameters: " + name);
    }
  }
  throw DomainError("unknown builtin system: " + name);
}

namespace {

json space_to_json(const Space& s) {
  json j;
  switch (s.kind()) {
    case Space::Kind::circle:
      j["kind"] = "circle";
      break;
    case Space::Kind::interval01:
      j["kind"] = "interval01";
      break;
    case Space::Kind::torus:
      j["kind"] = "torus";
      j["dim"] = s.dim();
      break;
    case Space::Kind::disjoint_union:
      j["kind"] = "disjoint_union";
      j["left"] = space_to_json(s.left());
      j["right"] = space_to_json(s.right());
      break;
  }
  return j;
}

Space space_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle") return Space::circle();
  if (kind == "interval01") return Space::interval01();
  if (kind == "torus") return Space::torus(j.at("dim").get<int>());
  if (kind == "disjoint_union")
    return Space::disjoint_union(space_from_json(j.at("left")),
                                 space_from_json(j.at("right")));
  throw DomainError("unknown space kind: " + kind);
}

json map_to_json(const MapDesc& m) {
  json j;
  switch (m.kind) {
    case MapDesc::Kind::identity:
      j["type"] = "identity";
      break;
    case MapDesc::Kind::expanding_circle:
      j["type"] = "expanding_circle";
      j["k"] = m.factor;
      break;
    case MapDesc::Kind::rotation:
      j["type"] = "rotation";
      j["alpha"] = m.alpha;
      break;
    case MapDesc::Kind::manneville_pomeau:
      j["type"] = "manneville_pomeau";
      j["beta"] = m.beta;
      break;
    case MapDesc::Kind::toral_endo:
      j["type"] = "toral_endo";
      j["matrix"] = m.matrix;
      break;
    case MapDesc::Kind::piecewise:
      j["type"] = "piecewise";
      j["left"] = map_to_json(*m.left);
      j["right"] = map_to_json(*m.right);
      break;
  }
  return j;
}

MapDesc map_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "identity") return MapDesc::identity();
  if (type == "expanding_circle")
    return MapDesc::expanding_circle(j.at("k").get<int>());
  if (type == "rotation") return MapDesc::rotation(j.at("alpha").get<double>());
  if (type == "manneville_pomeau")
    return MapDesc::manneville_pomeau(j.at("beta").get<double>());
  if (type == "toral_endo")
    return MapDesc::toral_endo(
        j.at("matrix").get<std::vector<std::vector<long long>>>());
  if (type == "piecewise")
    return MapDesc::piecewise(map_from_json(j.at("left")),
                              map_from_json(j.at("right")));
  throw DomainError("unknown generator type: " + type);
}

}  // namespace

SystemSpec spec_from_json(const json& j) {
  if (j.is_string()) return builtin(j.get<std::string>());
  SystemSpec s;
  s.name = j.value("name", "custom");
  s.space = space_from_json(j.at("space"));
  for (const auto& g : j.at("generators")) s.generators.push_back(map_from_json(g));
  s.max_expansion = j.at("max_expansion").get<double>();
  s.invertible = j.value("invertible", false);
  return s;
}

json spec_to_json(const SystemSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["space"] = space_to_json(spec.space);
  json gens = json::array();
  for (const auto& g : spec.generators) gens.push_back(map_to_json(g));
  j["generators"] = gens;
  j["max_expansion"] = spec.max_expansion;
  j["invertible"] = spec.invertible;
  return j;
}

}  // namespace entroact::catalog
