#include "core/config.hpp"

#include "core/types.hpp"

#include <fstream>

namespace cutmem {

using nlohmann::json;

namespace {

json cylinder_defaults() {
  return json{
      {"benchmark", "cylinder"},
      {"mode", "membrane"},
      {"mesh",
       {{"kind", "tet4"}, {"levels", {2, 4, 8, 16}}, {"jitter", 0.0}, {"seed", 1234}}},
      {"domain", {{"lo", {0.0, -1.2, -1.2}}, {"hi", {4.0, 1.2, 1.2}}}},
      {"levelset",
       {{"kind", "cylinder"}, {"axis", "x"}, {"center", {0.0, 0.0}}, {"radius", 1.0}}},
      {"material", {{"E", 100.0}, {"nu", 0.5}, {"t", 0.01}}},
      {"stabilization", {{"tau0", 1.0}}},
      {"load", {{"F", 1.0}}},
      {"solver", {{"tol", 1e-10}, {"max_iter", 0}}},
      {"output", {{"write_vtk", true}}},
  };
}

json oblate_defaults() {
  return json{
      {"benchmark", "oblate"},
      {"mode", "membrane"},
      {"mesh",
       {{"kind", "tet4"}, {"levels", {12, 18, 27, 39}}, {"jitter", 0.0}, {"seed", 1234}}},
      {"domain", {{"lo", {-1.2, -1.2, -0.8}}, {"hi", {1.2, 1.2, 0.8}}}},
      {"levelset", {{"kind", "oblate"}}},
      {"material", {{"E", 1.0}, {"nu", 0.5}, {"t", 1.0}}},
      {"stabilization", {{"tau0", 1.0}}},
      {"solver", {{"tol", 1e-8}, {"max_iter", 0}}},
      {"output", {{"write_vtk", true}}},
  };
}

json stiffened_beam_defaults() {
  return json{
      {"benchmark", "stiffened-beam"},
      {"mode", "coupled"},
      {"mesh", {{"kind", "hex8"}, {"subdivisions", {24, 12, 12}}}},
      {"domain", {{"lo", {0.0, 0.0, 0.0}}, {"hi", {2.0, 1.0, 1.0}}}},
      {"bulk", {{"E", 100.0}, {"nu", 0.499}}},
      {"material", {{"E", 1000.0}, {"nu", 0.5}, {"t", 0.01}}},
      {"membranes", {{"count", 8}, {"normal_axis", "y"}}},
      {"stabilization", {{"tau0", 0.0}}},
      {"load", {{"traction", {1.0, 0.0, 0.0}}}},
      {"solver", {{"tol", 1e-8}, {"max_iter", 0}}},
      {"output", {{"write_vtk", true}}},
  };
}

json bending_beam_defaults() {
  return json{
      {"benchmark", "bending-beam"},
      {"mode", "coupled"},
      {"mesh", {{"kind", "hex8"}, {"subdivisions", {24, 12, 12}}}},
      {"domain", {{"lo", {0.0, 0.0, 0.0}}, {"hi", {2.0, 1.0, 1.0}}}},
      {"bulk", {{"E", 100.0}, {"nu", 0.499}}},
      {"material", {{"E", 1000.0}, {"nu", 0.5}, {"t", 0.01}}},
      {"levelset",
       {{"kind", "cylinder"}, {"axis", "x"}, {"center", {0.5, 0.5}}, {"radius", 0.3}}},
      {"stabilization", {{"tau0", 0.0}}},
      {"load", {{"traction", {0.0, 0.0, -1.0}}}},
      {"solver", {{"tol", 1e-8}, {"max_iter", 0}}},
      {"output", {{"write_vtk", true}}},
  };
}

json conditioning_defaults() {
  return json{
      {"benchmark", "conditioning"},
      {"mode", "membrane"},
      {"mesh", {{"kind", "tet4"}, {"subdivisions", {6, 6, 6}}}},
      {"domain", {{"lo", {0.0, 0.0, 0.0}}, {"hi", {1.0, 1.0, 1.0}}}},
      {"levelset", {{"kind", "plane"}, {"normal", {0.0, 0.0, 1.0}}, {"offset", 0.5}}},
      {"material", {{"E", 1.0}, {"nu", 0.3}, {"t", 1.0}}},
      {"taus", {1.0, 0.0}},
      {"benign_delta", 0.5},
      {"deltas", {1e-2, 1e-4, 1e-6, 1e-8}},
      {"solver", {{"tol", 1e-10}, {"max_iter", 0}}},
      {"output", {{"write_vtk", false}}},
  };
}

} // namespace

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = {
      "cylinder", "oblate", "stiffened-beam", "bending-beam", "conditioning"};
  return names;
}

json default_config(const std::string& benchmark) {
  if (benchmark == "cylinder") return cylinder_defaults();
  if (benchmark == "oblate") return oblate_defaults();
  if (benchmark == "stiffened-beam") return stiffened_beam_defaults();
  if (benchmark == "bending-beam") return bending_beam_defaults();
  if (benchmark == "conditioning") return conditioning_defaults();
  fail(Status::InvalidArgument, "unknown benchmark '" + benchmark + "'");
}

json merge_config(json base, const json& over) {
  if (over.is_null()) return base;
  if (!over.is_object() || !base.is_object()) return over;
  for (auto it = over.begin(); it != over.end(); ++it) {
    if (base.contains(it.key())) {
      base[it.key()] = merge_config(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
  return base;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Status::Io, "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(Status::Io, "cannot parse config file '" + path + "': " + e.what());
  }
  require(j.is_object(), Status::InvalidArgument,
          "config file '" + path + "' must contain a JSON object");
  return j;
}

} // namespace cutmem
