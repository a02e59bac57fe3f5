#ifndef LCM_IO_HPP
#define LCM_IO_HPP

#include <json.hpp>
#include <string>

#include "lcm/convex.hpp"
#include "lcm/measures.hpp"
#include "lcm/polygon.hpp"
#include "lcm/solver.hpp"
#include "lcm/surface.hpp"

namespace lcm::io {

using json = nlohmann::ordered_json;

/// Reals serialize as numbers; infinities as the strings "inf" / "-inf".
json real_to_json(double v);
double real_from_json(const json& j);
json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);

json to_json(const ConvexFunction& phi);
ConvexFunction function_from_json(const json& j);

json to_json(const Polygon& P);
Polygon polygon_from_json(const json& j);

json to_json(const MeasurePair& p);
MeasurePair pair_from_json(const json& j);

json to_json(const SurfaceMeasures& s);
json to_json(const SolveReport& r);

json read_file(const std::string& path);
/// Pretty-printed; doubles use the shortest round-trip form.
std::string dump(const json& j);
void write_file(const std::string& path, const json& j);

}  // namespace lcm::io

#endif
