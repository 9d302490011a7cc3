#ifndef RPF_IO_HPP
#define RPF_IO_HPP

#include "rpf/noise.hpp"
#include "rpf/rough_path.hpp"

#include <json.hpp>

#include <string>

namespace rpf {

using json = nlohmann::json;

// 17-significant-digit decimal: parses back to the identical double.
std::string fmt17(double x);

json grid_path_to_json(const GridPath& p, const json& metadata = json::object());
GridPath grid_path_from_json(const json& j);

json rough_path_to_json(const RoughPath& rp, const json& metadata = json::object());
RoughPath rough_path_from_json(const json& j);

json events_to_json(const MarkedEventStream& es);
MarkedEventStream events_from_json(const json& j);

// Columnar CSV: time, c0, c1, ... with 17-significant-digit decimals.
std::string grid_path_to_csv(const GridPath& p);
GridPath grid_path_from_csv(const std::string& csv);

std::string events_to_csv(const MarkedEventStream& es);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

// FNV-1a over the canonical (sorted-key) dump.
std::uint64_t canonical_hash(const json& j);

} // namespace rpf

#endif
