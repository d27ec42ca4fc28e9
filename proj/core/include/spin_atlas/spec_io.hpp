#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "spin_atlas/spin_system.hpp"

namespace spin_atlas {

// Spin-system documents (JSON). Schema, with energies in MHz:
//
//   {
//     "sites": [
//       { "label": "nv0", "kind": "nv", "axis": [x, y, z], "gyromagnetic": 2.8024,
//         "zfs": { "d_parallel": 0, "d_x": 0, "d_y": 0, "D": 2870.0 } },
//       { "kind": "n14", "axis": [...],
//         "quadrupole": { "principal": [qxx, qyy, qzz], "axis": [...] },
//         "hyperfine": { "partner": 1, "principal": [a, a, b], "axis": [...] } }
//     ],
//     "couplings": [ { "sites": [a, b], "tensor": { "principal": [...], "axis": [...] } } ],
//     "probe_site": 0
//   }
//
// "principal" is either a diagonal (3 numbers) or a full 3x3 row-major array.
// "gyromagnetic", "zfs.D" and "probe_site" (default 0) are optional; "zfs" is
// required for NV sites.
// A site-level "hyperfine" block is input sugar for a coupling between that
// site and "partner"; emit() always writes couplings explicitly, so
// parse(emit(spec)) == spec and emit(parse(emit(spec))) == emit(spec).
// Axes within 1e-12 of unit length are kept bit-exact, others are normalized.
// Unknown top-level keys are ignored (catalog files carry a "catalog" block).

SpinSystemSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const SpinSystemSpec& spec);

SpinSystemSpec parse_spec(const std::string& text);
std::string emit_spec(const SpinSystemSpec& spec);

SpinSystemSpec load_spec_file(const std::filesystem::path& path);

nlohmann::json tensor_to_json(const InteractionTensor& t);
InteractionTensor tensor_from_json(const nlohmann::json& j);
nlohmann::json axis_to_json(const Axis& a);
Axis axis_from_json(const nlohmann::json& j);

}  // namespace spin_atlas
