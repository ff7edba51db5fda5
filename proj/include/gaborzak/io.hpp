#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaborzak/oracle.hpp"
#include "gaborzak/theta.hpp"
#include "gaborzak/window.hpp"
#include "gaborzak/zibulski.hpp"

namespace gaborzak {

using ojson = nlohmann::ordered_json;

/// Window from its JSON description; throws ConfigError on bad input.
WindowSpec window_from_json(const nlohmann::json& j);
ojson window_to_json(const WindowSpec& w);

/// Preset name ("gaussian", "hermite:N", "bump") or path to a JSON file.
WindowSpec load_window(const std::string& preset_or_path);

/// Shortest round-trip decimal form, so output is byte-stable.
std::string format_double(double v);

ojson lattice_json(const RationalLattice& lattice);
ojson field_summary_json(const ZZField& field);
ojson witness_json(const ThetaWitness& w);

/// One row per grid point: x,xi,detA_abs,sigma_min,sigma_max
void write_field_csv(std::ostream& os, const ZZField& field);
/// size,residual
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace gaborzak
