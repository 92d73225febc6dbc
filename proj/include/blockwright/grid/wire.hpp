#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "blockwright/common/result.hpp"
#include "blockwright/grid/grid_state.hpp"

namespace blockwright::wire {

using ordered_json = nlohmann::ordered_json;

/// {"action":"place","part":..,"color":..,"x":..,"y":..,"z":..} plus "x2"
/// (horizontal bridge) or "y2" (vertical bridge); {"action":"remove","x","y","z"}.
ordered_json action_to_json(const Action &action);
Result<Action> action_from_json(const nlohmann::json &j);

ordered_json part_to_json(const PlacedPart &part);
Result<PlacedPart> part_from_json(const nlohmann::json &j);

/// Array of placed parts in id order.
ordered_json snapshot(const GridState &state);
std::string snapshot_string(const GridState &state);

} // namespace blockwright::wire
