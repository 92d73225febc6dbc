#pragma once

#include <nlohmann/json.hpp>

#include "blockwright/common/result.hpp"
#include "blockwright/grammar/spec.hpp"

namespace blockwright::grammar {

using ordered_json = nlohmann::ordered_json;

/// Dataset form: every field present, nulls explicit.
///   {"kind","color","x","y","z","x2","y2","relative",
///    "relation":{"kind","target":{"type","part","color"}}}
/// with_sources adds "sources":{field: source} for non-unset fields.
ordered_json spec_to_json(const PartialPlacementSpec &spec, bool with_sources = false);
Result<PartialPlacementSpec> spec_from_json(const nlohmann::json &j);

ordered_json command_to_json(const MemoryCommand &cmd);
Result<MemoryCommand> command_from_json(const nlohmann::json &j);

/// Specs serialize as above; commands carry a "command" key.
ordered_json item_to_json(const ParsedItem &item);
Result<ParsedItem> item_from_json(const nlohmann::json &j);

} // namespace blockwright::grammar
