#pragma once

#include <string>
#include <vector>

#include "blockwright/common/result.hpp"
#include "blockwright/grammar/spec.hpp"

namespace blockwright::grammar {

enum class TemplateId { Absolute, Relative, Dependent };

std::string_view template_name(TemplateId id);

/// Canonical sentence for any parsed item. Whatever the item leaves null is
/// simply not mentioned, so parse_instruction(render(i)) == i for every item
/// the grammar can express.
std::string render(const ParsedItem &item);
std::string render(const std::vector<ParsedItem> &items);

/// Fills one dataset template. Fields outside the template are ignored.
///
///   Absolute   kind, color, x, y      "Place a red nut at the 1st column, 2nd row."
///   Relative   kind, color, relative  "Place a purple gasket at the middle of the board."
///   Dependent  kind, color, relation  "Place a red screw next to the blue screw."
Result<std::string> generate_instruction(const PartialPlacementSpec &spec, TemplateId id);

/// The spec reduced to the fields a template carries.
PartialPlacementSpec restrict_to(const PartialPlacementSpec &spec, TemplateId id);

} // namespace blockwright::grammar
