#include "blockwright/grammar/generator.hpp"

#include "blockwright/common/text.hpp"
#include "blockwright/grammar/lexicon.hpp"

namespace blockwright::grammar {

namespace {

std::string article_for(std::string_view word) {
  if (!word.empty() && std::string_view("aeiou").find(word.front()) != std::string_view::npos) {
    return "an";
  }
  return "a";
}

std::string object_phrase(const PartialPlacementSpec &spec) {
  if (!spec.kind && !spec.color) {
    return "it";
  }
  std::string words;
  if (spec.color) {
    words = std::string(to_symbol(*spec.color)) + " ";
  }
  words += spec.kind ? std::string(display_name(*spec.kind)) : "piece";
  return article_for(words) + " " + words;
}

std::string ref_phrase(const AnchorRef &ref) {
  if (ref.type == AnchorRef::Type::Recent || (!ref.kind && !ref.color)) {
    return "it";
  }
  std::string out = "the";
  if (ref.color) out += " " + std::string(to_symbol(*ref.color));
  out += " " + (ref.kind ? std::string(display_name(*ref.kind)) : std::string("one"));
  return out;
}

std::string relation_phrase(const DependentRelation &rel) {
  std::string head;
  switch (rel.kind) {
  case RelationKind::OnTop: head = "on top of"; break;
  case RelationKind::NextTo: head = "next to"; break;
  case RelationKind::LeftOf: head = "to the left of"; break;
  case RelationKind::RightOf: head = "to the right of"; break;
  case RelationKind::InFront: head = "in front of"; break;
  case RelationKind::Behind: head = "behind"; break;
  }
  return head + " " + ref_phrase(rel.target);
}

std::string axis_phrase(const std::optional<int> &first, const std::optional<int> &second,
                        std::string_view noun) {
  if (second) {
    return text::ordinal(*first) + " and " + text::ordinal(*second) + " " + std::string(noun) + "s";
  }
  return text::ordinal(*first) + " " + std::string(noun);
}

// Location words, including the leading preposition; empty when nothing is known.
std::string location_phrase(const PartialPlacementSpec &spec) {
  if (spec.relation) {
    return relation_phrase(*spec.relation);
  }
  std::vector<std::string> axes;
  if (spec.relative) {
    axes.push_back("the " + std::string(relative_phrase(*spec.relative)) + " of the board");
  }
  if (spec.x) axes.push_back(axis_phrase(spec.x, spec.x2, "column"));
  if (spec.y) axes.push_back(axis_phrase(spec.y, spec.y2, "row"));
  if (spec.z) axes.push_back("height " + std::to_string(*spec.z));
  if (axes.empty()) {
    return {};
  }
  if (!spec.relative && (spec.x || spec.y)) {
    axes.front() = "the " + axes.front();
  }
  return "at " + text::join(axes, ", ");
}

std::string size_phrase(const SizeOverride &size) {
  if (size.box) {
    const auto &b = *size.box;
    return "scaled to " + std::to_string(b[0]) + " by " + std::to_string(b[1]) + " by " +
           std::to_string(b[2]);
  }
  const int f = size.factor.value_or(1);
  if (f == 2) return "twice as big";
  return text::cardinal_word(f) + " times as big";
}

std::string render_spec(const PartialPlacementSpec &spec) {
  std::string out = "Place " + object_phrase(spec);
  if (auto loc = location_phrase(spec); !loc.empty()) {
    out += " " + loc;
  }
  return out + ".";
}

std::string render_command(const MemoryCommand &cmd) {
  if (const auto *name = std::get_if<NameCommand>(&cmd)) {
    return "This is what I call " + article_for(text::to_lower(name->name)) + " " + name->name + ".";
  }
  const auto &recall = std::get<RecallCommand>(cmd);
  std::string out = "Build another " + recall.name;
  if (auto loc = location_phrase(recall.target); !loc.empty()) {
    out += " " + loc;
  }
  if (recall.color) out += " in " + std::string(to_symbol(*recall.color));
  if (recall.part) out += " with " + plural_display_name(*recall.part);
  if (recall.size) out += " " + size_phrase(*recall.size);
  return out + ".";
}

} // namespace

std::string_view template_name(TemplateId id) {
  switch (id) {
  case TemplateId::Absolute: return "absolute";
  case TemplateId::Relative: return "relative";
  case TemplateId::Dependent: return "dependent";
  }
  return "?";
}

std::string render(const ParsedItem &item) {
  if (const auto *spec = std::get_if<PartialPlacementSpec>(&item)) {
    return render_spec(*spec);
  }
  return render_command(std::get<MemoryCommand>(item));
}

std::string render(const std::vector<ParsedItem> &items) {
  std::vector<std::string> sentences;
  sentences.reserve(items.size());
  for (const auto &item : items) {
    sentences.push_back(render(item));
  }
  return text::join(sentences, " ");
}

PartialPlacementSpec restrict_to(const PartialPlacementSpec &spec, TemplateId id) {
  PartialPlacementSpec out;
  out.kind = spec.kind;
  out.color = spec.color;
  switch (id) {
  case TemplateId::Absolute:
    out.x = spec.x;
    out.y = spec.y;
    if (spec.kind == PartKind::HorizontalBridge && spec.x) out.x2 = spec.x2.value_or(*spec.x + 1);
    if (spec.kind == PartKind::VerticalBridge && spec.y) out.y2 = spec.y2.value_or(*spec.y + 1);
    break;
  case TemplateId::Relative:
    out.relative = spec.relative;
    break;
  case TemplateId::Dependent:
    out.relation = spec.relation;
    break;
  }
  return out;
}

Result<std::string> generate_instruction(const PartialPlacementSpec &spec, TemplateId id) {
  if (!spec.kind) return make_error(Errc::MissingField, "kind");
  if (!spec.color) return make_error(Errc::MissingField, "color");
  switch (id) {
  case TemplateId::Absolute:
    if (!spec.x) return make_error(Errc::MissingField, "x");
    if (!spec.y) return make_error(Errc::MissingField, "y");
    break;
  case TemplateId::Relative:
    if (!spec.relative) return make_error(Errc::MissingField, "relative");
    break;
  case TemplateId::Dependent:
    if (!spec.relation) return make_error(Errc::MissingField, "relation");
    break;
  }
  return render_spec(restrict_to(spec, id));
}

} // namespace blockwright::grammar
