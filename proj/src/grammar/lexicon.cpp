#include "blockwright/grammar/lexicon.hpp"

#include <string>

namespace blockwright::grammar {

namespace {
constexpr int kLow = 1;
constexpr int kMid = kGridSize / 2;
constexpr int kHigh = kGridSize;
} // namespace

std::pair<int, int> resolve_relative(RelativeLabel label) {
  switch (label) {
  case RelativeLabel::TopLeft: return {kLow, kLow};
  case RelativeLabel::TopRight: return {kHigh, kLow};
  case RelativeLabel::BottomLeft: return {kLow, kHigh};
  case RelativeLabel::BottomRight: return {kHigh, kHigh};
  case RelativeLabel::Middle: return {kMid, kMid};
  case RelativeLabel::TopMiddle: return {kMid, kLow};
  case RelativeLabel::BottomMiddle: return {kMid, kHigh};
  case RelativeLabel::LeftMiddle: return {kLow, kMid};
  case RelativeLabel::RightMiddle: return {kHigh, kMid};
  }
  return {kMid, kMid};
}

Result<std::pair<int, int>> resolve_relative(std::string_view label) {
  const auto parsed = relative_from_symbol(label);
  if (!parsed) {
    return make_error(Errc::UnknownLabel, "unknown relative position '" + std::string(label) + "'");
  }
  return resolve_relative(*parsed);
}

std::string_view relative_phrase(RelativeLabel label) {
  switch (label) {
  case RelativeLabel::TopLeft: return "top left";
  case RelativeLabel::TopRight: return "top right";
  case RelativeLabel::BottomLeft: return "bottom left";
  case RelativeLabel::BottomRight: return "bottom right";
  case RelativeLabel::Middle: return "middle";
  case RelativeLabel::TopMiddle: return "top middle";
  case RelativeLabel::BottomMiddle: return "bottom middle";
  case RelativeLabel::LeftMiddle: return "left middle";
  case RelativeLabel::RightMiddle: return "right middle";
  }
  return "middle";
}

Cell relation_offset(RelationKind kind) {
  switch (kind) {
  case RelationKind::OnTop: return {0, 0, 1};
  case RelationKind::NextTo: return {1, 0, 0};
  case RelationKind::RightOf: return {1, 0, 0};
  case RelationKind::LeftOf: return {-1, 0, 0};
  case RelationKind::InFront: return {0, 1, 0};
  case RelationKind::Behind: return {0, -1, 0};
  }
  return {0, 0, 0};
}

} // namespace blockwright::grammar
