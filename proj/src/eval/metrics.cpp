#include "blockwright/eval/metrics.hpp"

#include <algorithm>
#include <tuple>

namespace blockwright::eval {

namespace {

std::vector<Cell> sorted_cells(const PlaceAction &a) {
  auto cells = footprint(a.kind, a.anchor);
  if (!cells) return {a.anchor};
  auto out = std::move(cells).value();
  std::sort(out.begin(), out.end());
  return out;
}

using PartKey = std::tuple<PartKind, Color, std::vector<Cell>>;

std::vector<PartKey> keys(const std::vector<PlaceAction> &actions) {
  std::vector<PartKey> out;
  for (const auto &a : actions) out.emplace_back(a.kind, a.color, sorted_cells(a));
  std::sort(out.begin(), out.end());
  return out;
}

FieldCategory category(Field f) {
  switch (f) {
  case Field::Kind: return FieldCategory::Part;
  case Field::Color: return FieldCategory::Color;
  default: return FieldCategory::Coordinates;
  }
}

} // namespace

HallucinationCounts &HallucinationReport::at(FieldCategory c) {
  switch (c) {
  case FieldCategory::Part: return part;
  case FieldCategory::Color: return color;
  default: return coordinates;
  }
}

const HallucinationCounts &HallucinationReport::at(FieldCategory c) const {
  return const_cast<HallucinationReport *>(this)->at(c);
}

void HallucinationReport::merge(const HallucinationReport &o) {
  for (auto c : {FieldCategory::Part, FieldCategory::Color, FieldCategory::Coordinates}) {
    at(c).hallucinated += o.at(c).hallucinated;
    at(c).correct_null += o.at(c).correct_null;
  }
}

bool gold_null(const PartialPlacementSpec &gold, Field field) {
  if (gold.has(field)) return false;
  if ((field == Field::X || field == Field::Y) && (gold.relative || gold.relation)) return false;
  return true;
}

HallucinationReport hallucination_rate(const std::vector<PartialPlacementSpec> &predicted,
                                       const std::vector<PartialPlacementSpec> &gold) {
  HallucinationReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (Field f : kQuestionOrder) {
      if (!gold_null(gold[i], f)) continue;
      const bool invented =
          i < predicted.size() && predicted[i].has(f) && predicted[i].source(f) != Source::Answer;
      auto &counts = report.at(category(f));
      if (invented) {
        ++counts.hallucinated;
      } else {
        ++counts.correct_null;
      }
    }
  }
  return report;
}

ReuseScores function_reuse_metrics(const std::vector<memory::WorkflowCall> &predicted,
                                   const std::vector<memory::WorkflowCall> &gold) {
  std::vector<bool> used(gold.size(), false);
  int hits = 0;
  for (const auto &p : predicted) {
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (!used[i] && gold[i] == p) {
        used[i] = true;
        ++hits;
        break;
      }
    }
  }
  ReuseScores s;
  s.precision = predicted.empty() ? 0.0 : static_cast<double>(hits) / predicted.size();
  s.recall = gold.empty() ? (predicted.empty() ? 1.0 : 0.0) : static_cast<double>(hits) / gold.size();
  if (gold.empty() && predicted.empty()) s.precision = 1.0;
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

PartMatch match_part(const PlaceAction &predicted, const PlaceAction &gold) {
  return {predicted.kind == gold.kind, predicted.color == gold.color, sorted_cells(predicted) == sorted_cells(gold)};
}

bool same_parts(const std::vector<PlaceAction> &a, const std::vector<PlaceAction> &b) { return keys(a) == keys(b); }

std::vector<PlaceAction> grid_actions(const GridState &grid) {
  std::vector<PlaceAction> out;
  for (const auto &[id, p] : grid.parts()) out.push_back({p.kind, p.color, p.anchor});
  return out;
}

} // namespace blockwright::eval
