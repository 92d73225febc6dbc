#pragma once

#include <optional>
#include <vector>

#include "blockwright/grammar/spec.hpp"
#include "blockwright/grid/grid_state.hpp"
#include "blockwright/memory/workflow.hpp"

namespace blockwright::eval {

/// A count-based rate; nullopt when nothing was counted.
struct Rate {
  int hits = 0;
  int total = 0;

  void add(bool hit) {
    ++total;
    if (hit) ++hits;
  }
  std::optional<double> value() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(hits) / total;
  }
};

/// Field categories scored separately: part type, color, coordinates.
enum class FieldCategory { Part, Color, Coordinates };

struct HallucinationCounts {
  int hallucinated = 0;
  int correct_null = 0;
  int gold_null() const { return hallucinated + correct_null; }
  std::optional<double> rate() const {
    if (gold_null() == 0) return std::nullopt;
    return static_cast<double>(hallucinated) / gold_null();
  }
};

struct HallucinationReport {
  HallucinationCounts part, color, coordinates;

  HallucinationCounts &at(FieldCategory c);
  const HallucinationCounts &at(FieldCategory c) const;
  void merge(const HallucinationReport &o);
};

/// True when the gold spec leaves the field unknown. A column or row given
/// through a board position or a relation is not unknown.
bool gold_null(const PartialPlacementSpec &gold, Field field);

/// Pairs predicted with gold specs by position; a missing prediction counts
/// as null. A gold-null field is hallucinated when the prediction holds a
/// value that did not come from a clarification answer.
HallucinationReport hallucination_rate(const std::vector<PartialPlacementSpec> &predicted,
                                       const std::vector<PartialPlacementSpec> &gold);

struct ReuseScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// Calls match on name and full argument list. Multiset semantics, so a
/// repeated gold call must be predicted twice.
ReuseScores function_reuse_metrics(const std::vector<memory::WorkflowCall> &predicted,
                                   const std::vector<memory::WorkflowCall> &gold);

/// Per-attribute match between an executed placement and the gold one.
struct PartMatch {
  bool kind = false;
  bool color = false;
  bool coordinates = false; // occupied cell sets equal
  bool all() const { return kind && color && coordinates; }
};

PartMatch match_part(const PlaceAction &predicted, const PlaceAction &gold);

/// Multiset equality of (kind, color, occupied cells).
bool same_parts(const std::vector<PlaceAction> &a, const std::vector<PlaceAction> &b);

std::vector<PlaceAction> grid_actions(const GridState &grid);

} // namespace blockwright::eval
