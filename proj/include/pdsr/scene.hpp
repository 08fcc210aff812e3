#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pdsr {

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(Cell a, Cell b) = default;
  // Row-major order: top row first, then left to right.
  friend bool operator<(Cell a, Cell b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  }
};

enum class Material { Air, Wood, Brick, Concrete };

std::string_view material_name(Material m);
Material material_from_name(std::string_view name);  // throws IoError

struct RubbleLayer {
  Material material = Material::Air;
  double thickness_m = 0.0;

  friend bool operator==(const RubbleLayer&, const RubbleLayer&) = default;
};

// Empty column means open ground.
using RubbleColumn = std::vector<RubbleLayer>;

struct Victim {
  int id = 0;
  Cell cell;
  double respiration_rate = 0.0;  // Hz
  double heartbeat_rate = 0.0;    // Hz
  double chest_amplitude = 0.0;   // m
  bool buried = true;             // false: visible from above
};

struct Scenario {
  int width = 0;
  int height = 0;
  double cell_size = 1.0;  // m
  std::uint64_t seed = 0;
  std::string config_digest;  // provenance of the generating config
  std::map<Cell, RubbleColumn> columns;
  std::set<Cell> no_fly;
  std::vector<Victim> victims;

  bool in_grid(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  bool damaged(Cell c) const { return columns.count(c) != 0; }
  const Victim* victim_at(Cell c) const;
};

struct Cluster {
  int id = 0;
  std::vector<Cell> cells;  // row-major sorted
  Cell centroid;
};

struct ScenarioSpec {
  int width = 24;
  int height = 18;
  double cell_size = 1.0;
  int clusters = 3;
  int cells_per_cluster = 12;
  int victims = 4;
  int visible_victims = 0;  // remainder are buried
  double brick_share = 0.0;
  double concrete_share = 0.0;
  double thickness_lo = 0.03;  // m, per layer
  double thickness_hi = 0.10;
  double max_total_thickness = 2.0;
  int no_fly_cells = 0;
  double respiration_lo = 0.2;  // Hz
  double respiration_hi = 0.4;
  double heartbeat_lo = 1.0;  // Hz
  double heartbeat_hi = 1.5;
  double chest_amplitude_lo = 0.003;  // m
  double chest_amplitude_hi = 0.008;
};

// Deterministic for fixed (spec, seed). Throws DomainError when the spec
// cannot be realized (more victims than damaged cells, clusters that do
// not fit the grid).
Scenario generate_scenario(const ScenarioSpec& spec, std::uint64_t seed);

// 4-connected components of damaged cells, labeled in row-major order of
// first cell encountered. Centroid is the member cell nearest the
// arithmetic mean of the cluster (row-major order breaks ties).
std::vector<Cluster> find_clusters(const Scenario& scenario);

// Column at cell; empty column for undamaged cells. Throws DomainError
// for cells outside the grid.
const RubbleColumn& overburden(const Scenario& scenario, Cell cell);

// Checks the documented invariants (victims inside grid, unique victim
// cells, buried victims under rubble, vital signs in range, positive
// layer thicknesses). Throws DomainError on violation.
void validate(const Scenario& scenario);

}  // namespace pdsr
