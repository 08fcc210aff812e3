#include "pdsr/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdsr/errors.hpp"
#include "pdsr/rng.hpp"

namespace pdsr {

std::string_view material_name(Material m) {
  switch (m) {
    case Material::Air: return "air";
    case Material::Wood: return "wood";
    case Material::Brick: return "brick";
    case Material::Concrete: return "concrete";
  }
  return "air";
}

Material material_from_name(std::string_view name) {
  if (name == "air") return Material::Air;
  if (name == "wood") return Material::Wood;
  if (name == "brick") return Material::Brick;
  if (name == "concrete") return Material::Concrete;
  throw IoError("unknown material '" + std::string(name) + "'");
}

const Victim* Scenario::victim_at(Cell c) const {
  for (const Victim& v : victims) {
    if (v.cell == c) return &v;
  }
  return nullptr;
}

namespace {

int chebyshev(Cell a, Cell b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

void check_spec(const ScenarioSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw DomainError("scenario grid must be at least 1x1");
  }
  if (spec.clusters < 0 || spec.cells_per_cluster < 1) {
    throw DomainError("cluster counts must be non-negative, sizes positive");
  }
  if (spec.victims < 0 || spec.visible_victims < 0 ||
      spec.visible_victims > spec.victims) {
    throw DomainError("victim counts out of range");
  }
  if (spec.thickness_lo <= 0.0 || spec.thickness_hi < spec.thickness_lo) {
    throw DomainError("thickness range must be positive and ordered");
  }
  if (spec.brick_share < 0.0 || spec.concrete_share < 0.0 ||
      spec.brick_share + spec.concrete_share > 1.0) {
    throw DomainError("material shares must be in [0,1] and sum to at most 1");
  }
}

Material draw_material(const ScenarioSpec& spec, Rng& rng) {
  const double u = rng.uniform();
  if (u < spec.brick_share) return Material::Brick;
  if (u < spec.brick_share + spec.concrete_share) return Material::Concrete;
  return Material::Wood;
}

}  // namespace

Scenario generate_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  check_spec(spec);

  Scenario s;
  s.width = spec.width;
  s.height = spec.height;
  s.cell_size = spec.cell_size;
  s.seed = seed;

  Rng rng = Rng(seed).child("scene");

  // Cluster anchors, kept well apart so the grown blobs stay disjoint
  // under 4-connectivity.
  std::vector<Cell> anchors;
  for (int i = 0; i < spec.clusters; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < 5000 && !placed; ++attempt) {
      Cell c{rng.uniform_int(0, spec.width - 1),
             rng.uniform_int(0, spec.height - 1)};
      bool ok = true;
      for (Cell a : anchors) {
        if (chebyshev(a, c) < 4) {
          ok = false;
          break;
        }
      }
      if (ok) {
        anchors.push_back(c);
        placed = true;
      }
    }
    if (!placed) {
      throw DomainError("cannot place " + std::to_string(spec.clusters) +
                        " clusters on a " + std::to_string(spec.width) + "x" +
                        std::to_string(spec.height) + " grid");
    }
  }

  // Random-walk blob growth. A cell may join a blob only when none of
  // its 8-neighbours belongs to a different blob, which guarantees the
  // requested cluster count survives flood-fill.
  std::map<Cell, int> owner;
  std::vector<std::vector<Cell>> blobs(anchors.size());
  // Register every anchor up front so an earlier blob cannot squat on or
  // beside a later blob's seed cell.
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    owner[anchors[i]] = static_cast<int>(i);
    blobs[i].push_back(anchors[i]);
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const int budget = 50 * spec.cells_per_cluster;
    for (int attempt = 0;
         attempt < budget &&
         static_cast<int>(blobs[i].size()) < spec.cells_per_cluster;
         ++attempt) {
      Cell from = blobs[i][rng.below(blobs[i].size())];
      constexpr int dx[4] = {0, -1, 1, 0};
      constexpr int dy[4] = {-1, 0, 0, 1};
      const int d = static_cast<int>(rng.below(4));
      Cell c{from.x + dx[d], from.y + dy[d]};
      if (!s.in_grid(c) || owner.count(c)) continue;
      bool isolated = true;
      for (int oy = -1; oy <= 1 && isolated; ++oy) {
        for (int ox = -1; ox <= 1 && isolated; ++ox) {
          auto it = owner.find({c.x + ox, c.y + oy});
          if (it != owner.end() && it->second != static_cast<int>(i)) {
            isolated = false;
          }
        }
      }
      if (!isolated) continue;
      owner[c] = static_cast<int>(i);
      blobs[i].push_back(c);
    }
  }

  for (const auto& blob : blobs) {
    for (Cell c : blob) {
      RubbleLayer layer;
      layer.material = draw_material(spec, rng);
      layer.thickness_m = rng.uniform(spec.thickness_lo, spec.thickness_hi);
      s.columns[c] = {layer};
    }
  }

  // Victims go on shuffled damaged cells; the first visible_victims stay
  // on the surface, the rest are buried.
  std::vector<Cell> damaged;
  damaged.reserve(s.columns.size());
  for (const auto& [cell, column] : s.columns) damaged.push_back(cell);
  if (spec.victims > static_cast<int>(damaged.size())) {
    throw DomainError("spec asks for " + std::to_string(spec.victims) +
                      " victims but only " + std::to_string(damaged.size()) +
                      " damaged cells were generated");
  }
  rng.shuffle(damaged);
  for (int i = 0; i < spec.victims; ++i) {
    Victim v;
    v.id = i;
    v.cell = damaged[i];
    v.buried = i >= spec.visible_victims;
    v.respiration_rate = rng.uniform(spec.respiration_lo, spec.respiration_hi);
    v.heartbeat_rate = rng.uniform(spec.heartbeat_lo, spec.heartbeat_hi);
    v.chest_amplitude =
        rng.uniform(spec.chest_amplitude_lo, spec.chest_amplitude_hi);
    s.victims.push_back(v);
  }

  // Isolated no-fly cells: never on rubble, never pairwise adjacent, and
  // clear of the origin corner, so they cannot disconnect the grid.
  if (spec.no_fly_cells > 0) {
    std::vector<Cell> open;
    for (int y = 0; y < s.height; ++y) {
      for (int x = 0; x < s.width; ++x) {
        Cell c{x, y};
        if (!s.damaged(c) && chebyshev(c, {0, 0}) > 1) open.push_back(c);
      }
    }
    rng.shuffle(open);
    for (Cell c : open) {
      if (static_cast<int>(s.no_fly.size()) >= spec.no_fly_cells) break;
      bool ok = true;
      for (Cell nf : s.no_fly) {
        if (chebyshev(nf, c) < 2) {
          ok = false;
          break;
        }
      }
      if (ok) s.no_fly.insert(c);
    }
  }

  validate(s);
  return s;
}

std::vector<Cluster> find_clusters(const Scenario& scenario) {
  std::vector<Cluster> clusters;
  std::set<Cell> seen;
  // columns is row-major ordered, so components are labeled by first
  // cell encountered in row-major order.
  for (const auto& [start, column] : scenario.columns) {
    if (seen.count(start)) continue;
    Cluster cl;
    cl.id = static_cast<int>(clusters.size());
    std::vector<Cell> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      Cell c = stack.back();
      stack.pop_back();
      cl.cells.push_back(c);
      constexpr int dx[4] = {0, -1, 1, 0};
      constexpr int dy[4] = {-1, 0, 0, 1};
      for (int d = 0; d < 4; ++d) {
        Cell n{c.x + dx[d], c.y + dy[d]};
        if (scenario.damaged(n) && !seen.count(n)) {
          seen.insert(n);
          stack.push_back(n);
        }
      }
    }
    std::sort(cl.cells.begin(), cl.cells.end());

    double mx = 0.0, my = 0.0;
    for (Cell c : cl.cells) {
      mx += c.x;
      my += c.y;
    }
    mx /= static_cast<double>(cl.cells.size());
    my /= static_cast<double>(cl.cells.size());
    double best = std::numeric_limits<double>::infinity();
    for (Cell c : cl.cells) {
      const double d = (c.x - mx) * (c.x - mx) + (c.y - my) * (c.y - my);
      if (d < best) {
        best = d;
        cl.centroid = c;
      }
    }
    clusters.push_back(std::move(cl));
  }
  return clusters;
}

const RubbleColumn& overburden(const Scenario& scenario, Cell cell) {
  if (!scenario.in_grid(cell)) {
    throw DomainError("cell (" + std::to_string(cell.x) + "," +
                      std::to_string(cell.y) + ") is outside the grid");
  }
  static const RubbleColumn empty;
  auto it = scenario.columns.find(cell);
  return it == scenario.columns.end() ? empty : it->second;
}

void validate(const Scenario& scenario) {
  if (scenario.width < 1 || scenario.height < 1) {
    throw DomainError("scenario grid must be at least 1x1");
  }
  for (const auto& [cell, column] : scenario.columns) {
    if (!scenario.in_grid(cell)) {
      throw DomainError("rubble column outside the grid");
    }
    if (column.empty()) {
      throw DomainError("damaged cell with an empty column");
    }
    double total = 0.0;
    for (const RubbleLayer& layer : column) {
      if (layer.thickness_m <= 0.0) {
        throw DomainError("layer thickness must be positive");
      }
      if (layer.material == Material::Air) {
        throw DomainError("air is not a rubble layer");
      }
      total += layer.thickness_m;
    }
    if (total > 2.0) {
      throw DomainError("column thicker than the 2 m maximum");
    }
  }
  std::set<Cell> victim_cells;
  for (const Victim& v : scenario.victims) {
    if (!scenario.in_grid(v.cell)) {
      throw DomainError("victim outside the grid");
    }
    if (!victim_cells.insert(v.cell).second) {
      throw DomainError("two victims share a cell");
    }
    if (v.buried && !scenario.damaged(v.cell)) {
      throw DomainError("buried victim on an open cell");
    }
    if (v.respiration_rate < 0.1 || v.respiration_rate > 0.7) {
      throw DomainError("respiration rate outside [0.1, 0.7] Hz");
    }
    if (v.heartbeat_rate < 0.8 || v.heartbeat_rate > 3.0) {
      throw DomainError("heartbeat rate outside [0.8, 3.0] Hz");
    }
    if (v.chest_amplitude <= 0.0 || v.chest_amplitude > 0.02) {
      throw DomainError("chest amplitude outside (0, 0.02] m");
    }
  }
  for (Cell c : scenario.no_fly) {
    if (!scenario.in_grid(c)) {
      throw DomainError("no-fly cell outside the grid");
    }
  }
}

}  // namespace pdsr
