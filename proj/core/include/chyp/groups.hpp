#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chyp/heisenberg.hpp"
#include "chyp/isometry.hpp"

namespace chyp {

struct Generator {
  std::variant<HeisIsometry, CMat> element;
  std::string label;

  bool is_heis() const { return std::holds_alternative<HeisIsometry>(element); }
  const HeisIsometry& heis() const { return std::get<HeisIsometry>(element); }
  CMat matrix() const;
};

/// A finitely generated group given by generators. Discreteness is assumed,
/// not checked.
struct GroupSpec {
  int n = 2;
  std::vector<Generator> generators;

  void validate() const;
  std::vector<Isometry> isometries() const;
  bool all_heis() const;

  static GroupSpec from_heis(std::vector<HeisIsometry> gens, std::vector<std::string> labels = {});
};

/// Letters are +(i+1) for generator i and -(i+1) for its inverse.
using Word = std::vector<int>;

std::string word_to_string(const Word& w, const GroupSpec& g);

struct TableEntry {
  Isometry element;
  Word word;
};

struct EnumerateOptions {
  std::size_t cap = 1'000'000;
  double grid = 1e-8;
  // Distinct keys closer than this in canonical form raise near_duplicates.
  double near_grid = 1e-6;
};

/// Products of at most L letters, deduplicated by canonical form. Entry 0 is
/// the identity (empty word). Order: word length, then lexicographic in the
/// letter order g1, g1^-1, g2, g2^-1, ...
struct ElementTable {
  int n = 2;
  int radius = 0;
  std::vector<TableEntry> entries;
  std::size_t near_duplicates = 0;

  std::size_t size() const { return entries.size(); }
};

ElementTable enumerate_elements(const GroupSpec& g, int L, const EnumerateOptions& opt = {});

/// {g y} for every entry, same order as the table.
std::vector<HPoint> orbit(const ElementTable& t, const HPoint& y);

struct LimitSetOptions {
  // Orbit points whose lift satisfies -<z,z>/|z|^2 below this are treated as
  // approaching the boundary.
  double approach_ratio = 1e-3;
  // Merge radius in the chordal metric of the boundary sphere (ball model).
  double merge_radius = 0.5;
};

struct LimitCluster {
  HPoint point;        // boundary point or infinity
  std::size_t members = 0;
  double chordal_to_infinity = 0.0;
};

/// Boundary projections of orbit points that approach the boundary, grouped
/// greedily (deepest point first) in the chordal metric. A cluster whose
/// representative lies within merge_radius of infinity is reported as
/// infinity.
std::vector<LimitCluster> limit_set_sample(const GroupSpec& g, int L, const HPoint& y,
                                           const LimitSetOptions& opt = {});

/// Chordal distance between boundary points in the ball model.
double chordal_distance(const HPoint& a, const HPoint& b);

}  // namespace chyp
