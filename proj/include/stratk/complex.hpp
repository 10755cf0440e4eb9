#pragma once

// Finite regular cell complexes, cellular maps, pushouts along attaching
// maps, stratified spaces and edge-path presentations of pi_1.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stratk/error.hpp"

namespace stratk {

struct OrientedEdge {
  std::string edge;
  bool forward = true;

  OrientedEdge reversed() const { return {edge, !forward}; }
  friend bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
  friend auto operator<=>(const OrientedEdge&, const OrientedEdge&) = default;
};

using EdgePath = std::vector<OrientedEdge>;

EdgePath reverse_path(const EdgePath& p);

struct Cell {
  std::string id;
  int dim = 0;
  /// dim 1: {src, dst}. dim >= 3: facet ids. dim 2: {basepoint} when the
  /// walk is empty, otherwise unused.
  std::vector<std::string> boundary;
  /// dim 2 only: closed walk of oriented edges.
  EdgePath walk;
};

class CellComplex {
 public:
  void add_vertex(const std::string& id, int stratum = 0);
  void add_edge(const std::string& id, const std::string& src, const std::string& dst, int stratum = 0);
  /// Closed walk. An empty walk needs an explicit basepoint.
  void add_face(const std::string& id, const EdgePath& walk, int stratum = 0,
                const std::string& basepoint = "");
  /// Cells of dimension >= 3, given by their facets.
  void add_cell(const std::string& id, int dim, const std::vector<std::string>& facets, int stratum = 0);
  void add(const Cell& c, int stratum);

  bool has(const std::string& id) const { return cells_.count(id) > 0; }
  const Cell& cell(const std::string& id) const;
  const std::map<std::string, Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  int dim(const std::string& id) const { return cell(id).dim; }
  int dimension() const;

  std::vector<std::string> cells_of_dim(int d) const;
  std::vector<std::string> vertices() const { return cells_of_dim(0); }
  std::vector<std::string> edges() const { return cells_of_dim(1); }
  /// counts[d] = number of d-cells.
  std::vector<std::size_t> counts() const;
  long euler_characteristic() const;

  const std::string& src(const std::string& edge) const { return cell(edge).boundary.at(0); }
  const std::string& dst(const std::string& edge) const { return cell(edge).boundary.at(1); }
  std::string start(const OrientedEdge& e) const { return e.forward ? src(e.edge) : dst(e.edge); }
  std::string end(const OrientedEdge& e) const { return e.forward ? dst(e.edge) : src(e.edge); }

  /// Immediate faces, sorted and unique.
  std::vector<std::string> facets(const std::string& id) const;
  /// The cell and all of its faces.
  std::set<std::string> closure(const std::string& id) const;
  std::set<std::string> closure(const std::set<std::string>& ids) const;
  /// Vertex used to anchor a cell: itself, an edge's src, a 2-cell's walk
  /// start, the anchor of the first facet otherwise.
  std::string anchor(const std::string& id) const;

  int stratum(const std::string& id) const;
  const std::map<std::string, int>& strata() const { return stratum_; }
  void set_stratum(const std::string& id, int s);
  int max_stratum() const;
  std::set<std::string> stratum_cells(int s) const;

  /// Subcomplex on `ids`; throws construction when not closed under faces.
  CellComplex subcomplex(const std::set<std::string>& ids) const;
  bool is_subcomplex(const std::set<std::string>& ids) const;

  /// Connected components, each a sorted vertex list; ordered by least vertex.
  std::vector<std::vector<std::string>> components() const;
  /// Index into components() of the component containing the cell.
  std::size_t component_of(const std::string& id) const;

  friend bool operator==(const CellComplex& a, const CellComplex& b);

 private:
  void insert(Cell c, int stratum);
  void index_components() const;
  std::map<std::string, Cell> cells_;
  std::map<std::string, int> stratum_;
  mutable std::vector<std::vector<std::string>> components_;
  mutable std::map<std::string, std::size_t> component_index_;
  mutable bool components_ready_ = false;
};

/// Same cells and boundaries; stratum tags ignored.
bool same_cells(const CellComplex& a, const CellComplex& b);

/// Boundary-walk consistency, face existence and dimension drops.
ValidationReport validate_complex(const CellComplex& x);

/// Consecutive steps meet and the walk ends where it starts.
bool is_closed_walk(const CellComplex& x, const EdgePath& walk);

class CellularMap {
 public:
  CellularMap() = default;
  CellularMap(CellComplex src, CellComplex dst) : src_(std::move(src)), dst_(std::move(dst)) {}

  static CellularMap identity(const CellComplex& x);
  /// Inclusion of the subcomplex on `ids`.
  static CellularMap inclusion(const CellComplex& x, const std::set<std::string>& ids);
  static CellularMap inclusion(const CellComplex& sub, const CellComplex& x);

  const CellComplex& src() const { return src_; }
  const CellComplex& dst() const { return dst_; }

  void set_vertex(const std::string& v, const std::string& image);
  /// Edge mapped along an oriented path; empty path collapses the edge to
  /// the common image of its endpoints.
  void set_edge(const std::string& e, const EdgePath& path);
  /// Cells of dimension >= 2; an edge may only be sent to a vertex here.
  void set_cell(const std::string& c, const std::string& image);

  bool defined(const std::string& c) const { return image_.count(c) > 0 || paths_.count(c) > 0; }
  /// Carrier cell of the image. Throws map when undefined.
  std::string image(const std::string& c) const;
  const EdgePath& path(const std::string& e) const;
  /// Image of an edge path: concatenated edge images.
  EdgePath map_path(const EdgePath& p) const;
  /// Every dst cell met by the image of the open cell c.
  std::set<std::string> image_cells(const std::string& c) const;

  const std::map<std::string, std::string>& images() const { return image_; }
  const std::map<std::string, EdgePath>& paths() const { return paths_; }

 private:
  CellComplex src_, dst_;
  std::map<std::string, std::string> image_;
  std::map<std::string, EdgePath> paths_;
};

/// Cellularity: definedness, dimension bound, endpoint compatibility of edge
/// paths, boundary walks mapped onto the image's walk (a positive or
/// negative power) or onto a nullhomotopic word inside the image closure.
ValidationReport validate_map(const CellularMap& f);

/// g after f.
CellularMap compose(const CellularMap& g, const CellularMap& f);

struct PushoutResult {
  CellComplex total;
  CellularMap characteristic;  ///< M -> total
  CellularMap inclusion;       ///< X -> total
};

/// M u_h X: cells of M outside A keep their ids, X is included verbatim.
/// `h` maps the subcomplex A of M into X. New cells get tag `stratum`
/// (default: one above the largest tag of X).
PushoutResult build_pushout(const CellComplex& m, const std::set<std::string>& a, const CellularMap& h,
                            const CellComplex& x, std::optional<int> stratum = std::nullopt);

struct Layer {
  CellComplex m;
  std::set<std::string> a;
  CellularMap h;  ///< A -> the total complex of the layers below
};

struct StratifiedSpace {
  CellComplex base0;
  std::vector<Layer> layers;
};

/// Iterated pushout; base0 cells get tag 0 and layer k cells get tag k + 1.
CellComplex assemble(const StratifiedSpace& space);
/// Total complexes after each stage: [X0, X1, ..., Xn].
std::vector<CellComplex> assemble_stages(const StratifiedSpace& space);
/// Characteristic map M_k -> X_{k+1} of layer k.
CellularMap characteristic_map(const StratifiedSpace& space, std::size_t layer);

struct BoolReport {
  bool holds = true;
  std::vector<std::string> offending;
  std::string detail;
};

/// Every open cell of stratum i must land in open cells of stratum i.
BoolReport check_stratum_preserving(const CellularMap& f);

struct SpanningForest {
  std::vector<std::string> roots;
  std::map<std::string, OrientedEdge> parent;  ///< vertex -> edge arriving from its parent
  std::set<std::string> tree_edges;
  /// Path in the tree from the component root to v.
  EdgePath path_from_root(const CellComplex& x, const std::string& v) const;
};

/// BFS forest rooted at each component's least vertex, edges taken in id order.
SpanningForest spanning_forest(const CellComplex& x);

struct Pi1Presentation {
  std::string basepoint;
  std::set<std::string> tree_edges;
  std::vector<std::string> generators;  ///< non-tree edges, sorted
  /// Relator words: (generator index, +1 / -1).
  std::vector<std::vector<std::pair<std::size_t, int>>> relators;
  std::vector<std::string> relator_cells;
};

/// Presentation of pi_1 of the component with the given index.
Pi1Presentation pi1(const CellComplex& x, std::size_t component = 0);

/// X x [0,1]; cell s gives s@0, s@1 and s@I.
CellComplex prism(const CellComplex& x);
/// x -> x@0 or x@1.
CellularMap prism_end(const CellComplex& x, const CellComplex& prism_complex, int end);

}  // namespace stratk
