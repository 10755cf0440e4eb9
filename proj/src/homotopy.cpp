#include "stratk/homotopy.hpp"

namespace stratk {

std::string prism_cell(const std::string& c, char t) { return c + "@" + t; }

StratifiedSpace prism_space(const StratifiedSpace& s) {
  StratifiedSpace p;
  p.base0 = prism(s.base0);
  for (const auto& l : s.layers) {
    Layer q;
    q.m = prism(l.m);
    for (const auto& a : l.a)
      for (char t : {'0', '1', 'I'}) q.a.insert(prism_cell(a, t));
    q.h = CellularMap(q.m.subcomplex(q.a), assemble(p));
    for (const auto& a : l.a) {
      const int d = l.m.dim(a);
      const std::string img = l.h.image(a);
      if (d == 0) {
        for (char t : {'0', '1'}) q.h.set_vertex(prism_cell(a, t), prism_cell(img, t));
        q.h.set_edge(prism_cell(a, 'I'), {{prism_cell(img, 'I'), true}});
        continue;
      }
      if (d == 1) {
        const auto& path = l.h.path(a);
        if (path.size() > 1) throw Error(Error::Kind::construction, a, "attaching map must send each edge to a single cell");
        for (char t : {'0', '1'}) {
          EdgePath pt;
          for (const auto& st : path) pt.push_back({prism_cell(st.edge, t), st.forward});
          q.h.set_edge(prism_cell(a, t), pt);
        }
        if (path.empty()) {
          // the square collapses onto the vertical edge of the image vertex
          q.h.set_cell(prism_cell(a, 'I'), prism_cell(img, 'I'));
        } else {
          q.h.set_cell(prism_cell(a, 'I'), prism_cell(path.front().edge, 'I'));
        }
        continue;
      }
      for (char t : {'0', '1', 'I'}) q.h.set_cell(prism_cell(a, t), prism_cell(img, t));
    }
    p.layers.push_back(std::move(q));
  }
  return p;
}

CellularMap homotopy_end(const CellularMap& h, const CellComplex& x, int t) {
  return compose(h, prism_end(x, h.src(), t));
}

HomotopyReport homotopy_invariance_check(const StratifiedSpace& s, const CellularMap& h, const StratifiedBundle& y,
                                         std::optional<std::vector<CellularMap>> decomposition) {
  const StratifiedSpace p = prism_space(s);
  if (!decomposition) decomposition = infer_decomposition(p, h, y.space);
  // the homotopy itself must pull back: it is stratum preserving
  pullback_stratified(p, h, y, decomposition);
  const CellComplex x = assemble(s);
  std::vector<StratifiedBundle> ends;
  for (int t : {0, 1}) {
    std::vector<CellularMap> g;
    for (std::size_t k = 0; k < s.layers.size(); ++k)
      g.push_back(compose((*decomposition)[k], prism_end(s.layers[k].m, p.layers[k].m, t)));
    ends.push_back(pullback_stratified(s, homotopy_end(h, x, t), y, g));
  }
  const auto iso = is_isomorphic_stratified(ends[0], ends[1]);
  HomotopyReport r;
  r.holds = static_cast<bool>(iso);
  r.witness = iso.witness;
  r.detail = r.holds ? "end pullbacks are isomorphic" : iso.reason;
  return r;
}

}  // namespace stratk
