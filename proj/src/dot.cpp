#include "tmpn/dot.hpp"

#include <map>
#include <sstream>
#include <vector>

namespace tmpn {

namespace {

std::string escaped(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const timed_petri_net& net) {
  std::ostringstream out;
  out << "digraph net {\n  rankdir=LR;\n";

  for (std::size_t p = 0; p < net.places.size(); ++p) {
    out << "  p" << p << " [shape=ellipse, label=\"" << escaped(net.places[p].name);
    if (net.initial_marking[p] > 0) out << "\\n" << net.initial_marking[p];
    out << "\"];\n";
  }

  std::map<int, std::vector<std::size_t>> by_locality;
  for (std::size_t t = 0; t < net.transitions.size(); ++t)
    by_locality[net.transitions[t].locality].push_back(t);
  for (const auto& [loc, members] : by_locality) {
    out << "  subgraph cluster_loc" << loc << " {\n    label=\"locality " << loc << "\";\n";
    for (std::size_t t : members) {
      const transition_decl& tr = net.transitions[t];
      out << "    t" << t << " [shape=box, label=\"" << escaped(tr.name) << "@" << tr.delay
          << "\"];\n";
    }
    out << "  }\n";
  }

  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    for (const arc& a : net.pre[t]) {
      out << "  p" << a.place << " -> t" << t;
      if (a.weight > 1) out << " [label=\"" << a.weight << "\"]";
      out << ";\n";
    }
    for (const arc& a : net.post[t]) {
      out << "  t" << t << " -> p" << a.place;
      if (a.weight > 1) out << " [label=\"" << a.weight << "\"]";
      out << ";\n";
    }
  }

  out << "}\n";
  return out.str();
}

}  // namespace tmpn
