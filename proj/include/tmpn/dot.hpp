#pragma once

#include <string>

#include "tmpn/petri.hpp"

namespace tmpn {

// Graphviz rendering of a net: ellipse places carrying the initial marking,
// box transitions labelled name@delay, arcs labelled with their weight when
// it exceeds 1. Transitions sharing a locality are grouped into a cluster.
std::string to_dot(const timed_petri_net& net);

}  // namespace tmpn
