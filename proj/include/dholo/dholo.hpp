#ifndef DHOLO_DHOLO_HPP
#define DHOLO_DHOLO_HPP

#include "core.hpp"
#include "graph.hpp"
#include "harmonic.hpp"
#include "eisenstein.hpp"
#include "roots.hpp"
#include "moments.hpp"
#include "hex_lattice.hpp"
#include "trivalent.hpp"
#include "t3.hpp"
#include "walk.hpp"
#include "tr3.hpp"
#include "conjugate.hpp"
#include "render.hpp"
#include "io.hpp"

#endif  // DHOLO_DHOLO_HPP
