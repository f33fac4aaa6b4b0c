#ifndef SOFTTILER_SOFTTILER_HPP_
#define SOFTTILER_SOFTTILER_HPP_

#include "softtiler/arc.hpp"
#include "softtiler/cell.hpp"
#include "softtiler/eeb.hpp"
#include "softtiler/export.hpp"
#include "softtiler/group.hpp"
#include "softtiler/realize.hpp"
#include "softtiler/solution_set.hpp"
#include "softtiler/sphere.hpp"
#include "softtiler/vec.hpp"

#endif  // SOFTTILER_SOFTTILER_HPP_
