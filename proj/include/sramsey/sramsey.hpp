#pragma once

#include "canonical.hpp"
#include "catalog.hpp"
#include "certificate.hpp"
#include "class_spec.hpp"
#include "coloring_search.hpp"
#include "convex.hpp"
#include "embeddings.hpp"
#include "flows.hpp"
#include "fraisse.hpp"
#include "orbit_system.hpp"
#include "parallel.hpp"
#include "ramsey.hpp"
#include "rational.hpp"
#include "simplex.hpp"
#include "structure.hpp"
#include "text_format.hpp"
