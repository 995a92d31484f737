#pragma once

#include "gsat/algebra.hpp"
#include "gsat/baselines/btree.hpp"
#include "gsat/baselines/splay.hpp"
#include "gsat/interpolation_index.hpp"
#include "gsat/policy.hpp"
#include "gsat/range.hpp"
#include "gsat/slot_tree.hpp"
#include "gsat/tree.hpp"
#include "gsat/types.hpp"
#include "gsat/workload.hpp"
