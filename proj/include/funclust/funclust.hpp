#pragma once

#include "funclust/convergence.hpp"
#include "funclust/error.hpp"
#include "funclust/f2.hpp"
#include "funclust/functorial.hpp"
#include "funclust/gh.hpp"
#include "funclust/io.hpp"
#include "funclust/linkage.hpp"
#include "funclust/metric.hpp"
#include "funclust/persistence.hpp"
#include "funclust/random.hpp"
#include "funclust/ultrametric.hpp"
#include "funclust/union_find.hpp"
#include "funclust/zigzag.hpp"
