#pragma once

#include "dnaobf/error.hpp"
#include "dnaobf/lattice.hpp"
#include "dnaobf/rng.hpp"
#include "dnaobf/seqio.hpp"
#include "dnaobf/align.hpp"
#include "dnaobf/search.hpp"
#include "dnaobf/blossom.hpp"
#include "dnaobf/cluster.hpp"
#include "dnaobf/matching.hpp"
#include "dnaobf/report.hpp"
