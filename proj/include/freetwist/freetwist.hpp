#pragma once

// Everything in one include.

#include "freetwist/experiment.hpp"
#include "freetwist/pingpong.hpp"
