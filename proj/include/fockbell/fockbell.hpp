// fockbell.hpp
// Umbrella header.

#pragma once

#include "fockbell/bell.hpp"
#include "fockbell/measurement.hpp"
#include "fockbell/optimize.hpp"
#include "fockbell/state.hpp"
