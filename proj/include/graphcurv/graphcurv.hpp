#pragma once

#include <graphcurv/curvature.hpp>
#include <graphcurv/cutoff.hpp>
#include <graphcurv/generators.hpp>
#include <graphcurv/graph.hpp>
#include <graphcurv/harnack.hpp>
#include <graphcurv/heat.hpp>
#include <graphcurv/io.hpp>
#include <graphcurv/operators.hpp>
#include <graphcurv/report.hpp>
#include <graphcurv/rng.hpp>
#include <graphcurv/spectral.hpp>
#include <graphcurv/version.hpp>
