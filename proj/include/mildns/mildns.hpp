#pragma once

// Umbrella header: the whole library in one include.

#include <mildns/cli.hpp>
#include <mildns/config.hpp>
#include <mildns/fft.hpp>
#include <mildns/field.hpp>
#include <mildns/fit.hpp>
#include <mildns/grid.hpp>
#include <mildns/kernels.hpp>
#include <mildns/profiles.hpp>
#include <mildns/quadrature.hpp>
#include <mildns/report.hpp>
#include <mildns/rng.hpp>
#include <mildns/solver.hpp>
#include <mildns/spectral.hpp>
#include <mildns/verify.hpp>
#include <mildns/weighted.hpp>
