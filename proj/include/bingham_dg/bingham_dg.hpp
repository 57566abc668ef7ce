#pragma once

#include "assembly.hpp"
#include "basis.hpp"
#include "benchmarks.hpp"
#include "block_tridiagonal.hpp"
#include "cli.hpp"
#include "config.hpp"
#include "constitutive.hpp"
#include "error_norms.hpp"
#include "field.hpp"
#include "fluxes.hpp"
#include "io.hpp"
#include "mesh.hpp"
#include "newton.hpp"
#include "problem.hpp"
