#pragma once

#include "cusp.hpp"
#include "error.hpp"
#include "gf.hpp"
#include "hecke_formula.hpp"
#include "hecke_matrix.hpp"
#include "hecke_oracle.hpp"
#include "linalg.hpp"
#include "p1.hpp"
#include "poly.hpp"
#include "sheaves.hpp"
#include "spectra.hpp"
