#pragma once

#include "qsearch/dense_operator.hpp"
#include "qsearch/diffusion.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/format.hpp"
#include "qsearch/gates.hpp"
#include "qsearch/oracle.hpp"
#include "qsearch/phase_ops.hpp"
#include "qsearch/schrodinger.hpp"
#include "qsearch/search.hpp"
#include "qsearch/statevec.hpp"
