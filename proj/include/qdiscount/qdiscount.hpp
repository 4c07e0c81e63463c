#ifndef QDISCOUNT_QDISCOUNT_HPP
#define QDISCOUNT_QDISCOUNT_HPP

#include "qdiscount/deformed.hpp"
#include "qdiscount/errors.hpp"
#include "qdiscount/fitting.hpp"
#include "qdiscount/io.hpp"
#include "qdiscount/model.hpp"
#include "qdiscount/numerics.hpp"
#include "qdiscount/simplex.hpp"
#include "qdiscount/titration.hpp"

#endif  // QDISCOUNT_QDISCOUNT_HPP
